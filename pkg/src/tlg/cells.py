"""Cells, half-cells, their classification, and the cell collapse map."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import GraphError, TimeLikeGraph
from .paths import DEFAULT_CAP, PathCapExceeded, path_vertices, time_paths


@dataclass(frozen=True)
class Cell:
    side_a: tuple
    side_b: tuple
    start: object
    end: object
    kind: str = "cell"
    simple: bool = False
    truly_simple: bool = False

    @property
    def classification(self) -> str:
        if self.kind != "cell":
            return self.kind
        if self.truly_simple:
            return "truly-simple"
        return "simple" if self.simple else "cell"


def _undirected_connected(g: TimeLikeGraph, allowed: set, src: set, dst: set) -> bool:
    """Is some vertex of src joined to some vertex of dst inside allowed?"""
    src, dst = src & allowed, dst & allowed
    if not src or not dst:
        return False
    seen = set(src)
    todo = list(src)
    while todo:
        x = todo.pop()
        if x in dst:
            return True
        for e in g.out_edges[x] + g.in_edges[x]:
            ed = g.edge(e)
            y = ed.head if ed.tail == x else ed.tail
            if y in allowed and y not in seen:
                seen.add(y)
                todo.append(y)
    return False


def _timepath_between(g: TimeLikeGraph, xs: set, ys: set) -> bool:
    return any(g.reaches(x, y) or g.reaches(y, x) for x in xs for y in ys)


def classify_cell(g: TimeLikeGraph, side_a, side_b) -> Cell:
    va, vb = path_vertices(g, side_a), path_vertices(g, side_b)
    u, v = va[0], va[-1]
    if vb[0] != u or vb[-1] != v:
        raise GraphError("cell sides are not co-terminal")
    ia, ib = set(va[1:-1]), set(vb[1:-1])
    if ia & ib or tuple(side_a) == tuple(side_b):
        raise GraphError("cell sides share interior vertices")
    simple = not _timepath_between(g, ia, ib)
    inside = set(g.descendants(u) & g.ancestors(v)) - {u, v}
    truly = not _undirected_connected(g, inside, ia, ib)
    a, b = sorted((tuple(side_a), tuple(side_b)))
    return Cell(a, b, u, v, "cell", simple, truly)


def _half(g: TimeLikeGraph, side_a, side_b, kind: str) -> Cell:
    va, vb = path_vertices(g, side_a), path_vertices(g, side_b)
    if kind == "right-half":
        pivot = va[-1]
        region = set(g.ancestors(pivot)) - {pivot}
        start, end = (va[0], vb[0]), pivot
    else:
        pivot = va[0]
        region = set(g.descendants(pivot)) - {pivot}
        start, end = pivot, (va[-1], vb[-1])
    sa, sb = set(va) - {pivot}, set(vb) - {pivot}
    simple = not _timepath_between(g, sa, sb)
    truly = not _undirected_connected(g, region, sa, sb)
    a, b = sorted((tuple(side_a), tuple(side_b)))
    return Cell(a, b, start, end, kind, simple, truly)


def find_cells(g: TimeLikeGraph, cap: int = DEFAULT_CAP, half_cells: bool | None = None) -> list[Cell]:
    """All cells of g with their classification; half-cells for general graphs."""
    count = 0
    out = []
    ids = g.vertex_ids
    for u in ids:
        for v in ids:
            if u == v or not g.reaches(u, v):
                continue
            ps = time_paths(g, u, v, cap)
            count += len(ps)
            if count > cap:
                raise PathCapExceeded(f"more than {cap} paths while searching cells")
            verts = [set(path_vertices(g, p)[1:-1]) for p in ps]
            for i in range(len(ps)):
                for j in range(i + 1, len(ps)):
                    if not verts[i] & verts[j]:
                        out.append(classify_cell(g, ps[i], ps[j]))
    if half_cells is None:
        half_cells = g.kind == "general"
    if half_cells:
        out.extend(_half_cells(g, cap))
    return out


def _half_cells(g: TimeLikeGraph, cap: int) -> list[Cell]:
    out = []
    ent, ex = g.entrances(), g.exits()
    for m in g.vertex_ids:
        groups = [(k, p) for k in ent if k != m for p in time_paths(g, k, m, cap)]
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                (k1, p1), (k2, p2) = groups[i], groups[j]
                if k1 == k2:
                    continue
                if set(path_vertices(g, p1)) & set(path_vertices(g, p2)) == {m}:
                    out.append(_half(g, p1, p2, "right-half"))
        groups = [(x, p) for x in ex if x != m for p in time_paths(g, m, x, cap)]
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                (x1, p1), (x2, p2) = groups[i], groups[j]
                if x1 == x2:
                    continue
                if set(path_vertices(g, p1)) & set(path_vertices(g, p2)) == {m}:
                    out.append(_half(g, p1, p2, "left-half"))
    return out


def cell_collapse(g: TimeLikeGraph, cell: Cell) -> TimeLikeGraph:
    """Glue the two sides of a cell into one time-path.

    Cell vertices with equal times merge into the smallest id among them;
    consecutive merged vertices are joined by fresh chain edges; every edge
    off the cell is re-attached to the images of its endpoints.
    """
    if cell.kind != "cell":
        raise GraphError("only full cells can be collapsed")
    for e in cell.side_a + cell.side_b:
        if not g.has_edge(e):
            raise GraphError(f"cell edge {e} not in graph")
    checked = classify_cell(g, cell.side_a, cell.side_b)
    if (checked.start, checked.end) != (cell.start, cell.end):
        raise GraphError("cell endpoints do not match its sides")
    on_cell = set(path_vertices(g, cell.side_a)) | set(path_vertices(g, cell.side_b))
    by_time: dict[float, list[int]] = {}
    for v in on_cell:
        by_time.setdefault(g.time(v), []).append(v)
    image = {v: min(group) for group in by_time.values() for v in group}
    vs = [v for v in g.vertices if v.id not in on_cell or image[v.id] == v.id]
    cell_edges = set(cell.side_a) | set(cell.side_b)
    es = [(e.id, image.get(e.tail, e.tail), image.get(e.head, e.head)) for e in g.edges if e.id not in cell_edges]
    nxt = g.next_edge_id()
    chain = [min(by_time[t]) for t in sorted(by_time)]
    for a, b in zip(chain, chain[1:]):
        es.append((nxt, a, b))
        nxt += 1
    return TimeLikeGraph(vs, es, g.kind)
