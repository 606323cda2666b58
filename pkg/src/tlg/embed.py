"""Embeddings of general graphs into simple ones, TLG** test, moralization."""

from __future__ import annotations

from dataclasses import dataclass

from .cells import find_cells
from .graph import TimeLikeGraph, validate_tlg
from .paths import DEFAULT_CAP
from .stingy import stingy_order
from .tower import Tower, TowerBuilder, replay


@dataclass(frozen=True)
class Embedding:
    graph: TimeLikeGraph
    bottom: int
    top: int
    first_synthetic_edge: int

    def is_synthetic_edge(self, e: int) -> bool:
        return e >= self.first_synthetic_edge


def embed_with_ends(g: TimeLikeGraph, mode: str = "minimal") -> Embedding:
    """Add a synthetic earliest and latest vertex and wire them in.

    Synthetic times sit one window-width below the earliest and above the
    latest time (so -1 and 2 for graphs on [0, 1]).
    """
    if mode not in ("minimal", "maximal"):
        raise ValueError(f"unknown embedding mode {mode!r}")
    tmin, tmax = g.vertices[0].time, g.vertices[-1].time
    width = tmax - tmin if tmax > tmin else 1.0
    bottom, top = g.next_vertex_id(), g.next_vertex_id() + 1
    first = g.next_edge_id()
    nxt = first
    es = [(e.id, e.tail, e.head) for e in g.edges]
    if mode == "minimal":
        starts, ends = g.entrances(), g.exits()
    else:
        starts = ends = g.vertex_ids
    for v in starts:
        es.append((nxt, bottom, v))
        nxt += 1
    for v in ends:
        es.append((nxt, v, top))
        nxt += 1
    vs = list(g.vertices) + [(bottom, tmin - width), (top, tmax + width)]
    return Embedding(TimeLikeGraph(vs, es, "simple"), bottom, top, first)


def embed(g: TimeLikeGraph, mode: str = "minimal") -> TimeLikeGraph:
    return embed_with_ends(g, mode).graph


@dataclass
class StarStarResult:
    verdict: bool
    tower: Tower | None = None
    embedding: Embedding | None = None
    embedded_order: list | None = None
    offending_path: tuple | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict

    def embedded_tower(self) -> Tower:
        b = TowerBuilder(self.embedding.graph)
        b.seed_path(self.embedded_order[0])
        for p in self.embedded_order[1:]:
            b.edge_path(p)
        return b.tower()


def is_tlg_star_star(g: TimeLikeGraph, cap: int = DEFAULT_CAP) -> StarStarResult:
    """Decide TLG** membership through the maximal embedding.

    The greedy order found on the embedding is translated back: paths
    inside g become add_edge moves, paths with one synthetic end become
    add_leaf moves, paths with both become new components, and paths with
    no edge of g are dropped.
    """
    rep = validate_tlg(g, "general")
    if not rep.ok:
        return StarStarResult(False, reason="not a TLG: " + "; ".join(rep.problems))
    emb = embed_with_ends(g, "maximal")
    eg = emb.graph
    e0 = g.edges[0]
    into = {eg.edge(x).head: x for x in eg.out_edges[emb.bottom]}
    outof = {eg.edge(x).tail: x for x in eg.in_edges[emb.top]}
    start = (into[e0.tail], e0.id, outof[e0.head])
    accepted, bad = stingy_order(eg, start, cap)
    if bad is not None:
        return StarStarResult(False, embedding=emb, embedded_order=accepted, offending_path=bad,
                              reason=f"embedded path {list(bad)} joins unconnected vertices")
    b = TowerBuilder(g)
    for i, p in enumerate(accepted):
        inner = [e for e in p if not emb.is_synthetic_edge(e)]
        from_bottom = eg.edge(p[0]).tail == emb.bottom
        to_top = eg.edge(p[-1]).head == emb.top
        if not inner:
            continue
        if i == 0:
            b.seed_path(inner)
        elif from_bottom and to_top:
            b.component_path(inner)
        elif from_bottom:
            b.leaf_path(inner, "backward")
        elif to_top:
            b.leaf_path(inner, "forward")
        else:
            b.edge_path(inner)
    tower = b.tower()
    replay(tower, "general")
    return StarStarResult(True, tower=tower, embedding=emb, embedded_order=accepted)


def moralize(g: TimeLikeGraph, cap: int = DEFAULT_CAP) -> TimeLikeGraph:
    """Add one start-to-end edge per truly simple cell endpoint pair.

    Half-cells of general graphs have a synthetic endpoint once embedded, so
    they contribute no edges.
    """
    pairs = sorted({(c.start, c.end) for c in find_cells(g, cap, half_cells=False) if c.truly_simple})
    es = [(e.id, e.tail, e.head) for e in g.edges]
    nxt = g.next_edge_id()
    for a, b in pairs:
        es.append((nxt, a, b))
        nxt += 1
    return TimeLikeGraph(g.vertices, es, g.kind)


def mrf_vertices(g: TimeLikeGraph) -> list[int]:
    """Branch vertices (degree at least 3) plus entrances and exits."""
    w = {v for v in g.vertex_ids if g.degree(v) >= 3}
    w |= set(g.entrances()) | set(g.exits())
    return [v for v in g.vertex_ids if v in w]


def mrf_adjacency(g: TimeLikeGraph, cap: int = DEFAULT_CAP) -> tuple[list[int], set]:
    """Markov-field skeleton on mrf_vertices.

    Two such vertices are adjacent when a time-path of the moralized graph
    joins them without passing through any other of them.
    """
    w = mrf_vertices(g)
    ws = set(w)
    m = moralize(g, cap)
    adj = set()
    for a in w:
        seen = set()
        todo = [a]
        while todo:
            x = todo.pop()
            for e in m.out_edges[x]:
                h = m.edge(e).head
                if h in ws:
                    adj.add(frozenset((a, h)))
                elif h not in seen:
                    seen.add(h)
                    todo.append(h)
    return w, adj
