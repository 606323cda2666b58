"""Greedy membership test for the TLG* family.

Starting from a full time-path, repeatedly take the unused time-path of
smallest time span whose endpoints are already built. The path is accepted
only if its endpoints are already joined by a time-path in the partial graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import GraphError, TimeLikeGraph, validate_tlg
from .paths import DEFAULT_CAP, PathCapExceeded, full_time_paths, path_vertices
from .tower import Tower, TowerBuilder


@dataclass
class StarResult:
    verdict: bool
    tower: Tower | None = None
    offending_path: tuple | None = None
    reason: str = ""
    order: list | None = None

    def __bool__(self) -> bool:
        return self.verdict


def _first_full_path(g: TimeLikeGraph) -> tuple:
    path = []
    x = g.entrances()[0]
    while g.out_edges[x]:
        e = g.out_edges[x][0]
        path.append(e)
        x = g.edge(e).head
    return tuple(path)


def check_full_path(g: TimeLikeGraph, path) -> None:
    vs = path_vertices(g, path)
    for e, x in zip(path, vs):
        if g.edge(e).tail != x:
            raise GraphError(f"edge {e} does not continue the path")
    if not path or g.in_edges[vs[0]] or g.out_edges[vs[-1]]:
        raise GraphError("start path must run from an entrance to an exit")


def _candidates(g, built_v, built_e, cap):
    """Time-paths of unused edges between built vertices with new interiors."""
    out = []
    count = 0
    for k in sorted(built_v):
        stack = []

        def walk(x):
            nonlocal count
            for e in g.out_edges[x]:
                if e in built_e:
                    continue
                h = g.edge(e).head
                stack.append(e)
                if h in built_v:
                    out.append((g.time(h) - g.time(k), tuple(stack), k, h))
                    count += 1
                    if count > cap:
                        raise PathCapExceeded(f"more than {cap} candidate paths")
                else:
                    walk(h)
                stack.pop()

        walk(k)
    return out


def _reaches(adj, a, b) -> bool:
    seen, todo = {a}, [a]
    while todo:
        x = todo.pop()
        if x == b:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return False


def stingy_order(g: TimeLikeGraph, start=None, cap: int = DEFAULT_CAP):
    """Run the greedy loop. Returns (accepted paths, offending path or None)."""
    path = tuple(start) if start not in (None, "auto") else _first_full_path(g)
    check_full_path(g, path)
    built_v = set(path_vertices(g, path))
    built_e = set(path)
    adj: dict = {}
    for e in path:
        adj.setdefault(g.edge(e).tail, []).append(g.edge(e).head)
    accepted = [path]
    while len(built_e) < len(g.edges):
        cands = _candidates(g, built_v, built_e, cap)
        if not cands:
            return accepted, ()
        span, p, k, h = min(cands, key=lambda c: (c[0], c[1]))
        if not _reaches(adj, k, h):
            return accepted, p
        accepted.append(p)
        for e in p:
            ed = g.edge(e)
            adj.setdefault(ed.tail, []).append(ed.head)
            built_e.add(e)
            built_v.add(ed.head)
    return accepted, None


def is_tlg_star(g: TimeLikeGraph, start=None, cap: int = DEFAULT_CAP) -> StarResult:
    """Decide TLG* membership; on success return a replayable tower."""
    rep = validate_tlg(g, "simple")
    if not rep.ok:
        return StarResult(False, reason="not a simple TLG: " + "; ".join(rep.problems))
    accepted, bad = stingy_order(g, start, cap)
    if bad is not None:
        return StarResult(False, offending_path=bad, order=accepted,
                          reason=f"path {list(bad)} joins vertices with no time-path between them")
    b = TowerBuilder(g)
    b.seed_path(accepted[0])
    for p in accepted[1:]:
        b.edge_path(p)
    return StarResult(True, tower=b.tower(), order=accepted)
