"""Time-path enumeration and interval subgraphs."""

from __future__ import annotations

from .graph import GraphError, TimeLikeGraph

DEFAULT_CAP = 10**6


class PathCapExceeded(RuntimeError):
    """Path enumeration hit its cap; raise the cap to continue."""


def path_vertices(g: TimeLikeGraph, path) -> list[int]:
    """Vertex sequence visited by an edge sequence."""
    if not path:
        return []
    out = [g.edge(path[0]).tail]
    for e in path:
        out.append(g.edge(e).head)
    return out


def time_paths(g: TimeLikeGraph, u: int, v: int, cap: int = DEFAULT_CAP) -> list[tuple]:
    """All time-paths from u to v as edge-id tuples, in lexicographic order."""
    if not g.reaches(u, v) or u == v:
        return []
    out: list[tuple] = []
    stack: list[int] = []

    def walk(x):
        if x == v:
            out.append(tuple(stack))
            if len(out) > cap:
                raise PathCapExceeded(f"more than {cap} paths from {u} to {v}")
            return
        for e in g.out_edges[x]:
            h = g.edge(e).head
            if g.reaches(h, v):
                stack.append(e)
                walk(h)
                stack.pop()

    walk(u)
    return out


def full_time_paths(g: TimeLikeGraph, cap: int = DEFAULT_CAP) -> list[tuple]:
    """Every time-path from an entrance to an exit, by exhaustive DFS."""
    out: list[tuple] = []
    stack: list[int] = []

    def walk(x):
        if not g.out_edges[x]:
            if stack:
                out.append(tuple(stack))
                if len(out) > cap:
                    raise PathCapExceeded(f"more than {cap} full time-paths")
            return
        for e in g.out_edges[x]:
            stack.append(e)
            walk(g.edge(e).head)
            stack.pop()

    for s in g.entrances():
        walk(s)
    return out


def interval(g: TimeLikeGraph, v1: int, v2: int) -> TimeLikeGraph:
    """Subgraph of everything on time-paths from v1 to v2."""
    for v in (v1, v2):
        if not g.has_vertex(v):
            raise GraphError(f"unknown vertex {v}")
    if not g.reaches(v1, v2):
        return TimeLikeGraph([], [], "simple")
    keep = g.descendants(v1) & g.ancestors(v2)
    vs = [v for v in g.vertices if v.id in keep]
    es = [e for e in g.edges if e.tail in keep and e.head in keep]
    return TimeLikeGraph(vs, es, "simple")
