"""Independent brute-force oracles and random graph builders for tests."""

from __future__ import annotations

import itertools

import numpy as np

from tlg.graph import TimeLikeGraph


def closure(g: TimeLikeGraph) -> dict:
    """Reflexive-transitive reachability by Warshall's algorithm."""
    ids = [v.id for v in g.vertices]
    idx = {v: i for i, v in enumerate(ids)}
    m = np.eye(len(ids), dtype=bool)
    for e in g.edges:
        m[idx[e.tail], idx[e.head]] = True
    for k in range(len(ids)):
        m |= np.outer(m[:, k], m[k, :])
    return {(a, b): bool(m[idx[a], idx[b]]) for a in ids for b in ids}


def count_full_paths(g: TimeLikeGraph) -> int:
    """Number of entrance-to-exit paths by dynamic programming over time order."""
    ways = {}
    for v in g.vertices:
        ins = [e for e in g.edges if e.head == v.id]
        ways[v.id] = 1 if not ins else sum(ways[e.tail] for e in ins)
    return sum(ways[v.id] for v in g.vertices if not any(e.tail == v.id for e in g.edges))


def paths_between(g: TimeLikeGraph, u: int, v: int) -> list:
    """All edge sequences from u to v, grown breadth first."""
    out, frontier = [], [((), u)]
    while frontier:
        nxt = []
        for p, x in frontier:
            if x == v and p:
                out.append(p)
                continue
            for e in g.edges:
                if e.tail == x:
                    nxt.append((p + (e.id,), e.head))
        frontier = nxt
    return out


def brute_cells(g: TimeLikeGraph) -> set:
    """Unordered pairs of co-terminal time-paths with disjoint interiors."""
    out = set()
    for u, v in itertools.permutations([x.id for x in g.vertices], 2):
        ps = paths_between(g, u, v)
        for a, b in itertools.combinations(ps, 2):
            va = {g.edge(e).head for e in a[:-1]}
            vb = {g.edge(e).head for e in b[:-1]}
            if not va & vb:
                out.add(frozenset((a, b)))
    return out


def random_star(rng: np.random.Generator, moves: int) -> TimeLikeGraph:
    """Random member of TLG* grown by subdividing edges and adding edges
    between vertices already joined by a time-path."""
    times = {0: 0.0, 1: 1.0}
    edges = {0: (0, 1)}
    for _ in range(moves):
        if rng.random() < 0.5:
            eid = int(rng.choice(sorted(edges)))
            a, b = edges.pop(eid)
            v = max(times) + 1
            times[v] = float(times[a] + (times[b] - times[a]) * rng.uniform(0.2, 0.8))
            edges[eid] = (a, v)
            edges[max(edges) + 1] = (v, b)
        else:
            g = TimeLikeGraph(list(times.items()), [(i, a, b) for i, (a, b) in edges.items()])
            pairs = [(a, b) for a in times for b in times if a != b and g.reaches(a, b)]
            a, b = pairs[int(rng.integers(len(pairs)))]
            edges[max(edges) + 1] = (a, b)
    return TimeLikeGraph(list(times.items()), [(i, a, b) for i, (a, b) in edges.items()])
