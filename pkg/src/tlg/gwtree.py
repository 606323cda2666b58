"""Galton-Watson time-like trees and branching Brownian motion on them.

Each individual lives an Exp(V) time and at death splits into R children
drawn from an offspring table (p_0, ..., p_K). Labels are Ulam-Harris
tuples; the root is (). Trees are truncated at a horizon T: an individual
alive at T ends at a terminal vertex at T and its children are not born.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import TimeLikeGraph
from .rng import as_generator

NODE_CAP = 10**6


class TreeCapExceeded(RuntimeError):
    pass


@dataclass
class GwNode:
    label: tuple
    birth: float
    lifetime: float
    offspring: int

    @property
    def death(self) -> float:
        return self.birth + self.lifetime


@dataclass
class GwTree:
    nodes: list
    horizon: float
    rate: float
    table: tuple
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {nd.label: i for i, nd in enumerate(self.nodes)}

    def node(self, label) -> GwNode:
        return self.nodes[self.index[tuple(label)]]

    def children(self, label) -> list:
        label = tuple(label)
        nd = self.node(label)
        out = []
        for i in range(1, nd.offspring + 1):
            c = label + (i,)
            if c in self.index:
                out.append(c)
        return out

    def end(self, label) -> float:
        nd = self.node(label)
        return min(nd.death, self.horizon)

    def pgf(self, s: float) -> float:
        return sum(p * s**k for k, p in enumerate(self.table))

    def mean_offspring(self) -> float:
        return sum(k * p for k, p in enumerate(self.table))


def _check_table(table) -> tuple:
    t = tuple(float(p) for p in table)
    if not t or any(p < 0 for p in t) or abs(sum(t) - 1.0) > 1e-9:
        raise ValueError("offspring table must be nonnegative and sum to 1")
    return t


def sample_gw_tlt(V: float, offspring, T: float, rng=0, cap: int = NODE_CAP) -> GwTree:
    """Breadth-first sample of the tree truncated at horizon T."""
    if V <= 0 or T <= 0:
        raise ValueError("rate and horizon must be positive")
    table = _check_table(offspring)
    rng = as_generator(rng)
    ks = np.arange(len(table))
    nodes = []
    queue = deque([((), 0.0)])
    while queue:
        label, birth = queue.popleft()
        lam = float(rng.exponential(1.0 / V))
        r = int(rng.choice(ks, p=table))
        nodes.append(GwNode(label, birth, lam, r))
        if len(nodes) > cap:
            raise TreeCapExceeded(f"more than {cap} individuals before horizon {T}")
        if birth + lam < T:
            for i in range(1, r + 1):
                queue.append((label + (i,), birth + lam))
    return GwTree(nodes, float(T), float(V), table)


def tlt_to_tlg(tree: GwTree) -> tuple:
    """General TLG with one edge per individual from its birth vertex to its
    death (or horizon) vertex. Returns (graph, {label: edge id})."""
    verts = [(0, 0.0)]
    edges = []
    end_vertex = {}
    edge_of = {}
    for i, nd in enumerate(tree.nodes):
        tail = 0 if nd.label == () else end_vertex[nd.label[:-1]]
        head = i + 1
        verts.append((head, tree.end(nd.label)))
        edges.append((i, tail, head))
        end_vertex[nd.label] = head
        edge_of[nd.label] = i
    return TimeLikeGraph(verts, edges, "general"), edge_of


@dataclass
class BranchingField:
    tree: GwTree
    paths: dict  # label -> (times, values)
    dt: float

    def rows(self):
        for label, (ts, vs) in self.paths.items():
            name = ".".join(map(str, label)) or "root"
            for t, v in zip(ts, vs):
                yield {"node": name, "time": float(t), "value": float(v)}

    def value_at(self, label, t: float) -> float:
        ts, vs = self.paths[tuple(label)]
        return float(np.interp(t, ts, vs))

    def ancestral_value(self, leaf_label, t: float) -> float:
        """Value at time t along the ancestral line of leaf_label."""
        label = tuple(leaf_label)
        while label:
            if self.tree.node(label).birth <= t:
                break
            label = label[:-1]
        return self.value_at(label, t)


def _grid(a: float, b: float, dt: float) -> np.ndarray:
    m = max(1, int(math.ceil((b - a) / dt - 1e-12)))
    return np.linspace(a, b, m + 1)


def sample_branching_markov(tree: GwTree, dt: float, rng=0, start: float = 0.0) -> BranchingField:
    """Brownian motion along every lifetime, started at the parent's last value."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    rng = as_generator(rng)
    paths = {}
    for nd in tree.nodes:
        x0 = start if nd.label == () else paths[nd.label[:-1]][1][-1]
        ts = _grid(nd.birth, tree.end(nd.label), dt)
        inc = rng.standard_normal(ts.size - 1) * np.sqrt(np.diff(ts))
        vs = np.concatenate([[x0], x0 + np.cumsum(inc)])
        paths[nd.label] = (ts, vs)
    return BranchingField(tree, paths, dt)


def population_curve(trees, times) -> dict:
    """Born-by-t and alive-at-t counts; for a list of trees, per-tree rows."""
    single = isinstance(trees, GwTree)
    ts = np.asarray(times, dtype=float)
    group = [trees] if single else list(trees)
    born = np.zeros((len(group), ts.size), dtype=np.int64)
    alive = np.zeros_like(born)
    for i, tr in enumerate(group):
        b = np.array([nd.birth for nd in tr.nodes])
        d = np.array([nd.death for nd in tr.nodes])
        born[i] = (b[:, None] <= ts).sum(axis=0)
        alive[i] = ((b[:, None] <= ts) & (ts < d[:, None])).sum(axis=0)
    if single:
        return {"times": ts, "born": born[0], "alive": alive[0]}
    return {"times": ts, "born": born, "alive": alive}


def mean_population(V: float, table, t: float) -> float:
    """E alive(t) = exp(V (m - 1) t) for reproduction at exponential death."""
    m = sum(k * p for k, p in enumerate(_check_table(table)))
    return math.exp(V * (m - 1) * t)
