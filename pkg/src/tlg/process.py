"""Gaussian processes indexed by time-like graphs, built along a tower.

Each tower step that adds an edge starts a segment: the chain of final edges
the added edge turns into. Values on a segment are the conditional mean given
its two anchor vertices plus independent bridge noise, so every point value
is a finite linear combination of independent segment noises. The exact
engine propagates these combinations; the sampler draws them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cells import Cell, find_cells
from .embed import Embedding, is_tlg_star_star, mrf_adjacency
from .gauss import GaussianVector, condition, factor, pinv_psd
from .graph import GraphError, GraphPoint, TimeLikeGraph, validate_tlg
from .order import order_leq
from .rng import as_generator
from .stingy import is_tlg_star
from .tower import Segment, Tower, tower_segments


# families

class Family:
    """Mean-zero Gaussian law along full paths, given as a kernel on points
    lying on a common time-path."""

    kind = "custom"

    def cov(self, g: TimeLikeGraph, p: tuple, q: tuple) -> float:
        raise NotImplementedError

    def check(self, g: TimeLikeGraph) -> None:
        """Raise if the path laws disagree on shared points."""


class Brownian(Family):
    kind = "brownian"

    def __init__(self, sigma2: float = 1.0):
        self.sigma2 = sigma2

    def cov(self, g, p, q):
        return self.sigma2 * min(g.point_time(p), g.point_time(q))


class TwoSidedBrownian(Family):
    kind = "two-sided-brownian"

    def cov(self, g, p, q):
        s, t = g.point_time(p), g.point_time(q)
        return 0.5 * (abs(s) + abs(t) - abs(t - s))


class BrownianBridge(Family):
    """Bridge pinned to zero at times `start` and `end` along every path."""

    kind = "bridge"

    def __init__(self, sigma2: float = 1.0, start: float = 0.0, end: float = 1.0):
        self.sigma2, self.start, self.end = sigma2, start, end

    def cov(self, g, p, q):
        s, t = sorted((g.point_time(p), g.point_time(q)))
        return self.sigma2 * (s - self.start) * (self.end - t) / (self.end - self.start)


class _EdgeTables(Family):
    """Per-edge functions of time; a vertex reads any incident edge."""

    def __init__(self, tables: dict, default=None):
        self.tables = dict(tables)
        self.default = default

    def fn(self, e):
        f = self.tables.get(e, self.default)
        if f is None:
            raise GraphError(f"no table for edge {e}")
        return f

    def value(self, g, loc):
        if loc[0] == "e":
            return self.fn(loc[1])(loc[2])
        v = loc[1]
        inc = g.out_edges[v] + g.in_edges[v]
        return self.fn(inc[0])(g.time(v))

    def check(self, g):
        for v in g.vertex_ids:
            vals = [self.fn(e)(g.time(v)) for e in g.out_edges[v] + g.in_edges[v]]
            if vals and max(vals) - min(vals) > 1e-9:
                raise GraphError(f"edge tables disagree at vertex {v}: {vals}")


class Glued(_EdgeTables):
    """Variance function V per edge; Cov = V at the earlier point."""

    kind = "glued"

    def cov(self, g, p, q):
        if g.point_time(p) <= g.point_time(q):
            return self.value(g, p)
        return self.value(g, q)


class TimeChanged(_EdgeTables):
    """Brownian motion run at clock f; Cov = min(f(p), f(q))."""

    kind = "time-changed"

    def cov(self, g, p, q):
        return min(self.value(g, p), self.value(g, q))


class Ramped(Family):
    """A family on a general graph lifted to its maximal embedding.

    Values ramp linearly from zero at the synthetic endpoints to the value
    at the vertex each synthetic edge attaches to.
    """

    kind = "ramped"

    def __init__(self, base: Family, emb: Embedding, original: TimeLikeGraph):
        self.base, self.emb, self.original = base, emb, original

    def _proj(self, g, loc):
        emb = self.emb
        if loc[0] == "v":
            if loc[1] in (emb.bottom, emb.top):
                return 0.0, None
            return 1.0, loc
        e = g.edge(loc[1])
        if not emb.is_synthetic_edge(loc[1]):
            return 1.0, loc
        t = loc[2]
        if e.tail == emb.bottom:
            t0 = g.time(emb.bottom)
            return (t - t0) / (g.time(e.head) - t0), ("v", e.head)
        t1 = g.time(emb.top)
        return (t1 - t) / (t1 - g.time(e.tail)), ("v", e.tail)

    def cov(self, g, p, q):
        rp, lp = self._proj(g, p)
        rq, lq = self._proj(g, q)
        if lp is None or lq is None or rp == 0.0 or rq == 0.0:
            return 0.0
        return rp * rq * self.base.cov(self.original, lp, lq)

    def check(self, g):
        self.base.check(self.original)


def piecewise(knots) -> callable:
    """Linear interpolation through (time, value) knots."""
    ts = np.array([k[0] for k in knots], dtype=float)
    vs = np.array([k[1] for k in knots], dtype=float)
    return lambda t: float(np.interp(t, ts, vs))


def family_from_spec(spec: dict) -> Family:
    kind = spec.get("kind", "brownian")
    if kind == "brownian":
        return Brownian(float(spec.get("sigma2", 1.0)))
    if kind == "two-sided-brownian":
        return TwoSidedBrownian()
    if kind == "bridge":
        return BrownianBridge(float(spec.get("sigma2", 1.0)), float(spec.get("start", 0.0)),
                              float(spec.get("end", 1.0)))
    if kind in ("glued", "time-changed"):
        tables = {int(e): piecewise(k) for e, k in spec.get("tables", {}).items()}
        default = piecewise(spec["default"]) if "default" in spec else None
        return (Glued if kind == "glued" else TimeChanged)(tables, default)
    raise ValueError(f"unknown family kind {kind!r}")


# model

@dataclass
class ProcessModel:
    graph: TimeLikeGraph
    family: Family
    segments: list
    tower: Tower | None = None
    original: TimeLikeGraph | None = None
    embedding: Embedding | None = None
    _home: dict = field(default_factory=dict, repr=False)
    _seg_of_edge: dict = field(default_factory=dict, repr=False)
    _exp: dict = field(default_factory=dict, repr=False)
    _anchor: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for i, s in enumerate(self.segments):
            for e in s.edges:
                self._seg_of_edge[e] = i
            verts = list(s.interior) if s.anchors is not None else _seg_vertices(self.graph, s)
            for v in verts:
                self._home.setdefault(v, i)
        missing = [e for e in self.graph.edge_ids if e not in self._seg_of_edge]
        if missing:
            raise GraphError(f"edges {missing} belong to no segment")
        unhomed = [v for v in self.graph.vertex_ids if v not in self._home]
        if unhomed:
            raise GraphError(f"vertices {unhomed} belong to no segment")
        if self.original is None:
            self.original = self.graph

    # kernel pieces

    def k(self, p, q) -> float:
        return self.family.cov(self.graph, p, q)

    def _anchor_info(self, s: int):
        if s not in self._anchor:
            seg = self.segments[s]
            if seg.anchors is None:
                self._anchor[s] = ([], np.zeros((0, 0)))
            else:
                locs = [("v", a) for a in seg.anchors]
                a = np.array([[self.k(x, y) for y in locs] for x in locs])
                self._anchor[s] = (locs, pinv_psd(a))
        return self._anchor[s]

    def weights(self, s: int, loc) -> np.ndarray:
        locs, ainv = self._anchor_info(s)
        if not locs:
            return np.zeros(0)
        return np.array([self.k(loc, a) for a in locs]) @ ainv

    def noise_cov(self, s: int, xs, ys) -> np.ndarray:
        locs, ainv = self._anchor_info(s)
        kxy = np.array([[self.k(x, y) for y in ys] for x in xs], dtype=float).reshape(len(xs), len(ys))
        if not locs:
            return kxy
        kxa = np.array([[self.k(x, a) for a in locs] for x in xs]).reshape(len(xs), len(locs))
        kay = np.array([[self.k(a, y) for y in ys] for a in locs]).reshape(len(locs), len(ys))
        return kxy - kxa @ ainv @ kay

    def segment_of(self, loc) -> int:
        return self._home[loc[1]] if loc[0] == "v" else self._seg_of_edge[loc[1]]

    def expand(self, loc) -> dict:
        """Coefficients of a point value on independent (segment, point) noises."""
        loc = self.graph.resolve(loc)
        if loc in self._exp:
            return self._exp[loc]
        s = self.segment_of(loc)
        out = {(s, loc): 1.0}
        seg = self.segments[s]
        if seg.anchors is not None:
            for w, a in zip(self.weights(s, loc), seg.anchors):
                if w != 0.0:
                    for atom, c in self.expand(("v", a)).items():
                        out[atom] = out.get(atom, 0.0) + w * c
        self._exp[loc] = out
        return out


def _seg_vertices(g, seg: Segment) -> list:
    vs = []
    for e in seg.edges:
        ed = g.edge(e)
        for v in (ed.tail, ed.head):
            if v not in vs:
                vs.append(v)
    return vs


def build_model(graph: TimeLikeGraph, family: Family, tower: Tower | None = None) -> ProcessModel:
    """Generative model of the natural process of `family` on `graph`.

    Simple graphs must be TLG*; general graphs must be TLG** and are handled
    on their maximal embedding with a ramped family.
    """
    if graph.kind == "simple" and validate_tlg(graph, "simple").ok:
        family.check(graph)
        if tower is None:
            res = is_tlg_star(graph)
            if not res.verdict:
                raise GraphError(f"graph is not TLG*: {res.reason}")
            tower = res.tower
        built, segs = tower_segments(tower, "simple")
        if built.canonical() != graph.canonical():
            raise GraphError("tower does not rebuild the graph")
        return ProcessModel(graph, family, segs, tower)
    res = is_tlg_star_star(graph)
    if not res.verdict:
        raise GraphError(f"graph is not TLG**: {res.reason}")
    family.check(graph)
    emb = res.embedding
    etower = tower if tower is not None else res.embedded_tower()
    built, segs = tower_segments(etower, "simple")
    if built.canonical() != emb.graph.canonical():
        raise GraphError("tower does not rebuild the embedded graph")
    return ProcessModel(emb.graph, Ramped(family, emb, graph), segs, etower, graph, emb)


def model_from_segments(graph: TimeLikeGraph, family: Family, segments: list) -> ProcessModel:
    """Sequential bridge build in a caller-given order, with no tower checks."""
    return ProcessModel(graph, family, [Segment(s.anchors, list(s.edges), list(s.interior)) for s in segments])


# exact engine

def exact_joint(model: ProcessModel, points) -> GaussianVector:
    """Exact covariance of the process at the given points."""
    locs = [model.graph.resolve(p) for p in points]
    exps = [model.expand(loc) for loc in locs]
    atoms: dict = {}
    for ex in exps:
        for atom in ex:
            atoms.setdefault(atom[0], {}).setdefault(atom[1], None)
    cols = []
    blocks = []
    for s, pts in atoms.items():
        pts = list(pts)
        blocks.append(model.noise_cov(s, pts, pts))
        cols.extend((s, p) for p in pts)
    idx = {a: i for i, a in enumerate(cols)}
    c = np.zeros((len(locs), len(cols)))
    for i, ex in enumerate(exps):
        for atom, w in ex.items():
            c[i, idx[atom]] = w
    k = np.zeros((len(cols), len(cols)))
    off = 0
    for b in blocks:
        n = b.shape[0]
        k[off:off + n, off:off + n] = b
        off += n
    cov = c @ k @ c.T
    return GaussianVector(list(points), np.zeros(len(locs)), (cov + cov.T) / 2)


def path_points(g: TimeLikeGraph, path, per_edge: int = 3) -> list:
    """Vertices along a path plus equally spaced interior points of each edge."""
    out = [g.edge(path[0]).tail]
    for e in path:
        ed = g.edge(e)
        t0, t1 = g.time(ed.tail), g.time(ed.head)
        for i in range(1, per_edge + 1):
            out.append(GraphPoint(e, t0 + (t1 - t0) * i / (per_edge + 1)))
        out.append(ed.head)
    return out


# sampler

@dataclass
class Realization:
    graph: TimeLikeGraph
    vertex_values: dict
    edge_times: dict
    edge_values: dict

    def at(self, loc) -> np.ndarray:
        loc = self.graph.resolve(loc)
        if loc[0] == "v":
            return self.vertex_values[loc[1]]
        ts = self.edge_times[loc[1]]
        i = int(np.argmin(np.abs(ts - loc[2])))
        if abs(ts[i] - loc[2]) > 1e-12:
            raise KeyError(f"time {loc[2]} is not on the sampling grid of edge {loc[1]}")
        return self.edge_values[loc[1]][:, i]

    def rows(self):
        """(replicate, edge, time, value) rows over all edge grids."""
        for e in sorted(self.edge_times):
            ts, vals = self.edge_times[e], self.edge_values[e]
            for r in range(vals.shape[0]):
                for t, x in zip(ts, vals[r]):
                    yield r, e, float(t), float(x)


def sample_paths(model: ProcessModel, resolution: int, reps: int, rng) -> Realization:
    """Draw `reps` realizations on every edge at `resolution` interior points."""
    rng = as_generator(rng)
    g = model.graph
    vals: dict = {}
    for s, seg in enumerate(model.segments):
        pts = []
        verts = list(seg.interior) if seg.anchors is not None else _seg_vertices(g, seg)
        pts += [("v", v) for v in verts]
        for e in seg.edges:
            ed = g.edge(e)
            t0, t1 = g.time(ed.tail), g.time(ed.head)
            pts += [("e", e, t0 + (t1 - t0) * i / (resolution + 1)) for i in range(1, resolution + 1)]
        noise = rng.standard_normal((reps, len(pts))) @ factor(model.noise_cov(s, pts, pts)).T
        if seg.anchors is not None:
            base = np.stack([vals[("v", a)] for a in seg.anchors], axis=1)
            w = np.array([model.weights(s, p) for p in pts])
            noise = noise + base @ w.T
        for j, p in enumerate(pts):
            vals[p] = noise[:, j]
    orig = model.original
    vv = {v: vals[("v", v)] for v in orig.vertex_ids}
    et, ev = {}, {}
    for e in orig.edge_ids:
        ed = orig.edge(e)
        t0, t1 = orig.time(ed.tail), orig.time(ed.head)
        ts = np.array([t0 + (t1 - t0) * i / (resolution + 1) for i in range(resolution + 2)])
        cols = [vv[ed.tail]] + [vals[("e", e, t)] for t in ts[1:-1]] + [vv[ed.head]]
        et[e], ev[e] = ts, np.stack(cols, axis=1)
    return Realization(orig, vv, et, ev)


# property checks

def _orig(model):
    return model.original


def check_cell_markov(model: ProcessModel, cell: Cell, per_edge: int = 1) -> dict:
    """Conditional cross-side covariance of a truly simple cell given its ends."""
    if cell.kind != "cell" or not cell.truly_simple:
        raise ValueError("cell must be a truly simple cell")
    g = _orig(model)
    pa = [p for p in path_points(g, cell.side_a, per_edge) if p not in (cell.start, cell.end)]
    pb = [p for p in path_points(g, cell.side_b, per_edge) if p not in (cell.start, cell.end)]
    labels = [("a", i) for i in range(len(pa))] + [("b", i) for i in range(len(pb))] + ["start", "end"]
    gv = exact_joint(model, pa + pb + [cell.start, cell.end])
    gv = GaussianVector(labels, gv.mean, gv.cov)
    cond = condition(gv, {"start": 0.0, "end": 0.0})
    na = len(pa)
    cross = cond.cov[:na, na:]
    worst = float(np.max(np.abs(cross))) if cross.size else 0.0
    return {"partial_cov": worst, "matrix": cross, "pass": worst <= 1e-9}


def check_moral_graph_markov(model: ProcessModel, tol: float = 1e-8) -> dict:
    """Precision zeros at branch vertices versus the Markov-field skeleton."""
    g = _orig(model)
    w, adj = mrf_adjacency(g)
    gv = exact_joint(model, w)
    var = np.diag(gv.cov)
    pinned = [v for v, s in zip(w, var) if s <= 1e-12]
    kept = [v for v in w if v not in pinned]
    sub = gv.sub(kept)
    eig = np.linalg.eigvalsh(sub.cov) if kept else np.zeros(0)
    if kept and eig.min() <= 1e-12 * max(1.0, eig.max()):
        raise ValueError(f"singular covariance at branch vertices {kept}")
    prec = np.linalg.inv(sub.cov) if kept else np.zeros((0, 0))
    bad = []
    worst = 0.0
    for i, a in enumerate(kept):
        for j, b in enumerate(kept):
            if i < j and frozenset((a, b)) not in adj:
                worst = max(worst, abs(prec[i, j]))
                if abs(prec[i, j]) > tol:
                    bad.append((a, b, float(prec[i, j])))
    return {"vertices": w, "kept": kept, "pinned": pinned, "adjacent": sorted(tuple(sorted(x)) for x in adj),
            "precision": prec, "max_nonadjacent": worst, "violations": bad, "pass": not bad}


def check_martingale(model: ProcessModel, s, t, tol: float = 1e-9) -> dict:
    """Cov(X(t), X(u)) = Cov(X(s), X(u)) for every vertex u before s."""
    g = _orig(model)
    if not order_leq(g, s, t):
        raise ValueError("s must precede t")
    us = [u for u in g.vertex_ids if order_leq(g, u, s)]
    gv = exact_joint(model, [s, t] + us)
    diffs = [abs(gv.cov[1, 2 + i] - gv.cov[0, 2 + i]) for i in range(len(us))]
    diffs.append(abs(gv.cov[1, 0] - gv.cov[0, 0]))
    worst = max(diffs)
    return {"max_diff": worst, "vertices": us, "pass": worst <= tol}


def naive_counterexample() -> dict:
    """Sequential bridge build on a non-TLG* graph, ignoring the tower rule.

    Graph: vertices j/5, edges 0-1, 0-2, 1-4, 1-3, 2-3, 2-4, 4-5, 3-5.
    Order: Brownian spine 0-2-4-5, then bridges 2-3-5, 0-1-4, and 1-3.
    """
    from .fixtures import crossing

    g = crossing()
    eid = {(e.tail, e.head): e.id for e in g.edges}
    segs = [
        Segment(None, [eid[0, 2], eid[2, 4], eid[4, 5]], []),
        Segment((2, 5), [eid[2, 3], eid[3, 5]], [3]),
        Segment((0, 4), [eid[0, 1], eid[1, 4]], [1]),
        Segment((1, 3), [eid[1, 3]], []),
    ]
    model = model_from_segments(g, Brownian(), segs)
    gv = exact_joint(model, [1, 3])
    return {"model": model, "naive": gv.covariance(1, 3), "reference": 1 / 3, "brownian": g.time(1)}


def tree_markov_check(model: ProcessModel, branch: int, tol: float = 1e-9) -> dict:
    """Partial covariance across the subtrees hanging below a branch vertex."""
    g = _orig(model)
    kids = [g.edge(e).head for e in g.out_edges[branch]]
    groups = []
    for c in kids:
        below = [v for v in g.vertex_ids if g.reaches(c, v)]
        groups.append(below)
    labels = [v for grp in groups for v in grp]
    gv = exact_joint(model, labels + [branch])
    gv = GaussianVector(labels + ["branch"], gv.mean, gv.cov)
    cond = condition(gv, {"branch": 0.0})
    worst = 0.0
    for i, a in enumerate(groups):
        for b in groups[i + 1:]:
            for x in a:
                for y in b:
                    worst = max(worst, abs(cond.covariance(x, y)))
    return {"partial_cov": worst, "pass": worst <= tol}


def truly_simple_cells(g: TimeLikeGraph) -> list[Cell]:
    return [c for c in find_cells(g, half_cells=False) if c.truly_simple]


def variance_along_paths(model: ProcessModel, paths, per_edge: int = 2) -> float:
    """Largest |Var X(t) - C(t, t)| over points of the given paths."""
    g = _orig(model)
    worst = 0.0
    for p in paths:
        pts = path_points(g, p, per_edge)
        gv = exact_joint(model, pts)
        for i, x in enumerate(pts):
            target = model.family.cov(model.graph, model.graph.resolve(x), model.graph.resolve(x))
            worst = max(worst, abs(gv.cov[i, i] - target))
    return worst


def mc_covariance(real: Realization, points) -> np.ndarray:
    x = np.stack([real.at(p) for p in points], axis=1)
    return (x.T @ x) / x.shape[0]


def mc_tolerance(exact: np.ndarray, reps: int, factor_: float = 6.0) -> float:
    return factor_ * float(np.max(np.diag(exact))) / math.sqrt(reps)
