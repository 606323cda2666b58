"""Natural two-sided Brownian motion on the (alpha, n) rhombus grid.

Lattice points are (t_j, x_k) = (j h, k / n) with h = n^{-1/2-alpha} and
j = k (mod 2). The spine is the zigzag path through columns 0 and 1 and
carries a two-sided Brownian motion. Columns are filled outward: a vertex
in column c +- 1 at row j + 1 is the midpoint of a Brownian bridge on
[t_j, t_{j+2}] between the column-c values. Every lattice vertex at t = 0
is 0, so the two time halves are independent; they use separate streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gauss import cell_maxima, sample_bridge_grid
from .rng import stream

NOISE_SCALE = {"standard": 1.0, "wide": 2.0 ** 0.25}


@dataclass(frozen=True)
class RhombusGrid:
    n: int
    alpha: float = 0.0
    T: float = 1.0
    X: float = 1.0

    def __post_init__(self):
        if self.n < 1 or self.alpha < 0 or self.T <= 0 or self.X <= 0:
            raise ValueError("need n >= 1, alpha >= 0 and a positive window")
        if self.X * self.n < 1 or self.T < self.n ** (-0.5 - self.alpha):
            raise ValueError("window must hold at least one rhombus in each direction")

    @property
    def h(self) -> float:
        return self.n ** (-0.5 - self.alpha)

    @property
    def dx(self) -> float:
        return 1.0 / self.n

    @property
    def J(self) -> int:
        return int(math.floor(self.T / self.h + 1e-9))

    @property
    def K(self) -> int:
        return int(math.floor(self.X * self.n + 1e-9))

    @property
    def J_ext(self) -> int:
        """Spine rows needed so that every window vertex is determined."""
        return self.J + self.K + 2

    def on_lattice(self, j: int, k: int) -> bool:
        return (j - k) % 2 == 0


@dataclass
class GridField:
    grid: RhombusGrid
    values: np.ndarray      # (2K+1, 2J_ext+1), NaN off the lattice
    interior: np.ndarray    # (2K, 2J_ext, r-1) edge values strictly inside each edge
    maxima: np.ndarray      # (2K+1, 2J_ext+1) max |bridge| generated from (c, j)
    refine: int
    noise: str
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def _ci(self, c: int) -> int:
        return c + self.grid.K

    def _ri(self, j: int) -> int:
        return j + self.grid.J_ext

    def value(self, j: int, k: int) -> float:
        g = self.grid
        if abs(j) > g.J or abs(k) > g.K:
            raise ValueError("lattice point outside the window")
        if not g.on_lattice(j, k):
            raise ValueError("not a lattice point")
        return float(self.values[self._ci(k), self._ri(j)])

    def window(self) -> np.ndarray:
        """Window values, rows j = -J..J, columns k = -K..K, NaN off the lattice."""
        g = self.grid
        r0, r1 = self._ri(-g.J), self._ri(g.J) + 1
        return self.values[:, r0:r1].T.copy()

    def residuals(self) -> np.ndarray:
        """X(t_{j+1}, x_{c+-1}) - (X(t_j, x_c) + X(t_{j+2}, x_c)) / 2 for every
        outward-filled window vertex off the t = 0 row."""
        g = self.grid
        out = []
        for k in list(range(2, g.K + 1)) + list(range(-g.K, 0)):
            src = k - 1 if k > 0 else k + 1
            for j in range(-g.J + 1, g.J):
                if not g.on_lattice(j, k) or j == 0:
                    continue
                v = self.value(j, k)
                a = self.values[self._ci(src), self._ri(j - 1)]
                b = self.values[self._ci(src), self._ri(j + 1)]
                out.append(v - 0.5 * (a + b))
        return np.asarray(out)

    def z_statistic(self, a: float, b: float) -> float:
        """Sup of max |bridge| over bridges on [t_j, t_{j+2}] in [0, a] with 0 < x_c <= b."""
        g = self.grid
        jmax = int(math.floor(a / g.h + 1e-9)) - 2
        cmax = int(math.floor(b * g.n + 1e-9))
        if jmax < 0 or cmax < 1:
            return 0.0
        if jmax + 2 > g.J or cmax > g.K:
            raise ValueError("Z window exceeds the sampled window")
        block = self.maxima[self._ci(1):self._ci(cmax) + 1, self._ri(0):self._ri(jmax) + 1]
        return float(np.nanmax(block)) if np.any(np.isfinite(block)) else 0.0

    def rows(self):
        g = self.grid
        w = self.window()
        for jj in range(w.shape[0]):
            for kk in range(w.shape[1]):
                if np.isfinite(w[jj, kk]):
                    j, k = jj - g.J, kk - g.K
                    yield {"t": j * g.h, "x": k * g.dx, "value": float(w[jj, kk])}


def _bridges(count, r, length, rng, scale):
    """Bridges on 2r steps of [0, length] with exact |max| per bridge."""
    b = sample_bridge_grid(count, 2 * r, rng, length=length) * scale
    dt = length / (2 * r)
    u = 1.0 - rng.random((2, count, 2 * r))
    hi = cell_maxima(b[:, :-1], b[:, 1:], dt, u[0]).max(axis=1)
    lo = cell_maxima(-b[:, :-1], -b[:, 1:], dt, u[1]).max(axis=1)
    return b, np.maximum(hi, lo)


def _half_bridges(count, r, length, rng):
    b = sample_bridge_grid(count, r, rng, length=length)
    dt = length / r
    u = 1.0 - rng.random((2, count, r))
    hi = cell_maxima(b[:, :-1], b[:, 1:], dt, u[0]).max(axis=1)
    lo = cell_maxima(-b[:, :-1], -b[:, 1:], dt, u[1]).max(axis=1)
    return b, np.maximum(hi, lo)


def sample_grid_nbm(grid: RhombusGrid, rng=0, refine: int = 1, noise: str = "standard") -> GridField:
    """Sample the grid field. rng is an integer seed; each time half gets its own stream.

    refine r keeps every edge at r sub-intervals (r - 1 interior values per edge).
    noise="wide" scales bridges so the midpoint variance is 2^{-1/2} h.
    """
    if refine < 1:
        raise ValueError("refine must be >= 1")
    if noise not in NOISE_SCALE:
        raise ValueError(f"unknown noise {noise!r}")
    seed = int(rng)
    pos, neg = stream(seed, "rhombus", "pos"), stream(seed, "rhombus", "neg")
    g, r, scale = grid, refine, NOISE_SCALE[noise]
    h, K, JE = g.h, g.K, g.J_ext
    R = 2 * JE + 1
    vals = np.full((2 * K + 1, R), np.nan)
    inner = np.full((2 * K, R - 1, r - 1), np.nan)
    maxima = np.full((2 * K + 1, R), np.nan)
    frac = np.arange(1, r) / r

    # spine: two-sided BM at rows -JE..JE and inside each edge
    spine = np.zeros(R)
    sub = np.zeros((R - 1, r - 1))
    for gen, sign in ((pos, 1), (neg, -1)):
        steps = gen.standard_normal(JE) * math.sqrt(h)
        path = np.concatenate([[0.0], np.cumsum(steps)])
        br = sample_bridge_grid(JE, r, gen, length=h)[:, 1:-1] if r > 1 else np.zeros((JE, 0))
        if sign > 0:
            spine[JE:] = path
            lo_v, hi_v = path[:-1], path[1:]
            sub[JE:] = lo_v[:, None] + (hi_v - lo_v)[:, None] * frac + br
        else:
            spine[:JE + 1] = path[::-1]
            # edge from row -(i+1) to -i, time runs forward so bridge is reversed
            lo_v, hi_v = path[1:], path[:-1]
            s = lo_v[:, None] + (hi_v - lo_v)[:, None] * frac + br[:, ::-1]
            sub[:JE] = s[::-1]
    rows = np.arange(-JE, JE + 1)
    even = rows % 2 == 0
    vals[K, even] = spine[even]
    vals[K + 1, ~even] = spine[~even]
    inner[K] = sub

    def fill(src: int, dst: int):
        """Fill column dst from column src = dst -+ 1 and the strip between them."""
        strip = min(src, dst) + K
        js = np.arange(-JE, JE - 1)
        js = js[(js - src) % 2 == 0]
        a = vals[src + K, js + JE]
        b = vals[src + K, js + 2 + JE]
        ok = np.isfinite(a) & np.isfinite(b)
        js, a, b = js[ok], a[ok], b[ok]
        if js.size == 0:
            return
        for gen, sel in ((pos, js >= 0), (neg, js <= -2)):
            jj = js[sel]
            if jj.size == 0:
                continue
            br, mx = _bridges(jj.size, r, 2 * h, gen, scale)
            aa, bb = a[sel], b[sel]
            lin = aa[:, None] + (bb - aa)[:, None] * np.linspace(0.0, 1.0, 2 * r + 1)
            full = lin + br
            vals[dst + K, jj + 1 + JE] = full[:, r]
            maxima[src + K, jj + JE] = mx
            inner[strip, jj + JE] = full[:, 1:r]
            inner[strip, jj + 1 + JE] = full[:, r + 1:2 * r]
        if np.any(js == -1):
            # the path crosses t = 0 at a zero vertex: two bridges of length h
            i = int(np.flatnonzero(js == -1)[0])
            bl, _ = _half_bridges(1, r, h, neg)
            bu, mu = _half_bridges(1, r, h, pos)
            vals[dst + K, JE] = 0.0
            maxima[src + K, JE - 1] = mu[0] * scale
            inner[strip, JE - 1] = (a[i] * (1 - frac) + bl[0, 1:-1] * scale) if r > 1 else inner[strip, JE - 1]
            inner[strip, JE] = (b[i] * frac + bu[0, 1:-1] * scale) if r > 1 else inner[strip, JE]

    for c in range(1, K):
        fill(c, c + 1)
    for c in range(0, -K, -1):
        fill(c, c - 1)
    return GridField(grid, vals, inner, maxima, r, noise, seed,
                     {"h": h, "dx": g.dx, "J": g.J, "K": K, "J_ext": JE})


class NbmInterpolation:
    """Y (edge values include the retained in-edge refinement) and Y~ (edge
    values linear between vertices), both linear in t between the crossings
    of the vertical line at x with the graph, and 0 on t = 0."""

    def __init__(self, gf: GridField):
        self.f = gf
        self.g = gf.grid

    def _crossings(self, x: float, bridge: bool):
        g, f = self.g, self.f
        s = x * g.n
        if not -g.K <= s <= g.K:
            raise ValueError("x outside the window")
        c = min(int(math.floor(s)), g.K - 1)
        lam = s - c
        JE = g.J_ext
        ts, vs = [0.0], [0.0]
        for j in range(-g.J - 1, g.J + 1):
            lower = c if (j - c) % 2 == 0 else c + 1
            upper = c + 1 if lower == c else c
            le = lam if lower == c else 1.0 - lam
            va = f.values[lower + g.K, j + JE]
            vb = f.values[upper + g.K, j + 1 + JE]
            v = (1 - le) * va + le * vb
            if bridge and f.refine > 1:
                pts = np.concatenate([[va], f.interior[c + g.K, j + JE], [vb]])
                pos = le * f.refine
                i = min(int(math.floor(pos)), f.refine - 1)
                w = pos - i
                v = (1 - w) * pts[i] + w * pts[i + 1]
            ts.append((j + le) * g.h)
            vs.append(float(v))
        order = np.argsort(ts, kind="stable")
        return np.asarray(ts)[order], np.asarray(vs)[order]

    def _eval(self, t: float, x: float, bridge: bool) -> float:
        if abs(t) > self.g.J * self.g.h + 1e-12:
            raise ValueError("t outside the window")
        if t == 0:
            return 0.0
        ts, vs = self._crossings(x, bridge)
        return float(np.interp(t, ts, vs))

    def Y(self, t: float, x: float) -> float:
        return self._eval(t, x, True)

    def Y_tilde(self, t: float, x: float) -> float:
        return self._eval(t, x, False)

    def sup_difference(self, tmax: float, xmax: float) -> float:
        """sup |Y - Y~| over the graph inside [0, tmax] x [0, xmax]; the sup over
        each rhombus sits on its boundary, so this is the max over retained
        in-edge values minus the linear edge interpolation."""
        f, g = self.f, self.g
        if f.refine == 1:
            return 0.0
        JE, r = g.J_ext, f.refine
        jmax = int(math.floor(tmax / g.h + 1e-9))
        cmax = min(int(math.floor(xmax * g.n + 1e-9)), g.K - 1)
        frac = np.arange(1, r) / r
        best = 0.0
        for c in range(0, cmax):
            for j in range(0, jmax):
                lower = c if (j - c) % 2 == 0 else c + 1
                upper = c + 1 if lower == c else c
                va = f.values[lower + g.K, j + JE]
                vb = f.values[upper + g.K, j + 1 + JE]
                d = f.interior[c + g.K, j + JE] - (va + (vb - va) * frac)
                best = max(best, float(np.max(np.abs(d))))
        return best


def interpolate_nbm(gf: GridField) -> NbmInterpolation:
    return NbmInterpolation(gf)


def network_bound(n: int, alpha: float, a: float, b: float) -> float:
    """Second-moment bound for the bridge-network sup on [0, a] x [0, b]."""
    return math.log(a * b * n ** (1.5 + alpha) + 1) / (2 * n ** (0.5 + alpha))


def _mean_se(x):
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0


def probe_variance(alpha: float, n: int, probes, reps: int, seed: int, T: float = 1.0, X: float = 0.5) -> list:
    """MC variance of Y at each probe (t, x) against the target |t|."""
    grid = RhombusGrid(n, alpha, T, X)
    vals = np.empty((reps, len(probes)))
    for i in range(reps):
        ev = interpolate_nbm(sample_grid_nbm(grid, stream(seed, "probe", n, i).integers(2**63)))
        vals[i] = [ev.Y(t, x) for t, x in probes]
    out = []
    for p, col in zip(probes, vals.T):
        sq = col**2
        m, se = _mean_se(sq)
        out.append({"t": p[0], "x": p[1], "var": m, "se": se, "target": abs(p[0]),
                    "z": (m - abs(p[0])) / se if se > 0 else 0.0})
    return out


def spatial_difference(alpha: float, n: int, t: float, x: float, x2: float, reps: int, seed: int,
                       T: float = 1.0, X: float = 0.5) -> dict:
    """MC variance of Y(t, x) - Y(t, x2)."""
    grid = RhombusGrid(n, alpha, T, X)
    d = np.empty(reps)
    for i in range(reps):
        ev = interpolate_nbm(sample_grid_nbm(grid, stream(seed, "spatial", n, i).integers(2**63)))
        d[i] = ev.Y(t, x) - ev.Y(t, x2)
    m, se = _mean_se(d**2)
    return {"n": n, "var": m, "se": se}


def network_check(alpha: float, n: int, a: float, b: float, reps: int, seed: int) -> dict:
    """MC E[Z_n^2] on [0, a] x [0, b] against the bound."""
    grid = RhombusGrid(n, alpha, a, b)
    z = np.array([sample_grid_nbm(grid, stream(seed, "network", n, i).integers(2**63)).z_statistic(a, b)
                  for i in range(reps)])
    m, se = _mean_se(z**2)
    bound = network_bound(n, alpha, a, b)
    return {"n": n, "EZ2": m, "se": se, "bound": bound, "ok": m <= bound}


def residual_check(gf: GridField) -> dict:
    """Empirical residual variance against the declared bridge-midpoint variance."""
    res = gf.residuals()
    target = gf.grid.h / 2 * NOISE_SCALE[gf.noise] ** 2
    v = float(np.mean(res**2))
    se = float(np.std(res**2, ddof=1) / math.sqrt(res.size))
    return {"count": int(res.size), "var": v, "se": se, "target": target, "z": (v - target) / se}


def random_time_path(grid: RhombusGrid, rng, start: int = 0) -> list:
    """Lattice vertices (j, k) of a random monotone path from row -J to J."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    j, k = -grid.J, start if (start + grid.J) % 2 == 0 else start + 1
    out = [(j, k)]
    while j < grid.J:
        step = int(rng.choice([-1, 1]))
        if abs(k + step) > grid.K:
            step = -step
        j, k = j + 1, k + step
        out.append((j, k))
    return out


def path_variance_ratio(gf: GridField, path) -> float:
    """Sum of squared increments along a lattice path over its time span."""
    v = np.array([gf.value(j, k) for j, k in path])
    span = (path[-1][0] - path[0][0]) * gf.grid.h
    return float(np.sum(np.diff(v) ** 2) / span)
