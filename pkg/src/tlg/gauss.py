"""Gaussian vectors, bridges, conditioning, sampling, and maxima of bridges."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import as_generator

CLIP = 1e-9


@dataclass
class GaussianVector:
    labels: list
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        self.labels = list(self.labels)
        self.mean = np.asarray(self.mean, dtype=float).reshape(-1)
        self.cov = np.asarray(self.cov, dtype=float).reshape(len(self.labels), len(self.labels))
        if self.mean.shape[0] != len(self.labels):
            raise ValueError("mean length does not match labels")
        scale = max(1.0, float(np.max(np.abs(self.cov)))) if self.cov.size else 1.0
        if not np.allclose(self.cov, self.cov.T, atol=1e-9 * scale, rtol=0):
            raise ValueError("covariance is not symmetric")

    def index(self, label) -> int:
        return self.labels.index(label)

    def sub(self, labels) -> "GaussianVector":
        idx = [self.index(x) for x in labels]
        return GaussianVector(list(labels), self.mean[idx], self.cov[np.ix_(idx, idx)])

    def var(self, label) -> float:
        i = self.index(label)
        return float(self.cov[i, i])

    def covariance(self, a, b) -> float:
        return float(self.cov[self.index(a), self.index(b)])


def pinv_psd(a: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Pseudo-inverse of a symmetric PSD matrix, dropping tiny eigenvalues."""
    if a.size == 0:
        return a.copy()
    w, v = np.linalg.eigh((a + a.T) / 2)
    top = max(float(np.max(np.abs(w))), 0.0)
    keep = w > rtol * top if top > 0 else np.zeros_like(w, dtype=bool)
    return (v[:, keep] / w[keep]) @ v[:, keep].T


def condition(gv: GaussianVector, observed: dict, rtol: float = 1e-10) -> GaussianVector:
    """Law of the unobserved labels given observed values.

    A singular observed block is handled by pseudo-inverse; observed values
    that the block cannot produce (off its range) raise ValueError.
    """
    if not observed:
        return GaussianVector(gv.labels, gv.mean.copy(), gv.cov.copy())
    obs = [gv.index(x) for x in observed]
    rest = [i for i in range(len(gv.labels)) if i not in obs]
    x = np.array([observed[lab] for lab in observed], dtype=float)
    s_oo = gv.cov[np.ix_(obs, obs)]
    s_ro = gv.cov[np.ix_(rest, obs)]
    s_rr = gv.cov[np.ix_(rest, rest)]
    inv = pinv_psd(s_oo, rtol)
    resid = x - gv.mean[obs]
    proj = s_oo @ inv @ resid
    scale = max(1.0, float(np.max(np.abs(resid))))
    if np.max(np.abs(proj - resid), initial=0.0) > 1e-7 * scale:
        raise ValueError("observed values are impossible under a singular observed block")
    mean = gv.mean[rest] + s_ro @ inv @ resid
    cov = s_rr - s_ro @ inv @ s_ro.T
    return GaussianVector([gv.labels[i] for i in rest], mean, (cov + cov.T) / 2)


def factor(cov: np.ndarray) -> np.ndarray:
    """Matrix L with L L^T = cov, clipping eigenvalues above -CLIP relative."""
    cov = np.asarray(cov, dtype=float)
    if cov.size == 0:
        return cov.copy()
    scale = max(1.0, float(np.max(np.abs(cov))))
    if not np.allclose(cov, cov.T, atol=1e-9 * scale, rtol=0):
        raise ValueError("covariance is not symmetric")
    w, v = np.linalg.eigh((cov + cov.T) / 2)
    top = max(float(np.max(w)), 0.0)
    if top > 0 and float(np.min(w)) < -CLIP * max(top, 1.0):
        raise ValueError(f"covariance is not positive semidefinite (eigenvalue {np.min(w):.3g})")
    w = np.clip(w, 0.0, None)
    return v * np.sqrt(w)


def sample(gv: GaussianVector, rng, size: int | None = None) -> np.ndarray:
    """Draw one vector (or `size` rows) from gv."""
    rng = as_generator(rng)
    fac = factor(gv.cov)
    d = len(gv.labels)
    n = 1 if size is None else size
    z = rng.standard_normal((n, d))
    out = gv.mean + z @ fac.T
    return out[0] if size is None else out


# bridges

def _vmap(family):
    if family in ("brownian", None):
        return lambda t: t
    kind, fn = family
    if kind != "glued":
        raise ValueError(f"bridge_cov needs a monotone family, got {kind!r}")
    return fn


def bridge_cov(family, s: float, u: float, p: float, q: float) -> float:
    """Covariance of the zero-pinned bridge noise on [s, u].

    family is "brownian" or ("glued", V) with V nondecreasing; times are
    replaced by V-values. A time-changed family ("time-changed", f) uses
    the min(f, f) kernel conditioned on both endpoints.
    """
    if not (s - 1e-12 <= min(p, q) and max(p, q) <= u + 1e-12):
        raise ValueError("bridge times outside the interval")
    if isinstance(family, tuple) and family[0] == "time-changed":
        f = family[1]

        def k(a, b):
            return min(f(a), f(b))

        return float(conditional_kernel(k, [p], [q], [s, u])[0, 0])
    v = _vmap(family)
    vs, vu = v(s), v(u)
    if vu - vs < 1e-12:
        return 0.0
    lo, hi = v(min(p, q)), v(max(p, q))
    return (lo - vs) * (vu - hi) / (vu - vs)


def conditional_kernel(k, xs, ys, anchors) -> np.ndarray:
    """k(xs, ys) minus its projection on the anchor values (Schur complement)."""
    kxy = np.array([[k(a, b) for b in ys] for a in xs], dtype=float)
    if not anchors:
        return kxy
    kaa = np.array([[k(a, b) for b in anchors] for a in anchors], dtype=float)
    kxa = np.array([[k(a, b) for b in anchors] for a in xs], dtype=float)
    kay = np.array([[k(a, b) for b in ys] for a in anchors], dtype=float)
    return kxy - kxa @ pinv_psd(kaa) @ kay


def bridge_pair_cov(s1: float, s2: float, tau1: float, tau2: float) -> float:
    """Cov of two Brownian motions equal at s1 and s2 and conditionally
    independent between, at times tau1 and tau2 inside [s1, s2]."""
    return s1 + (tau1 - s1) * (tau2 - s1) / (s2 - s1)


def sample_bridge_grid(reps: int, m: int, rng, length: float = 1.0) -> np.ndarray:
    """Standard Brownian bridges on [0, length] at m+1 equally spaced times."""
    rng = as_generator(rng)
    dt = length / m
    w = np.zeros((reps, m + 1))
    np.cumsum(rng.standard_normal((reps, m)) * math.sqrt(dt), axis=1, out=w[:, 1:])
    t = np.linspace(0.0, 1.0, m + 1)
    return w - t * w[:, -1:]


def cell_maxima(left: np.ndarray, right: np.ndarray, dt: float, u: np.ndarray) -> np.ndarray:
    """Exact law of the max of a Brownian bridge of duration dt from left to right,
    driven by uniforms u."""
    return 0.5 * (left + right + np.sqrt((left - right) ** 2 - 2.0 * dt * np.log(u)))


def bridge_extrema(count: int, rng, m: int = 64, method: str = "exact", chunk: int = 20000):
    """Suprema and infima over [0, 1] of `count` independent standard bridges.

    method "exact" samples the bridge at m cells and adds the exact
    within-cell extremes, so each of the two is exact in law for any m;
    their joint law draws the cell max and min independently, which is
    accurate once cells are short. method "grid" uses the m+1 grid values.
    """
    rng = as_generator(rng)
    hi = np.empty(count)
    lo = np.empty(count)
    dt = 1.0 / m
    for start in range(0, count, chunk):
        n = min(chunk, count - start)
        b = sample_bridge_grid(n, m, rng)
        sl = slice(start, start + n)
        if method == "exact":
            u = 1.0 - rng.random((2, n, m))
            hi[sl] = cell_maxima(b[:, :-1], b[:, 1:], dt, u[0]).max(axis=1)
            lo[sl] = -cell_maxima(-b[:, :-1], -b[:, 1:], dt, u[1]).max(axis=1)
        elif method == "grid":
            hi[sl] = b.max(axis=1)
            lo[sl] = b.min(axis=1)
        else:
            raise ValueError(f"unknown method {method!r}")
    return hi, lo


def bridge_maxima(count: int, rng, m: int = 64, method: str = "exact") -> np.ndarray:
    return bridge_extrema(count, rng, m, method)[0]


def harmonic(n: int) -> float:
    return sum(1.0 / k for k in range(1, n + 1))


def bridge_max_stats(n: int, reps: int, rng, m: int = 64, method: str = "exact", beta: float = 1.0) -> dict:
    """Monte Carlo functionals of M_n, the max over n independent bridges.

    Reports E M_n and E (M_n^+)^2 with standard errors, the harmonic number,
    both 4E and 2E multiples of the second moment, moments of the two-sided
    max sup|B| against sqrt(ln(n+1)) and ln(n+1)/2, and the single-bridge
    tail P(max > beta) against exp(-2 beta^2).
    """
    rng = as_generator(rng)
    hi, lo = bridge_extrema(n * reps, rng, m, method)
    per = hi.reshape(reps, n)
    mx = per.max(axis=1)
    ab = np.maximum(hi, -lo).reshape(reps, n).max(axis=1)
    sq = np.maximum(mx, 0.0) ** 2
    tail = per.ravel() > beta
    k = per.size
    mean_sq = float(sq.mean())
    se_sq = float(sq.std(ddof=1) / math.sqrt(reps))
    p = float(tail.mean())

    def se(x):
        return float(x.std(ddof=1) / math.sqrt(reps))

    return {
        "n": n, "reps": reps, "m": m, "method": method,
        "mean_M": float(mx.mean()), "se_M": se(mx),
        "mean_M2": mean_sq, "se_M2": se_sq,
        "H_n": harmonic(n),
        "four_E": 4 * mean_sq, "four_E_se": 4 * se_sq,
        "two_E": 2 * mean_sq, "two_E_se": 2 * se_sq,
        "mean_absM": float(ab.mean()), "se_absM": se(ab),
        "mean_absM2": float((ab**2).mean()), "se_absM2": se(ab**2),
        "sqrt_ln": math.sqrt(math.log(n + 1)), "half_ln": 0.5 * math.log(n + 1),
        "beta": beta, "tail": p, "tail_se": math.sqrt(max(p * (1 - p), 1e-300) / k),
        "tail_exact": math.exp(-2 * beta**2),
    }


def max_bound_check(sigmas, correlation=None, reps: int = 100000, rng=0) -> dict:
    """E max|X_i| and E max X_i^2 against 2 max(sigma) sqrt(ln(n+1)) and
    2 max(sigma)^2 ln(n+1). Satisfied when estimate + 4 stderr <= bound."""
    rng = as_generator(rng)
    s = np.asarray(sigmas, dtype=float)
    n = s.size
    if np.any(s < 0):
        raise ValueError("standard deviations must be nonnegative")
    c = np.eye(n) if correlation is None else np.asarray(correlation, dtype=float)
    cov = c * np.outer(s, s)
    fac = factor(cov)
    x = rng.standard_normal((reps, n)) @ fac.T
    a = np.abs(x).max(axis=1)
    a2 = a**2
    smax = float(s.max()) if n else 0.0
    b1 = 2 * smax * math.sqrt(math.log(n + 1))
    b2 = 2 * smax**2 * math.log(n + 1)
    e1, se1 = float(a.mean()), float(a.std(ddof=1) / math.sqrt(reps))
    e2, se2 = float(a2.mean()), float(a2.std(ddof=1) / math.sqrt(reps))
    return {
        "lhs_abs": e1, "se_abs": se1, "bound_abs": b1, "ok_abs": e1 + 4 * se1 <= b1 + 1e-15,
        "lhs_sq": e2, "se_sq": se2, "bound_sq": b2, "ok_sq": e2 + 4 * se2 <= b2 + 1e-15,
    }


def bridge_pair_mc(s1: float, s2: float, tau1: float, tau2: float, reps: int, rng) -> dict:
    """MC covariance of two Brownian motions sharing the path up to s1 and
    the value at s2, independent bridges in between."""
    rng = as_generator(rng)
    w1 = rng.standard_normal(reps) * math.sqrt(s1)
    w2 = w1 + rng.standard_normal(reps) * math.sqrt(s2 - s1)
    out = []
    for tau in (tau1, tau2):
        b = (tau - s1) / (s2 - s1)
        noise = rng.standard_normal(reps) * math.sqrt(bridge_cov("brownian", s1, s2, tau, tau))
        out.append((1 - b) * w1 + b * w2 + noise)
    prod = out[0] * out[1]
    return {"mc": float(prod.mean()), "se": float(prod.std(ddof=1) / math.sqrt(reps)),
            "exact": bridge_pair_cov(s1, s2, tau1, tau2)}
