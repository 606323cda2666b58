"""Random-walk kernels and Euler schemes for the heat equation on the half-line.

Lattice: t_j = j dt, x_k = k dx, values only where j and k have equal parity.
The boundary column k = 0 is held at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .rng import as_generator


# walk kernels

def rw_pmf_int(k: int, m) -> np.ndarray | float:
    """P(S_k = m) for the simple symmetric walk; zero off parity or range."""
    m = np.asarray(m)
    ok = (np.abs(m) <= k) & ((m + k) % 2 == 0)
    mm = np.where(ok, m, 0)
    logp = gammaln(k + 1) - gammaln((k + mm) // 2 + 1) - gammaln((k - mm) // 2 + 1) - k * math.log(2)
    out = np.where(ok, np.exp(logp), 0.0)
    return float(out) if out.ndim == 0 else out


def rw_pmf(k: int, x: float, n: float) -> float:
    """P(S_k / sqrt(n) = x); zero when x is off the lattice or parity."""
    y = x * math.sqrt(n)
    m = round(y)
    if abs(y - m) > 1e-9:
        return 0.0
    return rw_pmf_int(k, m)


def gauss_density(k: int, n: float, x):
    """Normal density with variance k/n."""
    v = k / n
    return np.exp(-np.asarray(x, dtype=float) ** 2 / (2 * v)) / math.sqrt(2 * math.pi * v)


def llt_gap(n: int, beta: float, C: float | None = None, width: float = 10.0) -> dict:
    """sup over k in [beta, n] and lattice |x| <= width*sqrt(k/n) of
    |sqrt(n)/2 p_n^k(x) - rho_n^k(x)|, with the bound (C/pi) sqrt(n/beta^3)."""
    best, arg = 0.0, None
    for k in range(max(1, math.ceil(beta)), n + 1):
        mmax = int(width * math.sqrt(k)) + 1
        m = np.arange(-min(mmax, k), min(mmax, k) + 1)
        m = m[(m + k) % 2 == 0]
        x = m / math.sqrt(n)
        gap = np.abs(math.sqrt(n) / 2 * rw_pmf_int(k, m) - gauss_density(k, n, x))
        i = int(np.argmax(gap))
        if gap[i] > best:
            best, arg = float(gap[i]), (k, float(x[i]))
    out = {"n": n, "beta": beta, "gap": best, "argmax": arg, "scaled": best * math.pi * math.sqrt(beta**3 / n)}
    if C is not None:
        out["bound"] = C / math.pi * math.sqrt(n / beta**3)
        out["ok"] = best <= out["bound"]
    return out


def calibrate_llt_constant(ns=(16, 32, 64, 128, 256)) -> float:
    """Smallest C making the bound hold at beta = n for every n in ns."""
    return max(llt_gap(n, n)["scaled"] for n in ns)


def rw_heat(f, n: float, t: float, x: float, alpha: float = 0.0) -> float:
    """E f(S_{floor(nt)} / n^{1/2+alpha} + x), summed exactly."""
    k = int(math.floor(n * t + 1e-12))
    m = np.arange(-k, k + 1, 2)
    vals = np.asarray(f(m / n ** (0.5 + alpha) + x), dtype=float)
    return float(np.sum(rw_pmf_int(k, m) * vals))


# fields

@dataclass
class Field:
    """Values on the parity lattice; values[j, k] for j, k >= 0."""

    dt: float
    dx: float
    values: np.ndarray
    noise: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.values.shape

    def on_lattice(self, j: int, k: int) -> bool:
        return (j - k) % 2 == 0

    def rows(self):
        """(j, k, t, x, value) over lattice points."""
        J, K = self.values.shape
        for j in range(J):
            for k in range(j % 2, K, 2):
                yield j, k, j * self.dt, k * self.dx, float(self.values[j, k])


NOISE_VARIANCE = {
    "standard": lambda n: 1.0 / (2.0 * math.sqrt(n)),
    "wide": lambda n: 1.0 / math.sqrt(2.0 * n),
}


def _run(noise: np.ndarray, K: int) -> np.ndarray:
    """Half-line recursion V^{j+1}_k = (V^j_{k+1} + V^j_{k-1})/2 + noise[j, k]."""
    J, W = noise.shape
    v = np.zeros((J + 1, W + 1))
    for j in range(J):
        nxt = np.zeros(W + 1)
        nxt[1:W] = 0.5 * (v[j, 2:] + v[j, :-2]) + noise[j, 1:W]
        v[j + 1] = nxt
    return v[:, :K + 1]


def _lattice_noise(J: int, W: int, var: float, rng) -> np.ndarray:
    """Independent N(0, var) at (j, k) with k = j+1 mod 2, k >= 1; zero elsewhere."""
    eta = rng.standard_normal((J, W)) * math.sqrt(var)
    jj, kk = np.meshgrid(np.arange(J), np.arange(W), indexing="ij")
    eta[((kk - jj) % 2 == 0) | (kk == 0)] = 0.0
    return eta


def euler_she(n: int, T: float = 1.0, X: float = 1.0, rng=0, noise: str = "standard") -> Field:
    """Euler scheme for v_t = v_xx/2 + white noise on x > 0, v = 0 at t = 0 and x = 0.

    dx = n^{-1/2}, dt = 1/n. Each rectangle [x_{k-1}, x_{k+1}] x [t_j, t_{j+1}]
    contributes (sqrt(n)/2) times its white-noise mass, variance 1/(2 sqrt(n));
    noise="wide" uses variance 1/sqrt(2n) instead. The domain is padded by
    J columns so the window never sees the truncation.
    """
    rng = as_generator(rng)
    J, K = int(round(T * n)), int(math.floor(X * math.sqrt(n) + 1e-9))
    if K < 2:
        raise ValueError("domain too small: need at least 2 interior columns")
    W = K + J + 2
    eta = _lattice_noise(J, W, NOISE_VARIANCE[noise](n), rng)
    v = _run(eta, W - 1)
    return Field(1.0 / n, 1.0 / math.sqrt(n), v[:, :K + 1], eta,
                 {"n": n, "T": T, "X": X, "noise": noise, "K": K, "J": J, "full": v})


def _green(d: int, k: np.ndarray, kp: np.ndarray) -> np.ndarray:
    """P(S_d = k'-k) - P(S_d = -k-k') on a (k, k') grid."""
    return rw_pmf_int(d, kp[None, :] - k[:, None]) - rw_pmf_int(d, -k[:, None] - kp[None, :])


def _heat_kernel(s: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    g = lambda z: np.exp(-z**2 / (2 * s)) / math.sqrt(2 * math.pi * s)
    return g(y[None, :] - x[:, None]) - g(y[None, :] + x[:, None])


def mild_field(field: Field, variant: str = "a", jmax: int | None = None, kmax: int | None = None) -> np.ndarray:
    """Noise-sum representation of the field at all lattice points of the window.

    variant "a": exact discrete Green's function (walk pmf with the image term);
    reproduces the Euler values. variant "b": the image heat kernel at time
    lag (d + 1/2) dt times the rectangle mass 2 dx * eta, i.e. the mild
    solution discretized on the same noise.
    """
    eta = field.noise
    J = field.values.shape[0] - 1 if jmax is None else jmax
    K = field.values.shape[1] - 1 if kmax is None else kmax
    W = eta.shape[1]
    k = np.arange(K + 1)
    if variant == "b":
        reach = int(math.ceil(12 * math.sqrt(J * field.dt) / field.dx)) + K + 2
        W = min(W, reach)
    kp = np.arange(W)
    out = np.zeros((J + 1, K + 1))
    for d in range(J):
        if variant == "a":
            ker = _green(d, k, kp)
        elif variant == "b":
            ker = _heat_kernel((d + 0.5) * field.dt, k * field.dx, kp * field.dx) * (2 * field.dx)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        # row j = j' + d receives noise injected at step j' - 1
        out[d + 1:J + 1] += eta[:J - d, :W] @ ker.T
    lattice = (np.arange(J + 1)[:, None] - k[None, :]) % 2 == 0
    return np.where(lattice, out, 0.0)


def mild_discrete(field: Field, j: int, k: int, variant: str = "a") -> float:
    """Single-point version of mild_field."""
    J, K = field.values.shape[0] - 1, field.values.shape[1] - 1
    if not (0 <= j <= J and 0 <= k <= K):
        raise IndexError(f"({j}, {k}) outside the field")
    if j == 0:
        return 0.0
    eta = field.noise
    W = eta.shape[1]
    kp = np.arange(W)
    total = 0.0
    for jp in range(1, j + 1):
        d = j - jp
        if variant == "a":
            ker = _green(d, np.array([k]), kp)[0]
        else:
            ker = _heat_kernel((d + 0.5) * field.dt, np.array([k * field.dx]), kp * field.dx)[0] * 2 * field.dx
        total += float(ker @ eta[jp - 1])
    return total


def window_mse(field: Field, other: np.ndarray, T: float = 1.0, X: float = 1.0) -> float:
    """Mean squared difference over lattice points with 0 < t <= T, 0 < x <= X."""
    J, K = field.values.shape
    jj, kk = np.meshgrid(np.arange(J), np.arange(K), indexing="ij")
    mask = ((jj - kk) % 2 == 0) & (jj > 0) & (kk > 0) & (jj * field.dt <= T + 1e-12) & (kk * field.dx <= X + 1e-12)
    d = (field.values - other)[mask]
    return float(np.mean(d**2))


def weak_noise_run(n: int, alpha: float, A: float = 1.0, B: float = 1.0, rng=0,
                   a: float = 0.5, b: float = 0.5, noise: str = "wide") -> dict:
    """sup |Y^j_k| over j <= A n^a, k <= B n^b for the Euler recursion with
    weakened noise. noise="wide" uses variance 1/(sqrt(2) n^{1/2+alpha});
    "standard" uses n^{-1/2-alpha}/2; "zero" turns the noise off.

    Any 0 < a < 1 + 2 alpha, b > 0 is admissible. The default a = b = 1/2
    decays like n^{-1/2-alpha+a/2}; the physical window a = 1,
    b = 1/2 + alpha decays only like n^{-alpha} up to logs.
    """
    if not 0 < a < 1 + 2 * alpha or b <= 0:
        raise ValueError("window exponents need 0 < a < 1 + 2 alpha and b > 0")
    rng = as_generator(rng)
    J = int(math.floor(A * n**a))
    K = int(math.floor(B * n**b))
    W = K + J + 2
    if noise == "wide":
        var = 1.0 / (math.sqrt(2) * n ** (0.5 + alpha))
    elif noise == "standard":
        var = 0.5 * n ** (-0.5 - alpha)
    elif noise == "zero":
        var = 0.0
    else:
        raise ValueError(f"unknown noise {noise!r}")
    eta = _lattice_noise(J, W, var, rng)
    v = _run(eta, W - 1)[:, :K + 1]
    return {"n": n, "alpha": alpha, "J": J, "K": K, "sup": float(np.max(np.abs(v))), "field": v}


def odd_extension(g):
    """g~(x) = g(x) for x > 0, -g(-x) for x < 0, 0 at 0."""
    def gt(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > 0, g(np.abs(x)), -g(np.abs(x)))
        return np.where(x == 0, 0.0, out)
    return gt


def deterministic_euler(g, n: int, T: float = 1.0, X: float = 1.0) -> dict:
    """Noise-free scheme W^{j+1}_k = (W^j_{k+1} + W^j_{k-1})/2 from odd-extended data.

    Returns the recursion field and the walk-expectation field
    E g~((S_j + k)/sqrt(n)) on the same window.
    """
    J, K = int(round(T * n)), int(math.floor(X * math.sqrt(n) + 1e-9))
    W = K + J + 2
    dx = 1.0 / math.sqrt(n)
    gt = odd_extension(g)
    ks = np.arange(W + 1)
    row = np.where(ks % 2 == 0, gt(ks * dx), 0.0)
    row[0] = 0.0
    rec = np.zeros((J + 1, K + 1))
    rec[0] = row[:K + 1]
    cur = row
    for j in range(J):
        nxt = np.zeros_like(cur)
        nxt[1:-1] = 0.5 * (cur[2:] + cur[:-2])
        cur = nxt
        rec[j + 1] = cur[:K + 1]
    walk = np.zeros_like(rec)
    for j in range(J + 1):
        m = np.arange(-j, j + 1, 2)
        p = rw_pmf_int(j, m)
        for k in range(j % 2, K + 1, 2):
            walk[j, k] = float(np.sum(p * gt((m + k) * dx)))
    lattice = (np.arange(J + 1)[:, None] - np.arange(K + 1)[None, :]) % 2 == 0
    return {"recursion": np.where(lattice, rec, 0.0), "walk": walk, "dt": 1.0 / n, "dx": dx}


def heat_image(g, t: float, x: float, upper: float = 50.0, points: int = 20001) -> float:
    """E g~(x + B_t) by trapezoid quadrature over y in (0, upper)."""
    if t <= 0:
        return float(odd_extension(g)(x))
    y = np.linspace(0.0, upper, points)
    ker = _heat_kernel(t, np.array([x]), y)[0]
    return float(np.trapezoid(ker * np.asarray(g(y), dtype=float), y))


def interpolate_field(field: Field):
    """Continuous evaluator of a lattice field.

    Values are first extended linearly along both lattice diagonals, set to
    zero on the axes t = 0 and x = 0, and then interpolated linearly in x
    between the nearest defined points at the query time.
    """
    v = field.values
    J, K = v.shape[0] - 1, v.shape[1] - 1
    dt, dx = field.dt, field.dx

    def defined_at(j: int, lam: float):
        xs, vals = [0.0], [0.0]
        for k in range(j % 2, K + 1, 2):
            base = v[j, k]
            if lam == 0.0:
                xs.append(k * dx)
                vals.append(base)
                continue
            for s in (1, -1):
                kk = k + s
                if 0 <= kk <= K and j + 1 <= J:
                    xs.append(k * dx + s * lam * dx)
                    vals.append((1 - lam) * base + lam * v[j + 1, kk])
        order = np.argsort(xs, kind="stable")
        return np.asarray(xs)[order], np.asarray(vals)[order]

    def ev(t: float, x: float) -> float:
        if t < -1e-12 or x < -1e-12 or t > J * dt + 1e-12 or x > K * dx + 1e-12:
            raise ValueError(f"({t}, {x}) outside the interpolated domain")
        if t <= 1e-15 or x <= 1e-15:
            return 0.0
        j = min(int(math.floor(t / dt + 1e-9)), J)
        lam = t / dt - j
        if lam < 1e-9 or j == J:
            lam = 0.0
        xs, vals = defined_at(j, lam)
        if x > xs[-1]:
            raise ValueError(f"x = {x} beyond the last defined point")
        return float(np.interp(x, xs, vals))

    return ev
