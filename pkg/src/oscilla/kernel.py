"""Schrodinger propagator kernels for the (k,a)-generalized Laguerre operator.

Three kernels are exposed: the explicit one-dimensional kernel, the k = 0
radial kernel through the series S, and the free evolution obtained from the
SL(2) relation.  Grids, weighted norms and time evolution for n = 1 live here
as well.
"""
from __future__ import annotations

import csv
import json
import math
import os
import warnings
from dataclasses import asdict, dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DomainError, NonConvergenceError
from .series import SeriesParams, evaluate
from .specfun import i_tilde_imag_values

MIN_NODES = 64
POINTS_PER_PERIOD = 4.0


class AliasingWarning(UserWarning):
    """The kernel oscillates faster than the grid resolves."""


def sigma_ka(n: int, k_sum: float, a: float) -> float:
    """(n + sum_alpha k(alpha) + a - 2) / a; for n = 1 the root sum is 2k."""
    if not a > 0.0:
        raise DomainError(f"a must be > 0, got {a}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    s = (n + k_sum + a - 2.0) / a
    if not s > 0.0:
        raise DomainError(f"sigma_(k,a) = {s} must be > 0 (n={n}, k_sum={k_sum}, a={a})")
    return s


@dataclass(frozen=True)
class KernelParams:
    n: int = 1
    k: float = 0.0
    a: float = 2.0
    t: float = 0.5
    normalization: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n}")
        if not (math.isfinite(self.k) and self.k >= 0.0):
            raise DomainError(f"k must be >= 0, got {self.k}")
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise DomainError(f"a must be > 0, got {self.a}")
        if self.n >= 2 and self.k != 0.0:
            raise DomainError("for n >= 2 only k = 0 is supported")
        if not math.isfinite(self.t):
            raise DomainError(f"t must be finite, got {self.t}")
        sigma_ka(self.n, self.k_sum, self.a)

    @property
    def k_sum(self) -> float:
        return 2.0 * self.k if self.n == 1 else 0.0

    @property
    def sigma(self) -> float:
        return sigma_ka(self.n, self.k_sum, self.a)

    @property
    def weight_exponent(self) -> float:
        """Exponent of |x| in the measure weight for n = 1: a - 2 + 2k."""
        return self.a - 2.0 + self.k_sum

    def at(self, t: float) -> "KernelParams":
        return replace(self, t=float(t))


def unitary_normalization(p: KernelParams) -> float:
    """a^{1-sigma} / (2 Gamma(sigma)): the reciprocal of the Gaussian mass
    int exp(-|x|^a/a) |x|^{a-2+2k} dx on the line."""
    s = p.sigma
    return math.exp((1.0 - s) * math.log(p.a) - math.log(2.0) - math.lgamma(s))


def _check_time(t: float) -> None:
    if not (0.0 < abs(t) < math.pi):
        raise DomainError(f"need 0 < |t| < pi, got t={t}")


def _check_1d(p: KernelParams) -> None:
    if p.n != 1:
        raise DomainError(f"one-dimensional kernel needs n = 1, got n={p.n}")
    if p.a < 2.0 - 4.0 * p.k:
        raise DomainError(f"need a >= 2 - 4k, got a={p.a}, k={p.k}")


def _isin_power(s: float, power: float) -> complex:
    # principal branch of (i sin t)^power; arg(i sin t) = +-pi/2
    return abs(s) ** power * complex(math.cos(math.copysign(0.5 * math.pi, s) * power),
                                     math.sin(math.copysign(0.5 * math.pi, s) * power))


def kernel_1d(p: KernelParams, x, xp) -> np.ndarray | complex:
    """The n = 1 kernel

        Gamma(sigma) e^{i(|x|^a+|x'|^a) cot(t)/a} / (i sin t)^sigma
          * (I~_{sigma-1}(z) + x x' / (a i sin t)^{2/a} I~_{sigma-1+2/a}(z)),
        z = 2|x x'|^{a/2} / (a i sin t),

    times ``p.normalization``.  Broadcasts over x and x'.
    """
    _check_1d(p)
    _check_time(p.t)
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    a, s, t = p.a, p.sigma, p.t
    st = math.sin(t)
    ax, axp = np.abs(x), np.abs(xp)
    y = 2.0 * (ax * axp) ** (0.5 * a) / (a * st)
    lam0 = s - 1.0
    lam1 = s - 1.0 + 2.0 / a
    i0 = i_tilde_imag_values(np.full(np.shape(y), lam0), y)
    i1 = i_tilde_imag_values(np.full(np.shape(y), lam1), y)
    second = (x * xp) / _isin_power(a * st, 2.0 / a) * i1
    phase = np.exp(1j * (ax ** a + axp ** a) * (math.cos(t) / st) / a)
    pref = p.normalization * math.gamma(s) / _isin_power(st, s)
    out = pref * phase * (i0 + second)
    return complex(out) if out.ndim == 0 else out


def kernel_radial_k0(p: KernelParams, r: float, rp: float, cosangle: float) -> complex:
    """k = 0 kernel for n >= 2 through S(2/a, (n-2)/2; -iy; x^.x'^)."""
    _check_time(p.t)
    if p.n < 2:
        raise DomainError("kernel_radial_k0 needs n >= 2; use kernel_1d for n = 1")
    if p.k != 0.0:
        raise DomainError("kernel_radial_k0 needs k = 0")
    if p.a > 2.0:
        raise DomainError(f"radial kernel is supported for 0 < a <= 2, got a={p.a}")
    if r < 0.0 or rp < 0.0:
        raise DomainError(f"radii must be >= 0, got {(r, rp)}")
    if not -1.0 <= cosangle <= 1.0:
        raise DomainError(f"cosangle must lie in [-1, 1], got {cosangle}")
    a, t = p.a, p.t
    st = math.sin(t)
    y = 2.0 * (r * rp) ** (0.5 * a) / (a * st)
    sp = SeriesParams(2.0 / a, 0.5 * (p.n - 2), y, math.acos(cosangle))
    res = evaluate(sp)
    if not res.converged:
        raise NonConvergenceError(f"series did not converge at b={sp.b}, nu={sp.nu}, y={y}, "
                                  f"phi={sp.phi} (error {res.abs_error:.2e})")
    phase = complex(math.cos((r ** a + rp ** a) * math.cos(t) / (st * a)),
                    math.sin((r ** a + rp ** a) * math.cos(t) / (st * a)))
    return p.normalization * phase / _isin_power(st, p.sigma) * res.value


def free_kernel_1d(p: KernelParams, s: float, x, xp):
    """Kernel of exp(i s |x|^{2-a} Delta_k / a) from the kernel at time arctan(s)."""
    if s == 0.0 or not math.isfinite(s):
        raise DomainError(f"s must be finite and nonzero, got {s}")
    theta = math.atan(s)
    q = p.at(theta)
    x = np.asarray(x, dtype=float)
    g = 1.0 + s * s
    inner = kernel_1d(q, g ** (-1.0 / p.a) * x, xp)
    return np.exp(1j * s * np.abs(x) ** p.a / (g * p.a)) * g ** (-0.5 * p.sigma) * inner


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridFunction1D:
    """Samples of a function on a symmetric sinh grid, with weight |x|^e."""
    nodes: np.ndarray
    values: np.ndarray
    weight_exponent: float

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        if x.ndim != 1 or x.size < MIN_NODES:
            raise DomainError(f"grid needs at least {MIN_NODES} nodes, got {x.size}")
        if np.any(np.diff(x) <= 0.0):
            raise DomainError("grid nodes must be strictly increasing")
        if np.shape(self.values) != x.shape:
            raise DomainError("values must match the nodes")
        if np.any(x == 0.0) and self.weight_exponent < 0.0:
            raise DomainError("a node at 0 is not allowed with a singular weight")

    @property
    def quad_weights(self) -> np.ndarray:
        x = self.nodes
        w = np.empty_like(x)
        w[1:-1] = 0.5 * (x[2:] - x[:-2])
        w[0] = 0.5 * (x[1] - x[0])
        w[-1] = 0.5 * (x[-1] - x[-2])
        return w

    @property
    def measure(self) -> np.ndarray:
        """Quadrature weights for integrals against |x|^e dx."""
        return self.quad_weights * np.abs(self.nodes) ** self.weight_exponent

    def norm(self, q: float = 2.0) -> float:
        u = np.abs(self.values)
        if math.isinf(q):
            return float(u.max())
        return float(np.sum(u ** q * self.measure) ** (1.0 / q))

    def with_values(self, values) -> "GridFunction1D":
        return GridFunction1D(self.nodes, np.asarray(values, dtype=complex), self.weight_exponent)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["node", "re", "im"])
            for x, v in zip(self.nodes, self.values):
                v = complex(v)
                wr.writerow([repr(float(x)), repr(v.real), repr(v.imag)])

    @classmethod
    def from_csv(cls, path, weight_exponent: float) -> "GridFunction1D":
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(rows[:, 0], rows[:, 1] + 1j * rows[:, 2], weight_exponent)


def sinh_grid(count: int, x_max: float, core: float = 1.0) -> np.ndarray:
    """Symmetric nodes x = core sinh(s), s uniform, with no node at 0.

    Spacing is roughly linear for |x| < core and geometric beyond it.
    """
    if count < MIN_NODES or count % 2:
        raise DomainError(f"count must be even and >= {MIN_NODES}, got {count}")
    smax = math.asinh(x_max / core)
    h = 2.0 * smax / (count - 1)
    s = (np.arange(count) - 0.5 * (count - 1)) * h
    return core * np.sinh(s)


def grid_function(p: KernelParams, func, count: int = 512, x_max: float = 8.0,
                  core: float = 1.0) -> GridFunction1D:
    x = sinh_grid(count, x_max, core)
    return GridFunction1D(x, np.asarray(func(x), dtype=complex), p.weight_exponent)


def ground_state(p: KernelParams, x):
    """exp(-|x|^a / a), the lowest eigenfunction of H_{k,a}."""
    return np.exp(-np.abs(np.asarray(x, dtype=float)) ** p.a / p.a)


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

def _aliasing_ratio(u0: GridFunction1D, p: KernelParams, t: float) -> float:
    """Smallest points-per-period of the kernel over significant input nodes."""
    x = u0.nodes
    live = np.abs(u0.values) > 1e-8 * np.max(np.abs(u0.values))
    xs = np.abs(x[live])
    dx = np.gradient(x)[live]
    st = abs(math.sin(t))
    xmax = float(np.max(np.abs(x)))
    a = p.a
    freq = (xs ** (a - 1.0) * abs(math.cos(t)) / st
            + xmax ** (0.5 * a) * xs ** (0.5 * a - 1.0) / st)
    with np.errstate(divide="ignore"):
        ppp = 2.0 * math.pi / (freq * dx)
    return float(np.min(ppp))


def evolution_matrix(x: np.ndarray, p: KernelParams, t: float,
                     x_out: np.ndarray | None = None) -> np.ndarray:
    """Matrix of K_t(x_out_i, x_j) times the weighted quadrature weight at x_j."""
    q = p.at(t)
    g = GridFunction1D(x, np.zeros(x.size, dtype=complex), p.weight_exponent)
    xo = x if x_out is None else np.asarray(x_out, dtype=float)
    return kernel_1d(q, xo[:, None], x[None, :]) * g.measure[None, :]


def apply_kernel(u0: GridFunction1D, p: KernelParams, t: float, x_out) -> np.ndarray:
    """u(t) sampled at arbitrary points, by quadrature over the nodes of u0."""
    _check_1d(p)
    _check_time(t)
    return evolution_matrix(u0.nodes, p, t, x_out) @ u0.values


@dataclass(frozen=True)
class GroupLawReport:
    t1: float
    t2: float
    defect: float
    budget: float

    @property
    def ok(self) -> bool:
        return self.defect <= 2.0 * self.budget


def group_law_check(func, p: KernelParams, t1: float, t2: float, count: int = 400,
                    x_max: float = 9.0) -> GroupLawReport:
    """Compare U(t2)U(t1)u0 with U(t1+t2)u0 on a grid of ``count`` nodes.

    The budget is the sum over the three evolutions of the weighted L2
    change when the input quadrature uses 2*count nodes instead.
    """
    if not abs(t1) + abs(t2) < 0.5 * math.pi:
        raise DomainError("group law check needs |t1| + |t2| < pi/2")
    coarse = grid_function(p, func, count, x_max)
    fine = grid_function(p, func, 2 * count, x_max)
    x = coarse.nodes
    w = coarse.measure

    def dist(u, v):
        return float(np.sqrt(np.sum(np.abs(u - v) ** 2 * w)))

    a1 = apply_kernel(coarse, p, t1, x)
    b1 = apply_kernel(fine, p, t1, fine.nodes)
    two = apply_kernel(coarse.with_values(a1), p, t2, x)
    two_f = apply_kernel(fine.with_values(b1), p, t2, x)
    one = apply_kernel(coarse, p, t1 + t2, x)
    one_f = apply_kernel(fine, p, t1 + t2, x)
    budget = dist(a1, apply_kernel(fine, p, t1, x)) + dist(two, two_f) + dist(one, one_f)
    return GroupLawReport(t1, t2, dist(two, one), budget)


def evolve_1d(u0: GridFunction1D, p: KernelParams, t: float) -> GridFunction1D:
    """u(t, x) = int K_t(x, x') u0(x') |x'|^{a-2+2k} dx' by nodal quadrature."""
    _check_1d(p)
    _check_time(t)
    edge = max(abs(complex(u0.values[0])), abs(complex(u0.values[-1])))
    if edge >= 1e-8:
        raise DomainError(f"u0 does not decay at the grid edges (|u0| = {edge:.2e})")
    ppp = _aliasing_ratio(u0, p, t)
    if ppp < POINTS_PER_PERIOD:
        warnings.warn(f"kernel resolved by only {ppp:.2f} points per period at t={t}",
                      AliasingWarning, stacklevel=2)
    m = evolution_matrix(u0.nodes, p, t)
    return u0.with_values(m @ u0.values)


def evolve_trajectory(u0: GridFunction1D, p: KernelParams, dt: float, steps: int,
                      ) -> list[GridFunction1D]:
    """u0, U(dt)u0, U(dt)^2 u0, ...: repeated steps with one kernel matrix."""
    _check_1d(p)
    _check_time(dt)
    if steps < 0:
        raise DomainError("steps must be >= 0")
    m = evolution_matrix(u0.nodes, p, dt)
    out = [u0]
    v = np.asarray(u0.values, dtype=complex)
    for _ in range(steps):
        v = m @ v
        out.append(u0.with_values(v))
    return out


def symmetric_trajectory(u0: GridFunction1D, p: KernelParams, T: float, dt: float,
                         ) -> tuple[np.ndarray, list[GridFunction1D]]:
    """Frames on the uniform time grid -T, -T+dt, ..., T (T a multiple of dt)."""
    steps = int(round(T / dt))
    if steps < 1 or abs(steps * dt - T) > 1e-9 * T:
        raise DomainError(f"T={T} must be a positive multiple of dt={dt}")
    fwd = evolve_trajectory(u0, p, dt, steps)
    bwd = evolve_trajectory(u0, p, -dt, steps)
    frames = bwd[:0:-1] + fwd
    times = dt * np.arange(-steps, steps + 1)
    return times, frames


def mixed_norm(frames: Sequence[GridFunction1D], times, p: float, q: float,
               weighted: bool = True) -> float:
    """Discrete L^p_t L^q_x norm on a uniform time grid (trapezoid in t)."""
    if len(frames) == 0:
        raise DomainError("mixed_norm needs at least one frame")
    times = np.asarray(times, dtype=float)
    if times.size != len(frames):
        raise DomainError("one time per frame is required")
    if not (p >= 2.0 and q >= 2.0):
        raise DomainError(f"need p, q in [2, inf], got {(p, q)}")
    inner = []
    for f in frames:
        if weighted:
            inner.append(f.norm(q))
        else:
            u = np.abs(f.values)
            inner.append(float(u.max()) if math.isinf(q)
                         else float(np.sum(u ** q * f.quad_weights) ** (1.0 / q)))
    inner = np.asarray(inner)
    if math.isinf(p):
        return float(inner.max())
    if times.size == 1:
        raise DomainError("finite p needs at least two time samples")
    dts = np.diff(times)
    if np.ptp(dts) > 1e-9 * abs(dts[0]):
        raise DomainError("time grid must be uniform")
    w = np.full(times.size, abs(dts[0]))
    w[0] *= 0.5
    w[-1] *= 0.5
    return float(np.sum(w * inner ** p) ** (1.0 / p))


def admissible_pairs(sigma: float, count: int) -> list[tuple[float, float]]:
    """Pairs with 1/p + sigma/q = sigma/2, p, q in [2, inf], excluding (2, inf, 1).

    Sampled uniformly in 1/q from the endpoint (inf, 2) to q_end, which is
    2 sigma/(sigma-1) for sigma > 1 and inf otherwise.
    """
    if not sigma > 0.0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    if count < 2:
        raise DomainError("count must be >= 2")
    inv_end = 0.5 - 0.5 / sigma if sigma > 1.0 else 0.0
    pairs = []
    for iq in np.linspace(0.5, inv_end, count):
        q = math.inf if iq == 0.0 else 1.0 / iq
        ip = sigma * (0.5 - iq)
        p = math.inf if ip <= 0.0 else 1.0 / ip
        if sigma > 1.0 and iq == inv_end:
            p = 2.0
        if p == 2.0 and math.isinf(q) and sigma == 1.0:
            continue
        pairs.append((p, q))
    return pairs


def write_evolution(frames: Sequence[GridFunction1D], times, p: KernelParams, directory,
                    stem: str = "evolve") -> str:
    """One CSV per frame plus a JSON manifest with parameters and norms."""
    os.makedirs(directory, exist_ok=True)
    entries = []
    for i, (t, f) in enumerate(zip(times, frames)):
        name = f"{stem}-{i:04d}.csv"
        f.to_csv(os.path.join(directory, name))
        entries.append({"index": i, "t": float(t), "file": name, "l2_norm": f.norm(2.0)})
    manifest = {"params": asdict(p), "sigma": p.sigma, "weight_exponent": p.weight_exponent,
                "nodes": int(frames[0].nodes.size) if frames else 0, "frames": entries}
    path = os.path.join(directory, f"{stem}-manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


__all__ = [
    "AliasingWarning", "GridFunction1D", "GroupLawReport", "KernelParams", "admissible_pairs",
    "apply_kernel", "evolution_matrix", "group_law_check",
    "evolve_1d", "evolve_trajectory", "free_kernel_1d", "grid_function", "ground_state",
    "kernel_1d", "kernel_radial_k0", "mixed_norm", "sigma_ka", "sinh_grid",
    "symmetric_trajectory", "unitary_normalization", "write_evolution",
]
