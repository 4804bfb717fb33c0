"""Oscillatory integrals I(lam) = int gamma(x) exp(i lam f(x)) dx and discrete
oscillatory sums.

The quadrature is adaptive Gauss-Legendre.  Initial panels are laid out so
that every panel holds at least ten nodes per local oscillation period
2 pi / (lam |f'|); a panel is accepted once its one-panel and two-half-panel
values agree to its share of the tolerance.  Amplitude and phase callables
must accept numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels as _k
from .cutoffs import flat_bump, flat_bump_deriv, step_up, window, window_deriv
from .errors import DomainError
from .specfun import ValueWithError

ORDER = 16
POINTS_PER_PERIOD = 10.0
DEFAULT_BUDGET = 2 ** 20
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)


@dataclass(frozen=True)
class PhaseAmplitudeSpec:
    amplitude: Callable[[np.ndarray], np.ndarray]
    phase: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]
    singular_points: tuple[float, ...] = ()
    dphase: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        lo, hi = self.support
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"support must be a finite interval, got {self.support}")
        for s in self.singular_points:
            if not lo <= s <= hi:
                raise DomainError(f"singular point {s} outside support {self.support}")

    def phase_derivative(self, x: np.ndarray) -> np.ndarray:
        if self.dphase is not None:
            return np.asarray(self.dphase(x), dtype=float)
        return finite_difference(self.phase, x)


@dataclass(frozen=True)
class DecayFit:
    lambdas: np.ndarray
    magnitudes: np.ndarray
    fitted_exponent: float
    residual: float
    converged: bool = True
    extra: dict = field(default_factory=dict)


def finite_difference(f: Callable, x) -> np.ndarray:
    """Five-point central difference with step max(1e-5, |x| 1e-7)."""
    x = np.asarray(x, dtype=float)
    h = np.maximum(1e-5, np.abs(x) * 1e-7)
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def _breakpoints(spec: PhaseAmplitudeSpec) -> np.ndarray:
    lo, hi = spec.support
    pts = np.unique(np.array([lo, hi, *spec.singular_points], dtype=float))
    return pts


def _segment_edges(spec: PhaseAmplitudeSpec, lam: float, c: float, d: float,
                   graded_lo: bool, graded_hi: bool) -> np.ndarray:
    xs = np.linspace(c, d, 513)
    omega = lam * np.abs(spec.phase_derivative(xs))
    # panels per unit length: oscillation demand, with a floor of four per segment
    dens = np.maximum(POINTS_PER_PERIOD * omega / (2 * math.pi) / ORDER, 4.0 / (d - c))
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(xs))])
    npan = max(int(math.ceil(cum[-1])), 1)
    edges = np.interp(np.linspace(0.0, cum[-1], npan + 1), cum, xs)
    edges[0], edges[-1] = c, d
    extra = []
    # geometric grading towards points where the amplitude is not smooth
    if graded_lo:
        w = edges[1] - c
        extra += [c + w * 2.0 ** -k for k in range(1, 30)]
    if graded_hi:
        w = d - edges[-2]
        extra += [d - w * 2.0 ** -k for k in range(1, 30)]
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    return edges


def _initial_edges(spec: PhaseAmplitudeSpec, lam: float) -> np.ndarray:
    pts = _breakpoints(spec)
    sing = set(float(s) for s in spec.singular_points)
    parts = []
    for c, d in zip(pts[:-1], pts[1:]):
        parts.append(_segment_edges(spec, lam, c, d, c in sing, d in sing))
    return np.unique(np.concatenate(parts))


def _panel_values(spec: PhaseAmplitudeSpec, lam: float, a: np.ndarray, b: np.ndarray):
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * _NODES[None, :]
    ph = lam * np.asarray(spec.phase(x), dtype=float)
    f = np.asarray(spec.amplitude(x)) * np.exp(1j * ph)
    # rounding scale: |f| times (1 + |lam f|), the latter from the phase itself
    return half * (f @ _WEIGHTS), half * ((np.abs(f) * (1.0 + np.abs(ph))) @ _WEIGHTS)


def _csum(z: np.ndarray) -> complex:
    return complex(math.fsum(np.real(z)), math.fsum(np.imag(z)))


def oscillatory_integral(spec: PhaseAmplitudeSpec, lam: float, *, abs_tol: float = 1e-13,
                         rel_tol: float = 1e-10, budget: int = DEFAULT_BUDGET) -> ValueWithError:
    """Adaptive panel quadrature of int gamma exp(i lam f) over spec.support."""
    if not (lam >= 1.0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be >= 1, got {lam}")
    edges = _initial_edges(spec, float(lam))
    a, b = edges[:-1], edges[1:]
    length = spec.support[1] - spec.support[0]
    full, _ = _panel_values(spec, lam, a, b)
    evals = ORDER * a.size
    acc_val: list[np.ndarray] = []
    acc_err: list[np.ndarray] = []
    converged = True
    while a.size:
        mid = 0.5 * (a + b)
        left, lmag = _panel_values(spec, lam, a, mid)
        right, rmag = _panel_values(spec, lam, mid, b)
        evals += 2 * ORDER * a.size
        fine = left + right
        # differences at the rounding level of the panel cannot be refined away
        err = np.maximum(np.abs(fine - full), 4 * ORDER * _k.EPS * (lmag + rmag))
        total = _csum(np.concatenate(acc_val + [fine]))
        tol = max(abs_tol, rel_tol * abs(total))
        spent = math.fsum(np.concatenate(acc_err + [err]))
        if spent <= tol:
            acc_val.append(fine)
            acc_err.append(err)
            break
        bad = ((err > tol * (b - a) / length) & (b - a > 1e-15 * length)
               & (np.abs(fine - full) > 4 * ORDER * _k.EPS * (lmag + rmag)))
        acc_val.append(fine[~bad])
        acc_err.append(err[~bad])
        if not np.any(bad):
            break
        if evals + 4 * ORDER * int(bad.sum()) > budget:
            acc_val.append(fine[bad])
            acc_err.append(err[bad])
            converged = False
            break
        a, b, mid = a[bad], b[bad], mid[bad]
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        full = np.concatenate([left[bad], right[bad]])
    value = _csum(np.concatenate(acc_val))
    error = math.fsum(np.concatenate(acc_err)) + 8 * _k.EPS * abs(value)
    return ValueWithError(value, error, converged)


# -- decay fits -------------------------------------------------------------

def decay_exponent_fit(points: Sequence[tuple[float, float]]) -> DecayFit:
    """Least-squares slope of log|I| against log lam."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 6:
        raise DomainError("decay fit needs at least 6 (lambda, |I|) points")
    arr = arr[np.argsort(arr[:, 0])]
    lam, mag = arr[:, 0], np.abs(arr[:, 1])
    if np.any(lam <= 0.0) or np.any(np.diff(lam) <= 0.0):
        raise DomainError("lambdas must be positive and distinct")
    if lam[-1] / lam[0] < 100.0 * (1.0 - 1e-12):
        raise DomainError("lambdas must span at least two decades")
    if np.all(mag < 1e-300):
        raise DomainError("degenerate fit: all magnitudes below 1e-300")
    if np.any(mag <= 0.0):
        raise DomainError("magnitudes must be > 0")
    slope, resid = _loglog_slope(lam, mag)
    return DecayFit(lam, mag, slope, resid)


def _loglog_slope(lam: np.ndarray, mag: np.ndarray) -> tuple[float, float]:
    x, y = np.log(lam), np.log(mag)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    r = y - A @ coef
    return float(coef[0]), float(math.sqrt(np.mean(r * r)))


# -- Poisson identity -------------------------------------------------------

@dataclass(frozen=True)
class PoissonFamily:
    """A compactly supported zeta and a real phase S, each with derivative."""
    name: str
    zeta: Callable[[np.ndarray], np.ndarray]
    dzeta: Callable[[np.ndarray], np.ndarray]
    S: Callable[[np.ndarray], np.ndarray]
    dS: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]


def default_poisson_families() -> list[PoissonFamily]:
    gauss = lambda m: np.exp(-(np.asarray(m) / 8.0) ** 2)
    dgauss = lambda m: -2.0 * np.asarray(m) / 64.0 * gauss(m)
    return [
        PoissonFamily(
            "gaussian_quadratic",
            lambda m: gauss(m) * flat_bump(m, 20.0, 30.0),
            lambda m: dgauss(m) * flat_bump(m, 20.0, 30.0) + gauss(m) * flat_bump_deriv(m, 20.0, 30.0),
            lambda m: 0.3 * np.asarray(m) ** 2,
            lambda m: 0.6 * np.asarray(m),
            (-30.0, 30.0)),
        PoissonFamily(
            "window_linear",
            lambda m: window(m, 10.0, 60.0, 10.0),
            lambda m: window_deriv(m, 10.0, 60.0, 10.0),
            lambda m: 0.7 * np.asarray(m, dtype=float),
            lambda m: np.full_like(np.asarray(m, dtype=float), 0.7),
            (10.0, 60.0)),
        PoissonFamily(
            "bump_zero_phase",
            lambda m: flat_bump(np.asarray(m) - 5.0, 6.0, 14.0),
            lambda m: flat_bump_deriv(np.asarray(m) - 5.0, 6.0, 14.0),
            lambda m: np.zeros_like(np.asarray(m, dtype=float)),
            lambda m: np.zeros_like(np.asarray(m, dtype=float)),
            (-9.0, 19.0)),
    ]


@dataclass(frozen=True)
class PoissonReport:
    residual: float
    lhs: complex
    rhs: complex
    quadrature_error: float
    last_term: float
    converged: bool


def poisson_identity_report(fam: PoissonFamily, q_max: int) -> PoissonReport:
    if q_max < 1:
        raise DomainError("q_max must be >= 1")
    lo, hi = fam.support
    m = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=float)
    lhs = _csum(np.exp(1j * fam.S(m)) * fam.zeta(m))
    base = oscillatory_integral(PhaseAmplitudeSpec(fam.zeta, fam.S, fam.support, dphase=fam.dS), 1.0)
    ztil = lambda x: fam.dzeta(x) + 1j * fam.dS(x) * fam.zeta(x)
    terms, errs, conv = [base.value], [base.abs_error], base.converged
    last = 0.0
    for q in range(1, q_max + 1):
        for s in (q, -q):
            phase = lambda x, s=s: fam.S(x) + 2 * math.pi * s * x
            dphase = lambda x, s=s: fam.dS(x) + 2 * math.pi * s
            r = oscillatory_integral(PhaseAmplitudeSpec(ztil, phase, fam.support, dphase=dphase), 1.0)
            t = -r.value / (2j * math.pi * s)
            terms.append(t)
            errs.append(r.abs_error / (2 * math.pi * q))
            conv = conv and r.converged
            if q == q_max:
                last = max(last, abs(t))
    rhs = _csum(np.array(terms))
    return PoissonReport(abs(lhs - rhs), lhs, rhs, math.fsum(errs), last, conv)


def poisson_identity_residual(fam: PoissonFamily, q_max: int = 60) -> float:
    """|sum_m e^{iS(m)} zeta(m) - RHS truncated at |q| <= q_max|."""
    return poisson_identity_report(fam, q_max).residual


# -- stationary phase suites --------------------------------------------------

@dataclass(frozen=True)
class SuiteParams:
    nu: float = 0.5
    j: int = 0
    k: int = 2
    mu: float = 0.5
    variant: str = "i"
    lambdas: tuple[float, ...] | None = None
    phis: tuple[float, ...] | None = None


def default_lambdas() -> np.ndarray:
    return 8.0 * 2.0 ** np.arange(12)


def predicted_exponent(case: str, p: SuiteParams) -> float:
    if case == "a":
        return -p.mu - 1.0
    if case == "b":
        return -(p.j + 1.0) / p.k
    if case == "c":
        return -0.5
    if case == "d":
        return -p.nu - 0.5
    raise DomainError(f"unknown case {case!r}")


def _bump(x):
    return flat_bump(x, 0.5, 1.5)


def _suite_spec(case: str, p: SuiteParams) -> PhaseAmplitudeSpec:
    if case == "a":
        return PhaseAmplitudeSpec(lambda x: np.abs(x) ** p.mu * flat_bump(x, 0.5, 1.5),
                                  lambda x: np.asarray(x, dtype=float), (0.0, 1.5), (0.0,),
                                  dphase=lambda x: np.ones_like(np.asarray(x, dtype=float)))
    if case == "b":
        k, j = p.k, p.j
        return PhaseAmplitudeSpec(lambda x: np.asarray(x, dtype=float) ** j * _bump(x),
                                  lambda x: np.asarray(x, dtype=float) ** k, (-1.5, 1.5),
                                  dphase=lambda x: k * np.asarray(x, dtype=float) ** (k - 1))
    if case == "c":
        if p.variant == "i":
            return PhaseAmplitudeSpec(_bump, lambda x: np.asarray(x, dtype=float) ** 2, (-1.5, 1.5),
                                      dphase=lambda x: 2 * np.asarray(x, dtype=float))
        if p.variant == "ii":
            return PhaseAmplitudeSpec(lambda x: np.sqrt(np.abs(x)) * _bump(x),
                                      lambda x: np.asarray(x, dtype=float) ** 3, (-1.5, 1.5), (0.0,),
                                      dphase=lambda x: 3 * np.asarray(x, dtype=float) ** 2)
        raise DomainError(f"case c variant must be 'i' or 'ii', got {p.variant!r}")
    raise DomainError(f"unknown case {case!r}")


def model_prop_spec(nu: float, lam: float, phi: float) -> PhaseAmplitudeSpec:
    """S(mu, phi) = (mu - phi)^2 with amplitude mu^{2nu} (1 + lam phi mu)^{-nu} bump(mu)."""
    def amp(mu):
        mu = np.asarray(mu, dtype=float)
        return mu ** (2 * nu) * (1.0 + lam * phi * mu) ** (-nu) * (1.0 - step_up(mu, 0.6, 0.95))
    return PhaseAmplitudeSpec(amp, lambda mu: (np.asarray(mu, dtype=float) - phi) ** 2, (0.0, 1.0),
                              (0.0,), dphase=lambda mu: 2 * (np.asarray(mu, dtype=float) - phi))


def model_prop_phis(lam: float) -> np.ndarray:
    scaled = np.geomspace(0.1, 4.0, 12) / math.sqrt(lam)
    return np.unique(np.concatenate([np.linspace(0.0, 1.0, 41), scaled[scaled <= 1.0]]))


def stationary_phase_suite(case: str, params: SuiteParams | None = None) -> DecayFit:
    """Evaluate one model integral over a geometric lambda grid and fit its decay.

    Cases: 'a' singular amplitude with linear phase, 'b' phase x^k with
    amplitude x^j, 'c' non-degenerate ('i') or cubic ('ii') critical point,
    'd' the moving critical point model with the sup over phi recorded.
    """
    p = params or SuiteParams()
    if case == "d":
        return _suite_d(p)
    lams = np.asarray(p.lambdas if p.lambdas is not None else default_lambdas(), dtype=float)
    spec = _suite_spec(case, p)
    mags, conv = [], True
    for lam in lams:
        r = oscillatory_integral(spec, float(lam))
        mags.append(abs(r.value))
        conv = conv and r.converged
    fit = decay_exponent_fit(list(zip(lams, mags)))
    return DecayFit(fit.lambdas, fit.magnitudes, fit.fitted_exponent, fit.residual, conv,
                    {"predicted": predicted_exponent(case, p)})


def _suite_d(p: SuiteParams) -> DecayFit:
    lams = np.asarray(p.lambdas if p.lambdas is not None else np.geomspace(10.0, 1e4, 13), dtype=float)
    sups, conv = [], True
    for lam in lams:
        phis = np.asarray(p.phis, dtype=float) if p.phis is not None else model_prop_phis(lam)
        best = 0.0
        for phi in phis:
            r = oscillatory_integral(model_prop_spec(p.nu, float(lam), float(phi)), float(lam))
            best = max(best, abs(r.value))
            conv = conv and r.converged
        sups.append(best)
    sups = np.asarray(sups)
    scaled = sups * lams ** (p.nu + 0.5)
    top = lams >= lams[-1] / 10.0 * (1.0 - 1e-12)
    drift = float(np.max(scaled[top]) / scaled[top][0] - 1.0)
    fit = decay_exponent_fit(list(zip(lams, sups)))
    return DecayFit(fit.lambdas, fit.magnitudes, fit.fitted_exponent, fit.residual, conv,
                    {"predicted": predicted_exponent("d", p), "scaled_sup": scaled,
                     "top_decade_drift": drift})


# -- discrete non-stationary sums --------------------------------------------

@dataclass(frozen=True)
class NonstationaryTable:
    rows: list[dict]
    applicable: bool
    min_distance: float
    decays: bool


def _dist_to_lattice(v: np.ndarray) -> np.ndarray:
    two_pi = 2 * math.pi
    return np.abs(v - two_pi * np.round(v / two_pi))


def discrete_nonstationary_check(zeta: Callable[[np.ndarray, float], np.ndarray],
                                 S: Callable[[np.ndarray, float], np.ndarray],
                                 r: float, rho: float, k: float,
                                 Ms: Sequence[float] = tuple(2.0 ** np.arange(5, 13)),
                                 support: Callable[[float], tuple[float, float]] = lambda M: (-M, M),
                                 Ns: Sequence[int] = (2, 4, 8)) -> NonstationaryTable:
    """Direct sums sum_m e^{iS(m)} zeta(m) against C_N M^{k+1} (1 + r M^rho)^{-N}.

    zeta(m, M) and S(m, M) are vectorised in m.  The constants C_N are taken
    from the smallest M whose sum sits above the rounding floor; the sums
    decay superpolynomially when every later row stays under its bound or
    under the floor.  Applicability requires dist(S', 2 pi Z) >= r on the
    support.
    """
    rows = []
    dmin = math.inf
    for M in Ms:
        lo, hi = support(M)
        m = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=float)
        z = np.asarray(zeta(m, M), dtype=complex)
        sp = finite_difference(lambda x: S(x, M), m)
        dmin = min(dmin, float(np.min(_dist_to_lattice(sp[np.abs(z) > 0]))) if np.any(z != 0) else math.inf)
        val = abs(_csum(np.exp(1j * S(m, M)) * z))
        floor = 64 * _k.EPS * float(np.sum(np.abs(z))) + 1e-300
        row = {"M": float(M), "abs_sum": val, "floor": floor}
        for N in Ns:
            row[f"bound_N{N}"] = M ** (k + 1) * (1.0 + r * M ** rho) ** (-N)
        rows.append(row)
    applicable = r > 0 and dmin >= r * (1.0 - 1e-9)
    decays = True
    for N in Ns:
        key = f"bound_N{N}"
        c = None
        for row in rows:
            if row["abs_sum"] <= row["floor"]:
                continue
            if c is None:
                c = row["abs_sum"] / row[key]
            elif row["abs_sum"] > 1.5 * c * row[key]:
                decays = False
        for row in rows:
            row[f"C_N{N}"] = c if c is not None else 0.0
    return NonstationaryTable(rows, applicable, dmin, decays)
