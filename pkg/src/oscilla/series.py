"""The series S(b, nu; -iy; cos phi) on the imaginary axis.

J-form (y > 0):

    S = L_{b,nu} y^{-b nu} sum_m exp(-i pi b m / 2) J_{b(m+nu)}(y) w_m(nu, phi),
    L_{b,nu} = Gamma(b nu + 1) 2^{b nu},   w_m = (m+nu) nu^{-1} C_m^nu(cos phi).

The I-tilde form (the defining power series) is evaluated independently by
:func:`script_i_small_y` and serves as a cross-check for moderate |y|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from . import _kernels as _k
from .errors import DomainError
from .specfun import bessel_j_ladder

CutoffReason = Literal["tail_bound", "turning_point_margin", "tol_plateau"]

SMALL_RUN = 30
TURNING_MARGIN = 6.0
SMALL_Y_SWITCH = 0.25
_LN2 = math.log(2.0)
_J_REL_ERR = 1e-14
_J_FLOOR = 1e-15


@dataclass(frozen=True)
class SeriesParams:
    b: float
    nu: float
    y: float
    phi: float
    tol: float = 1e-8

    def __post_init__(self):
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise DomainError(f"b must be > 0, got {self.b}")
        if not (math.isfinite(self.nu) and self.nu >= 0.0):
            raise DomainError(f"nu must be >= 0, got {self.nu}")
        if not math.isfinite(self.y):
            raise DomainError(f"y must be finite, got {self.y}")
        if not (-1e-12 <= self.phi <= math.pi + 1e-12):
            raise DomainError(f"phi must lie in [0, pi], got {self.phi}")
        if not (self.tol > 0.0):
            raise DomainError(f"tol must be > 0, got {self.tol}")

    @property
    def log_l(self) -> float:
        bn = self.b * self.nu
        return math.lgamma(bn + 1.0) + bn * math.log(2.0)

    @property
    def l_bnu(self) -> float:
        return math.exp(self.log_l)


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    abs_error: float
    terms_used: int
    m_cutoff_reason: CutoffReason
    converged: bool = True


def quarter_turns(b: float, m: np.ndarray) -> np.ndarray:
    """b*m mod 4, exact when b is a small-denominator rational."""
    m = np.asarray(m, dtype=np.int64)
    fr = Fraction(b).limit_denominator(1000)
    if abs(float(fr) - b) <= 4.0 * _k.EPS * b:
        num, den = fr.numerator, fr.denominator
        r = np.mod(num * m, 4 * den)
        return r / den
    prod = np.longdouble(b) * m.astype(np.longdouble)
    return np.asarray(np.mod(prod, np.longdouble(4.0)), dtype=float)


def phase_factors(b: float, m_max: int, sign: int = -1) -> np.ndarray:
    """exp(sign * i pi b m / 2) for m = 0..m_max."""
    r = quarter_turns(b, np.arange(m_max + 1))
    return np.exp(sign * 0.5j * math.pi * r)


def _log_prefactor(b: float, nu: float, y: float) -> float:
    bn = b * nu
    return math.lgamma(bn + 1.0) + bn * math.log(2.0) - bn * math.log(y)


def script_i_grid(b: float, nu: float, y: float, phis, tol: float = 1e-8):
    """Evaluate S(b, nu; -iy; cos phi) for many phi sharing one Bessel ladder.

    Returns ``(values, abs_errors, terms_used, converged)`` arrays.  Negative
    y uses the reflection S(-y) = conj(S(y)) of the defining power series.
    """
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    if b <= 0.0 or nu < 0.0:
        raise DomainError(f"need b > 0 and nu >= 0, got b={b}, nu={nu}")
    if np.any(phis < -1e-12) or np.any(phis > math.pi + 1e-12):
        raise DomainError("phi must lie in [0, pi]")
    n = phis.size
    if y == 0.0:
        return (np.ones(n, dtype=complex), np.zeros(n), np.ones(n, dtype=np.int64),
                np.ones(n, dtype=bool))
    ay = abs(float(y))
    if ay < SMALL_Y_SWITCH:
        # y^{-b nu} J_{b nu}(y) under/overflows separately here; the power series does not
        rs = [script_i_small_y(SeriesParams(b, nu, float(y), float(min(max(f, 0.0), math.pi)), tol))
              for f in phis]
        return (np.array([r.value for r in rs]), np.array([r.abs_error for r in rs]),
                np.array([r.terms_used for r in rs], dtype=np.int64),
                np.array([r.converged for r in rs], dtype=bool))
    sign = -1 if y > 0.0 else 1
    pref = math.exp(_log_prefactor(b, nu, ay))
    m_turn = max(0, int(math.ceil((ay + TURNING_MARGIN * ay ** (1.0 / 3.0)) / b - nu)))
    budget = int(10.0 * ay / b) + 2000
    m_max = min(m_turn + 2 * SMALL_RUN, budget)
    t = np.ascontiguousarray(np.cos(np.clip(phis, 0.0, math.pi)))
    small = tol / 100.0
    while True:
        jl = bessel_j_ladder(b, nu, ay, m_max)
        coef = phase_factors(b, m_max, sign) * jl
        re, im, used, stopped, big = _k.series_accumulate(
            np.ascontiguousarray(coef.real), np.ascontiguousarray(coef.imag),
            float(nu), t, pref, small, m_turn, SMALL_RUN)
        if np.all(stopped) or m_max >= budget:
            break
        m_max = min(2 * m_max, budget)
    values = pref * (re + 1j * im)
    u_top = int(used.max())
    wabs = np.abs(_k.gegen_weights(u_top - 1, float(nu), t))
    ajl = np.abs(jl[:u_top])
    # ladder values carry a relative error plus a floor tied to the anchor scale
    jerr = _J_REL_ERR * ajl + _J_FLOOR * float(ajl.max())
    keep = np.arange(u_top)[None, :] < used[:, None]
    errs = (16.0 * _k.EPS * used * big + pref * np.sum(np.where(keep, wabs * jerr, 0.0), axis=1)
            + SMALL_RUN * small)
    converged = stopped & (errs <= max(tol, 1e-15))
    return values, errs, used, converged


def _result_from_grid(values, errs, used, conv) -> SeriesResult:
    ok = bool(conv[0])
    return SeriesResult(complex(values[0]), float(errs[0]), int(used[0]),
                        "turning_point_margin" if ok else "tol_plateau", ok)


def script_i(p: SeriesParams) -> SeriesResult:
    """S(b, nu; -iy; cos phi) for y >= 0 by the J-form."""
    if p.y < 0.0:
        raise DomainError("script_i needs y >= 0; use script_i_negative_y")
    if p.y == 0.0:
        return SeriesResult(1.0 + 0.0j, 0.0, 1, "tail_bound", True)
    return _result_from_grid(*script_i_grid(p.b, p.nu, p.y, [p.phi], p.tol))


def script_i_negative_y(p: SeriesParams) -> SeriesResult:
    """S(b, nu; i|y|; cos phi) for y < 0 via the reflected J-form with |y|.

    The phase sum runs with exp(+i pi b m / 2); no extra global factor is
    applied, so the value is the complex conjugate of the y > 0 value.
    """
    if p.y > 0.0:
        raise DomainError("script_i_negative_y needs y < 0")
    if p.y == 0.0:
        return SeriesResult(1.0 + 0.0j, 0.0, 1, "tail_bound", True)
    return _result_from_grid(*script_i_grid(p.b, p.nu, p.y, [p.phi], p.tol))


def evaluate(p: SeriesParams) -> SeriesResult:
    """Dispatch on the sign of y."""
    return script_i(p) if p.y >= 0.0 else script_i_negative_y(p)


def _tail_majorant(b: float, nu: float, ay: float, m_from: int) -> float:
    """Gamma(b nu+1) sum_{m >= m_from} (|y|/2)^{bm} sup|w_m| / Gamma(b(m+nu)+1).

    Uses |I~_lam(-iy)| <= 1/Gamma(lam+1) and sup_t |C_m^nu(t)| = C_m^nu(1).
    """
    if ay == 0.0:
        return 0.0
    lg0 = math.lgamma(b * nu + 1.0)
    total = 0.0
    m = m_from
    peak = -math.inf
    while True:
        if nu == 0.0:
            lw = math.log(2.0)
        else:
            lw = (math.log(m + nu) - math.log(nu) + math.lgamma(m + 2.0 * nu)
                  - math.lgamma(m + 1.0) - math.lgamma(2.0 * nu))
        lt = lg0 + b * m * (math.log(ay) - _LN2) - math.lgamma(b * (m + nu) + 1.0) + lw
        peak = max(peak, lt)
        total += math.exp(lt)
        if b * m > ay and lt < peak - 40.0:
            break
        m += 1
        if m > m_from + 100000:
            break
    return total


def small_y_terms_needed(b: float, nu: float, y: float, tol: float) -> int:
    ay = abs(y)
    m = max(1, int(ay / b))
    while _tail_majorant(b, nu, ay, m + 1) > tol / 10.0:
        m = int(m * 1.25) + 1
    return m


def script_i_small_y(p: SeriesParams, m_max: int | None = None) -> SeriesResult:
    """Partial sum of the defining I-tilde power series plus a tail majorant.

    I-tilde_lam(-iy) is summed from its own power series, so this route never
    touches the Bessel J code.
    """
    ay = abs(p.y)
    if ay > 20.0:
        raise DomainError(f"script_i_small_y is meant for |y| <= 20, got {p.y}")
    if p.y == 0.0:
        return SeriesResult(1.0 + 0.0j, 0.0, 1, "tail_bound", True)
    if m_max is None:
        m_max = small_y_terms_needed(p.b, p.nu, ay, p.tol)
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    m = np.arange(m_max + 1)
    lam = p.b * (m + p.nu)
    # normalised series Gamma(lam+1) I~_lam(-iy), combined with the powers in log space
    norm = _itilde_normalized(lam, ay)
    logmag = (math.lgamma(p.b * p.nu + 1.0) + p.b * m * (math.log(ay) - _LN2)
              - _lgamma_arr(lam + 1.0))
    sign = -1 if p.y > 0.0 else 1
    w = _k.gegen_weights(int(m_max), float(p.nu), np.array([math.cos(p.phi)]))[0]
    terms = phase_factors(p.b, int(m_max), sign) * np.exp(logmag) * norm * w
    value = complex(_k.neumaier(np.ascontiguousarray(terms.real)),
                    _k.neumaier(np.ascontiguousarray(terms.imag)))
    tail = _tail_majorant(p.b, p.nu, ay, int(m_max) + 1)
    rounding = 64.0 * _k.EPS * math.exp(ay) * float(np.sum(np.abs(terms)))
    err = tail + rounding
    return SeriesResult(value, err, int(m_max) + 1, "tail_bound", tail <= p.tol)


def _itilde_normalized(lam: np.ndarray, ay: float) -> np.ndarray:
    """Gamma(lam+1) I~_lam(-iy) = sum_k prod_{j<=k} (-y^2/4) / (j (j+lam))."""
    t = np.ones_like(lam)
    s = np.ones_like(lam)
    q = -0.25 * ay * ay
    for k in range(1, int(ay) + 80):
        t = t * q / (k * (k + lam))
        s = s + t
        if np.all(np.abs(t) <= 1e-18 * np.maximum(np.abs(s), 1e-300)):
            break
    return s


def _lgamma_arr(x):
    from scipy.special import gammaln

    return gammaln(x)
