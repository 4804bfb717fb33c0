"""Special functions: Gamma, real-order Bessel J, normalised I-Bessel on the
imaginary axis, scaled Gegenbauer polynomials, the phase h1 and F_{nu,1}.

Bessel J uses the power series below argument 8 and Schlafli's integral

    J_mu(y) = (1/pi) int_0^pi cos(y sin w - mu w) dw
              - (sin(pi mu)/pi) int_0^inf exp(-y sinh w - mu w) dw

above it.  Far beyond the validated range (y >= 400 with mu^2 <= y/4) the
automatic dispatch switches to the Hankel expansion so that kernel grids with
huge arguments stay cheap.
"""
from __future__ import annotations

import hashlib
import math
import os
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import gammaln, roots_jacobi

from . import _kernels as _k
from .errors import ConvergenceWarning, DomainError

Method = Literal["auto", "series", "schlafli", "ladder"]
_METHOD_CODES = {
    "auto": _k.METHOD_AUTO,
    "series": _k.METHOD_SERIES,
    "schlafli": _k.METHOD_SCHLAFLI,
}

BESSEL_TOL = 1e-10
CACHE_ENV = "OSCILLA_CACHE_DIR"


@dataclass(frozen=True)
class ValueWithError:
    value: complex
    abs_error: float
    converged: bool = True

    def __post_init__(self):
        if not (self.abs_error >= 0.0):
            raise DomainError(f"abs_error must be >= 0, got {self.abs_error}")


@dataclass(frozen=True)
class BesselQuery:
    order: float
    argument: float
    method_hint: Method = "auto"

    def __post_init__(self):
        if not math.isfinite(self.order) or self.order < 0.0:
            raise DomainError(f"Bessel order must be finite and >= 0, got {self.order}")
        if not math.isfinite(self.argument) or self.argument < 0.0:
            raise DomainError(f"Bessel argument must be finite and >= 0, got {self.argument}")
        if self.method_hint not in ("auto", "series", "schlafli", "ladder"):
            raise DomainError(f"unknown method_hint {self.method_hint!r}")


@dataclass(frozen=True)
class GegenbauerQuery:
    degree: int
    parameter: float
    angle: float

    def __post_init__(self):
        _check_gegenbauer_args(self.degree, self.parameter, self.angle)


def _check_gegenbauer_args(m, nu, phi) -> int:
    if isinstance(m, bool) or not float(m).is_integer() or m < 0:
        raise DomainError(f"Gegenbauer degree must be a nonnegative integer, got {m}")
    if not math.isfinite(nu) or nu < 0.0:
        raise DomainError(f"Gegenbauer parameter must be >= 0, got {nu}")
    if not (-1e-12 <= phi <= math.pi + 1e-12):
        raise DomainError(f"angle must lie in [0, pi], got {phi}")
    return int(m)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def log_gamma(x: float) -> float:
    """ln Gamma(x) for finite x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma needs finite x > 0, got {x}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# Bessel J
# ---------------------------------------------------------------------------

def bessel_j(q: BesselQuery | float, argument: float | None = None,
             method: Method = "auto") -> ValueWithError:
    """J_mu(y) with an absolute error estimate.

    Accepts a :class:`BesselQuery` or ``(order, argument)``.
    """
    if not isinstance(q, BesselQuery):
        q = BesselQuery(float(q), float(argument), method)
    mu, y = q.order, q.argument
    if q.method_hint == "ladder":
        return _bessel_via_ladder(mu, y)
    code = _METHOD_CODES[q.method_hint]
    uses_quadrature = y > 0.0 and (
        code == _k.METHOD_SCHLAFLI
        or (code == _k.METHOD_AUTO and y >= 8.0
            and not (y >= _k.HANKEL_MIN_ARG and mu * mu <= 0.25 * y))
    )
    if uses_quadrature:
        v1, e1 = _k.j_schlafli(mu, y, 1.0)
        v2, e2 = _k.j_schlafli(mu, y, 1.5)
        err = abs(v2 - v1) + max(e1, e2)
        return ValueWithError(complex(v2), err, err <= BESSEL_TOL)
    v, e = _k.j_eval(mu, y, code)
    return ValueWithError(complex(v), float(e), e <= BESSEL_TOL)


def bessel_j_values(order, y) -> np.ndarray:
    """Vectorised J_order(y) for order > -1 and y >= 0 (no error estimate).

    Negative orders are accepted here because the one-dimensional kernel
    needs the normalised I-Bessel function of order sigma - 1 >= -1/2.
    """
    order = np.asarray(order, dtype=float)
    y = np.asarray(y, dtype=float)
    order, y = np.broadcast_arrays(order, y)
    shape = y.shape
    mu = np.ascontiguousarray(order.ravel())
    yy = np.ascontiguousarray(y.ravel())
    if np.any(mu <= -1.0) or np.any(yy < 0.0):
        raise DomainError("bessel_j_values needs order > -1 and argument >= 0")
    vals, _ = _k.j_many(mu, yy, _k.METHOD_AUTO)
    return vals.reshape(shape)


FAST_HANKEL_MIN_ARG = 25.0


def bessel_j_fast(order, y) -> np.ndarray:
    """J_order(y) for many arguments, tuned for small orders.

    Points with y >= 25 and order^2 <= y/4 use the Hankel expansion when it
    certifies 1e-13; other points with y >= 1 and order < 8 use a backward
    recurrence per distinct order; the rest go to :func:`bessel_j_values`.
    """
    order = np.asarray(order, dtype=float)
    y = np.asarray(y, dtype=float)
    order, y = np.broadcast_arrays(order, y)
    shape = y.shape
    mu = np.ascontiguousarray(order.ravel())
    yy = np.ascontiguousarray(y.ravel())
    if np.any(mu <= -1.0) or np.any(yy < 0.0):
        raise DomainError("bessel_j_fast needs order > -1 and argument >= 0")
    out = np.empty_like(yy)
    done = np.zeros(yy.shape, dtype=bool)
    hank = (yy >= FAST_HANKEL_MIN_ARG) & (mu * mu <= 0.25 * yy)
    if np.any(hank):
        v, e = _k.j_many(np.ascontiguousarray(mu[hank]), np.ascontiguousarray(yy[hank]),
                         _k.METHOD_HANKEL)
        ok = e <= 1e-13
        idx = np.flatnonzero(hank)[ok]
        out[idx] = v[ok]
        done[idx] = True
    band = (~done) & (yy >= 1.0) & (mu < 8.0)
    for lam in np.unique(mu[band]):
        sel = band & (mu == lam)
        out[sel] = _miller_fixed_order(float(lam), yy[sel])
    done |= band
    if not np.all(done):
        out[~done] = bessel_j_values(mu[~done], yy[~done])
    return out.reshape(shape)


def _miller_fixed_order(lam: float, y: np.ndarray) -> np.ndarray:
    """J_lam(y) for one order and many y >= 1 by backward recurrence.

    With nu0 = lam - floor(lam) (in [0, 1)) the recurrence runs down the
    family nu0 + j and is normalised by Neumann's identity
    sum_k (nu0+2k) Gamma(nu0+k)/k! J_{nu0+2k}(y) = (y/2)^nu0.
    """
    y = np.asarray(y, dtype=float)
    base = math.floor(lam)
    nu0 = lam - base
    jt = int(base)  # target index; -1 when lam is in (-1, 0)
    n = int(y.max() + math.sqrt(40.0 * (y.max() + 10.0)) + 20.0) + max(jt, 0)
    n += n % 2
    nxt = np.zeros_like(y)
    cur = np.full_like(y, 1e-300)
    total = np.zeros_like(y)
    target = np.zeros_like(y)
    stop = min(jt, 0)
    # c_k = (nu0+2k) Gamma(nu0+k)/k!, with the k = 0 limit Gamma(nu0+1)
    for j in range(n, stop - 1, -1):
        # cur holds f_{nu0+j}
        if j == jt:
            target = cur.copy()
        if j >= 0 and j % 2 == 0:
            k = j // 2
            if k == 0:
                ck = math.exp(math.lgamma(nu0 + 1.0))
            else:
                ck = (nu0 + 2 * k) * math.exp(math.lgamma(nu0 + k) - math.lgamma(k + 1.0))
            total = total + ck * cur
        if j == stop:
            break
        prev = (2.0 * (nu0 + j) / y) * cur - nxt
        nxt, cur = cur, prev
        big = np.abs(cur) > 1e250
        if np.any(big):
            for arr in (cur, nxt, total, target):
                arr[big] *= 1e-250
    scale = np.exp(nu0 * np.log(0.5 * y)) / total
    return target * scale


def _bessel_via_ladder(mu: float, y: float) -> ValueWithError:
    if y == 0.0:
        return ValueWithError(complex(1.0 if mu == 0.0 else 0.0), 0.0, True)
    vals = _ladder_values(np.array([mu]), y)
    # error: anchor error carried through the normalisation plus recurrence noise
    return ValueWithError(complex(vals[0]), 1e-12 + 1e-13 * abs(vals[0]), True)


def _miller_start(top: float, y: float) -> int:
    base = max(top, y)
    return int(base + math.sqrt(40.0 * (base + 10.0)) + 20.0)


def _ladder_values(orders: np.ndarray, y: float) -> np.ndarray:
    orders = np.asarray(orders, dtype=float)
    if y == 0.0:
        return np.where(orders == 0.0, 1.0, 0.0)
    base = np.floor(orders)
    frac = orders - base
    wrap = frac > 1.0 - 1e-9
    base[wrap] += 1.0
    frac[wrap] = 0.0
    keys = np.round(frac, 9)
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    # representative offset taken from an actual member, not the rounded key
    groups = frac[first]
    if groups.size > max(8, orders.size // 2):
        return bessel_j_values(orders, np.full_like(orders, y))
    jidx = base.astype(np.int64)
    jmax = int(jidx.max())
    nstart = _miller_start(float(orders.max()), y)
    raw = _k.miller_many(np.ascontiguousarray(groups, dtype=float), jmax, y, nstart)
    out = np.empty_like(orders)
    for g, f in enumerate(groups):
        sel = inverse == g
        row = raw[g]
        anchor = int(np.argmax(np.abs(row)))
        direct, _ = _k.j_eval(float(f + anchor), y, _k.METHOD_AUTO)
        if abs(direct) < 1e-280 or row[anchor] == 0.0 or not np.all(np.isfinite(row)):
            out[sel] = bessel_j_values(orders[sel], np.full(sel.sum(), y))
            continue
        out[sel] = row[jidx[sel]] * (direct / row[anchor])
    return out


def bessel_j_ladder(b: float, nu: float, y: float, m_max: int) -> np.ndarray:
    """J_{b(m+nu)}(y) for m = 0..m_max by per-offset Miller ladders.

    If ``OSCILLA_CACHE_DIR`` is set, ladders are memoised on disk; cached
    arrays are the exact float64 results of the cache-free computation.
    """
    if b <= 0.0 or nu < 0.0 or y < 0.0 or m_max < 0:
        raise DomainError(f"bessel_j_ladder needs b>0, nu>=0, y>=0, m_max>=0; got {(b, nu, y, m_max)}")
    m_max = int(m_max)
    cache_dir = os.environ.get(CACHE_ENV)
    path = None
    if cache_dir:
        key = hashlib.sha256(repr((float(b), float(nu), float(y), m_max, "v1")).encode()).hexdigest()[:32]
        path = os.path.join(cache_dir, f"ladder-{key}.npy")
        if os.path.exists(path):
            try:
                return np.load(path)
            except (OSError, ValueError):
                pass
    orders = b * (np.arange(m_max + 1, dtype=float) + nu)
    vals = _ladder_values(orders, float(y))
    if path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        tmp = f"{path}.{os.getpid()}.tmp"
        with open(tmp, "wb") as fh:
            np.save(fh, vals)
        os.replace(tmp, path)
    return vals


# ---------------------------------------------------------------------------
# normalised I-Bessel on the imaginary axis
# ---------------------------------------------------------------------------

def _itilde_series(lam: np.ndarray, ay: np.ndarray) -> np.ndarray:
    # sum_k (-y^2/4)^k / (k! Gamma(k+lam+1)); entire in y, fine for small |y|
    t = np.exp(-gammaln(lam + 1.0))
    s = t.copy()
    q = -0.25 * ay * ay
    kmax = int(np.max(ay, initial=0.0)) + 60
    for k in range(1, kmax + 1):
        t = t * q / (k * (k + lam))
        s = s + t
        if np.all(np.abs(t) <= 1e-18 * np.maximum(np.abs(s), 1e-300)):
            break
    return s


def i_tilde_imag_values(lam, y) -> np.ndarray:
    """Vectorised real value of the normalised I-Bessel function at w = -iy.

    The function is even in y; lam > -1.
    """
    lam = np.asarray(lam, dtype=float)
    y = np.asarray(y, dtype=float)
    lam, y = np.broadcast_arrays(lam, y)
    ay = np.abs(y)
    out = np.empty(ay.shape)
    small = ay < 8.0
    if np.any(small):
        out[small] = _itilde_series(lam[small], ay[small])
    big = ~small
    if np.any(big):
        lb = lam[big]
        yb = ay[big]
        j = bessel_j_fast(lb, yb)
        with np.errstate(divide="ignore"):
            logmag = np.log(np.abs(j)) - lb * np.log(0.5 * yb)
        out[big] = np.sign(j) * np.exp(np.minimum(logmag, 700.0))
    return out


def i_bessel_normalized_imag(lam: float, y: float) -> complex:
    """I~_lam(-iy) = (|y|/2)^(-lam) J_lam(|y|), with 1/Gamma(lam+1) at y = 0."""
    lam = float(lam)
    y = float(y)
    if not math.isfinite(lam) or lam <= -1.0:
        raise DomainError(f"order must be > -1, got {lam}")
    if not math.isfinite(y):
        raise DomainError(f"argument must be finite, got {y}")
    if y == 0.0:
        return complex(math.exp(-math.lgamma(lam + 1.0)))
    val = float(i_tilde_imag_values(np.array([lam]), np.array([y]))[0])
    if lam >= -0.5 and abs(val) * math.exp(math.lgamma(lam + 1.0)) > 1.0 + 1e-9:
        raise ArithmeticError(f"|I~_{lam}(-i{y})| exceeds 1/Gamma(lam+1)")
    return complex(val)


# ---------------------------------------------------------------------------
# Gegenbauer
# ---------------------------------------------------------------------------

def gegenbauer_scaled(q: GegenbauerQuery | int, nu: float | None = None,
                      phi: float | None = None) -> float:
    """nu^{-1} C_m^nu(cos phi); for nu = 0 the limit 2 cos(m phi)/m.

    For (m, nu) = (0, 0) the value 1 is returned by convention, so that the
    series weight (m+nu) nu^{-1} C_m^nu, which tends to 1 there, is supplied by
    :func:`gegenbauer_weight` rather than by multiplying this value by m+nu.
    """
    if isinstance(q, GegenbauerQuery):
        m, nu, phi = q.degree, q.parameter, q.angle
    else:
        m = q
    m = _check_gegenbauer_args(m, nu, phi)
    phi = min(max(float(phi), 0.0), math.pi)
    if nu == 0.0:
        return 1.0 if m == 0 else 2.0 * math.cos(m * phi) / m
    w = _k.gegen_weights(m, float(nu), np.array([math.cos(phi)]))
    return float(w[0, m] / (m + nu))


def gegenbauer_weight(m: int, nu: float, phi: float) -> float:
    """(m+nu) nu^{-1} C_m^nu(cos phi), continuous down to nu = 0."""
    m = _check_gegenbauer_args(m, nu, phi)
    phi = min(max(float(phi), 0.0), math.pi)
    if nu == 0.0:
        return 1.0 if m == 0 else 2.0 * math.cos(m * phi)
    return float(_k.gegen_weights(m, float(nu), np.array([math.cos(phi)]))[0, m])


def gegenbauer_weight_table(m_max: int, nu: float, phis) -> np.ndarray:
    """Weights (m+nu) nu^{-1} C_m^nu(cos phi) for m = 0..m_max, one row per phi."""
    t = np.cos(np.atleast_1d(np.asarray(phis, dtype=float)))
    return _k.gegen_weights(int(m_max), float(nu), np.ascontiguousarray(t))


def _half_integral(m: int, nu: float, phi: float, n: int, sign: float) -> complex:
    # int_0^1 (cos phi + i sin phi * sign*u)^m (1-u^2)^(nu-1) du with
    # u = 1 - s^2: 2 int_0^1 g(1-s^2) (2-s^2)^(nu-1) s^(2nu-1) ds
    x, w = roots_jacobi(n, 0.0, 2.0 * nu - 1.0)
    s = 0.5 * (1.0 + x)
    u = 1.0 - s * s
    z = math.cos(phi) + 1j * math.sin(phi) * sign * u
    vals = z ** m * (2.0 - s * s) ** (nu - 1.0)
    return 2.0 * 2.0 ** (-2.0 * nu) * complex(np.sum(w * vals))


def gegenbauer_integral_oracle(m: int, nu: float, phi: float) -> float:
    """F_{nu,1}(m) int_{-1}^{1} (cos phi + i sin phi u)^m (1-u^2)^(nu-1) du.

    An independent route to nu^{-1} C_m^nu(cos phi).  The endpoint factor is
    removed by u = +-(1 - s^2) and the remaining s^(2nu-1) weight is handled by
    Gauss-Jacobi nodes, so the rule is exact up to the smooth (2-s^2) factor.
    """
    m = _check_gegenbauer_args(m, nu, phi)
    if m < 1 or nu <= 0.0:
        raise DomainError("gegenbauer_integral_oracle needs m >= 1 and nu > 0")
    n = m + 24
    est = []
    for nodes in (n, n + 16):
        total = _half_integral(m, nu, phi, nodes, 1.0) + _half_integral(m, nu, phi, nodes, -1.0)
        est.append(total.real)
    f = f_nu1(m, nu)
    diff = abs(est[1] - est[0]) * f
    if diff > 1e-9 * max(1.0, abs(est[1] * f)):
        warnings.warn(f"Gegenbauer integral oracle unsettled at m={m}, nu={nu}: {diff:.2e}",
                      ConvergenceWarning, stacklevel=2)
    return float(est[1] * f)


# ---------------------------------------------------------------------------
# phase and normalisation
# ---------------------------------------------------------------------------

def h1_phase(z):
    """h1(z) = sqrt(1 - z^2) - z arccos(z) on [0, 1]; accepts arrays."""
    za = np.asarray(z, dtype=float)
    if np.any(za < -1e-15) or np.any(za > 1.0 + 1e-15) or np.any(~np.isfinite(za)):
        raise DomainError("h1_phase needs 0 <= z <= 1")
    za = np.clip(za, 0.0, 1.0)
    out = np.sqrt(1.0 - za * za) - za * np.arccos(za)
    return float(out) if out.ndim == 0 else out


def log_f_nu1(m, nu):
    m = np.asarray(m, dtype=float)
    return (-math.log(nu) + math.lgamma(nu + 0.5) - 0.5 * math.log(math.pi) - math.lgamma(nu)
            + gammaln(m + 2.0 * nu) - gammaln(m + 1.0) - math.lgamma(2.0 * nu))


def f_nu1(m, nu: float):
    """F_{nu,1}(m) = nu^{-1} Gamma(nu+1/2)/(sqrt(pi)Gamma(nu)) * Gamma(m+2nu)/(Gamma(m+1)Gamma(2nu))."""
    if nu <= 0.0 or not math.isfinite(nu):
        raise DomainError(f"f_nu1 needs nu > 0, got {nu}")
    ma = np.asarray(m, dtype=float)
    if np.any(ma < 1.0):
        raise DomainError("f_nu1 needs m >= 1")
    out = np.exp(log_f_nu1(ma, nu))
    return float(out) if out.ndim == 0 else out
