"""Region decomposition of the series S into oscillatory, transition and
decaying pieces, with the Bessel (WKB) and Gegenbauer amplitudes they use.

With mu(m) = b(m + nu) the index range splits into

    Omega_1: 1 <= mu <= y - y^{1/3}/2,   Omega_2: |mu - y| <= 2 y^{1/3},
    Omega_3: mu >= y + y^{1/3}/2,

and S = sum_sigma I_{1,sigma} + sum_{j=2,3} sum_{sigma2} I_{j,sigma2} + R.
All cutoffs are affine rescalings of the smoothstep in :mod:`oscilla.cutoffs`.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple

import numpy as np
from scipy.special import roots_jacobi

from .cutoffs import step_up
from .errors import ConvergenceWarning, DomainError
from .series import SeriesParams, phase_factors
from .specfun import bessel_j_ladder, bessel_j_values, f_nu1, gegenbauer_weight_table, h1_phase

MIN_Y = 64.0
OMEGA2_HALF = 2.0
OMEGA13_GAP = 0.5

_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _composite(a: float, b: float, panels: int):
    e = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(e)
    x = (0.5 * (e[:-1] + e[1:]))[:, None] + half[:, None] * _GL_X[None, :]
    w = half[:, None] * _GL_W[None, :]
    return x.ravel(), w.ravel()


def _fsum_c(z) -> complex:
    z = np.asarray(z)
    return complex(math.fsum(z.real.ravel()), math.fsum(z.imag.ravel()))


# ---------------------------------------------------------------------------
# region partition
# ---------------------------------------------------------------------------

def _chi1_profile(z):
    return 1.0 - step_up(z, -1.0, -0.5)


def _chi3_profile(z):
    return step_up(z, 0.5, 1.0)


@dataclass(frozen=True)
class RegionDecomposition:
    b: float
    nu: float
    y: float

    def mu_of_m(self, m):
        return self.b * (np.asarray(m, dtype=float) + self.nu)

    def _m_of_mu(self, mu: float) -> float:
        return mu / self.b - self.nu

    @property
    def omega1(self) -> tuple[float, float]:
        y3 = self.y ** (1.0 / 3.0)
        return (max(1.0, self._m_of_mu(1.0)), self._m_of_mu(self.y - OMEGA13_GAP * y3))

    @property
    def omega2(self) -> tuple[float, float]:
        y3 = self.y ** (1.0 / 3.0)
        return (max(1.0, self._m_of_mu(self.y - OMEGA2_HALF * y3)),
                self._m_of_mu(self.y + OMEGA2_HALF * y3))

    @property
    def omega3(self) -> tuple[float, float]:
        return (self._m_of_mu(self.y + OMEGA13_GAP * self.y ** (1.0 / 3.0)), math.inf)

    @property
    def chi0_edge(self) -> float:
        """chi_0 = 1 for m <= edge (which covers m <= 1 and mu <= 2), 0 beyond edge + 1."""
        return max(1.0, self._m_of_mu(2.0))

    def scaled(self, m):
        return (self.mu_of_m(m) - self.y) / self.y ** (1.0 / 3.0)

    def chi0(self, m):
        return 1.0 - step_up(m, self.chi0_edge, self.chi0_edge + 1.0)

    def chi1(self, m):
        return (1.0 - self.chi0(m)) * _chi1_profile(self.scaled(m))

    def chi3(self, m):
        return (1.0 - self.chi0(m)) * _chi3_profile(self.scaled(m))

    def chi2(self, m):
        z = self.scaled(m)
        return (1.0 - self.chi0(m)) * (1.0 - _chi1_profile(z) - _chi3_profile(z))

    @property
    def cutoffs(self) -> tuple[Callable, Callable, Callable, Callable]:
        return (self.chi0, self.chi1, self.chi2, self.chi3)

    def partition_residual(self, m) -> float:
        total = self.chi0(m) + self.chi1(m) + self.chi2(m) + self.chi3(m)
        return float(np.max(np.abs(total - 1.0)))

    def chi2_derivative_sup(self, alpha: int, points: int = 4001) -> float:
        """sup_m |d^alpha chi_{2,y}/dm^alpha| by central differences over Omega_2."""
        lo, hi = self.omega2
        pad = 0.1 * (hi - lo)
        m = np.linspace(lo - pad, hi + pad, points)
        h = m[1] - m[0]
        d = np.asarray(self.chi2(m), dtype=float)
        for _ in range(alpha):
            d = np.gradient(d, h)
        return float(np.max(np.abs(d)))


def region_partition(b: float, nu: float, y: float) -> RegionDecomposition:
    if not (b > 0.0 and nu >= 0.0):
        raise DomainError(f"need b > 0 and nu >= 0, got b={b}, nu={nu}")
    if not y >= MIN_Y:
        raise DomainError(f"region partition needs y >= {MIN_Y:g}, got {y}")
    return RegionDecomposition(float(b), float(nu), float(y))


# ---------------------------------------------------------------------------
# phases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseS1:
    """S_{1,sigma}(m, y, phi) = s1 y h1(mu/y) + (s2 phi - pi b / 2) m."""
    sigma1: int
    sigma2: int
    b: float
    nu: float

    def __post_init__(self):
        if self.sigma1 not in (1, -1) or self.sigma2 not in (1, -1):
            raise DomainError("signs must be +1 or -1")

    def __call__(self, m, y: float, phi: float):
        m = np.asarray(m, dtype=float)
        mu = self.b * (m + self.nu)
        return (self.sigma1 * y * h1_phase(mu / y)
                + (self.sigma2 * phi - 0.5 * math.pi * self.b) * m)

    def dm(self, m, y: float, phi: float):
        mu = self.b * (np.asarray(m, dtype=float) + self.nu)
        return (-self.sigma1 * self.b * np.arccos(np.clip(mu / y, -1.0, 1.0))
                + self.sigma2 * phi - 0.5 * math.pi * self.b)


# ---------------------------------------------------------------------------
# WKB amplitudes of J_mu(y) on Omega_1
# ---------------------------------------------------------------------------

def wkb_regime_check(mu: float, y: float) -> None:
    """Raise DomainError naming the first violated regime condition."""
    if not y >= 8.0:
        raise DomainError(f"WKB regime needs y >= 8, got y={y}")
    if not mu >= 0.0:
        raise DomainError(f"WKB regime needs mu >= 0 (i.e. (y-mu)^(1/2) y^(-1/2) <= 1), got mu={mu}")
    a = y - mu
    if not a >= 1.0:
        raise DomainError(f"WKB regime needs a = y - mu >= 1, got a={a}")
    if not a ** 1.5 / math.sqrt(y) >= 0.125:
        raise DomainError(f"WKB regime needs (y-mu)^(3/2) y^(-1/2) >= 1/8, got {a ** 1.5 / math.sqrt(y):.4g}")
    if not mu <= y - 0.5 * y ** (1.0 / 3.0) + 1e-12:
        raise DomainError(f"WKB regime needs mu <= y - y^(1/3)/2, got mu={mu}, y={y}")


def _window_w(w):
    # even cutoff, 1 on |w| <= 2pi/3, 0 beyond 3pi/4
    return 1.0 - step_up(np.abs(w), 2.0 * math.pi / 3.0, 0.75 * math.pi)


@dataclass(frozen=True)
class WKBTable:
    mu: np.ndarray
    y: float
    a_plus: np.ndarray
    a_minus: np.ndarray
    remainder: np.ndarray
    abs_error: np.ndarray

    def reconstruct(self) -> np.ndarray:
        h = self.y * h1_phase(self.mu / self.y)
        env = (self.y * (self.y - self.mu)) ** -0.25
        return env * (self.a_plus * np.exp(1j * h) + self.a_minus * np.exp(-1j * h))

    def envelope(self) -> np.ndarray:
        return (self.y * (self.y - self.mu)) ** -0.25 * (np.abs(self.a_plus) + np.abs(self.a_minus))


def _wkb_integrals(mus: np.ndarray, y: float, panels: int):
    x, w = _composite(-0.75 * math.pi, 0.75 * math.pi, panels)
    win = _window_w(x) * w
    ip = np.empty(mus.size, dtype=complex)
    im = np.empty(mus.size, dtype=complex)
    for k, mu in enumerate(mus):
        s = math.sqrt((y - mu) / y)
        split = step_up(x / s, -0.5, 0.5)
        h = y * float(h1_phase(mu / y))
        base = y * np.sin(x) - mu * x
        ip[k] = np.sum(win * split * np.exp(1j * (base - h)))
        im[k] = np.sum(win * (1.0 - split) * np.exp(1j * (base + h)))
    return ip, im


def wkb_amplitudes_many(mus, y: float, include_remainder: bool = False) -> WKBTable:
    """a_{+,y}(mu), a_{-,y}(mu) for many mu at one y.

    I_{0,+} and I_{0,-} integrate exp(i(y sin w - mu w)) against the window
    chi_1(w) split smoothly at w = 0 on the scale s = sqrt((y-mu)/y), so the
    two pieces add up to the full windowed integral I_0 and each carries
    exactly one critical point w = +-arccos(mu/y).  R_0 = J_mu(y) - I_0/(2 pi)
    is returned separately and folded into a_+ when include_remainder is set.
    """
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    for mu in mus:
        wkb_regime_check(float(mu), float(y))
    smin = math.sqrt(max(y - float(mus.max()), 1e-300) / y)
    # >= 10 nodes per period of the phase and >= 8 panels across the split ramp
    h = min(2.0 * 2.0 * math.pi / (y + float(mus.max())), smin / 8.0, math.pi / 96.0)
    panels = int(math.ceil(1.5 * math.pi / h))
    ip1, im1 = _wkb_integrals(mus, y, panels)
    ip2, im2 = _wkb_integrals(mus, y, 2 * panels)
    err = (np.abs(ip2 - ip1) + np.abs(im2 - im1)) / (2 * math.pi)
    scale = (y * (y - mus)) ** 0.25
    hph = y * h1_phase(mus / y)
    i0 = (ip2 * np.exp(1j * hph) + im2 * np.exp(-1j * hph)) / (2 * math.pi)
    r0 = bessel_j_values(mus, np.full_like(mus, y)) - i0.real
    a_plus = scale * ip2 / (2 * math.pi)
    a_minus = scale * im2 / (2 * math.pi)
    if include_remainder:
        a_plus = a_plus + scale * np.exp(-1j * hph) * r0
    return WKBTable(mus, float(y), a_plus, a_minus, r0, scale * err + 1e-15)


def bessel_wkb_amplitudes(mu: float, y: float, include_remainder: bool = False) -> tuple[complex, complex]:
    """(a_plus, a_minus) with J_mu(y) ~ (y(y-mu))^{-1/4}(a_+ e^{iyh1} + a_- e^{-iyh1})."""
    t = wkb_amplitudes_many([mu], y, include_remainder)
    return complex(t.a_plus[0]), complex(t.a_minus[0])


# ---------------------------------------------------------------------------
# Gegenbauer pieces
# ---------------------------------------------------------------------------

def _chi_plus_u(u):
    return step_up(u, 0.25, 0.5)


def _chi_zero_u(u):
    return 1.0 - _chi_plus_u(u) - _chi_plus_u(-u)


def _log_branch(z: np.ndarray, sign: int) -> np.ndarray:
    """log^+ (cut on the negative imaginary axis) or log^- (cut on the positive one)."""
    ang = np.angle(z)
    if sign > 0:
        ang = np.where(ang <= -0.5 * math.pi, ang + 2 * math.pi, ang)
    else:
        ang = np.where(ang >= 0.5 * math.pi, ang - 2 * math.pi, ang)
    return np.log(np.abs(z)) + 1j * ang


def _lam(u: np.ndarray, phi: float, sign: int) -> np.ndarray:
    # i f_{sign}(phi, u) = log^{sign}(cos phi + i sin phi u) - i sign phi
    z = math.cos(phi) + 1j * math.sin(phi) * u
    return _log_branch(z, sign) - 1j * sign * phi


def _endpoint_piece(ms: np.ndarray, nu: float, phi: float, sign: int, n: int) -> np.ndarray:
    # int over sign*u in [1/2, 1] of e^{i m f} (1-u^2)^{nu-1}; weight (1-|u|)^{nu-1} by Gauss-Jacobi
    x, w = roots_jacobi(n, nu - 1.0, 0.0)
    v = 0.75 + 0.25 * x
    wt = w * 0.25 ** nu * (1.0 + v) ** (nu - 1.0)
    lam = _lam(sign * v, phi, sign)
    return np.exp(np.outer(ms, lam)) @ wt


def _smooth_piece(ms: np.ndarray, nu: float, phi: float, sign: int, lo: float, hi: float,
                  amp: Callable, panels: int, branch: int) -> np.ndarray:
    x, w = _composite(lo, hi, panels)
    wt = w * amp(x) * (1.0 - x * x) ** (nu - 1.0)
    if branch == 0:
        z = math.cos(phi) + 1j * math.sin(phi) * x
        with np.errstate(divide="ignore"):
            lam = np.log(np.abs(z)) + 1j * np.angle(z)
    else:
        lam = _lam(x, phi, branch)
    return np.exp(np.outer(ms, lam)) @ wt


def in_middle_regime(phi: float) -> bool:
    return 0.25 * math.pi < phi < 0.75 * math.pi


@dataclass(frozen=True)
class GegenbauerPieces:
    m: np.ndarray
    nu: float
    phi: float
    g_plus: np.ndarray
    g_minus: np.ndarray
    r: np.ndarray
    abs_error: np.ndarray
    converged: bool

    def reassemble(self) -> np.ndarray:
        return (self.g_plus * np.exp(1j * self.m * self.phi)
                + self.g_minus * np.exp(-1j * self.m * self.phi) + self.r)


def _h_and_e(ms: np.ndarray, nu: float, phi: float, n: int, panels: int):
    hp = (_endpoint_piece(ms, nu, phi, 1, n)
          + _smooth_piece(ms, nu, phi, 1, 0.25, 0.5, _chi_plus_u, panels, 1))
    hm = (_endpoint_piece(ms, nu, phi, -1, n)
          + _smooth_piece(ms, nu, phi, -1, -0.5, -0.25, lambda u: _chi_plus_u(-u), panels, -1))
    if in_middle_regime(phi):
        e = _smooth_piece(ms, nu, phi, 1, -0.5, 0.5, _chi_zero_u, 2 * panels, 0)
    else:
        e = _smooth_piece(ms, nu, phi, 1, -0.5, 0.5, _chi_zero_u, 2 * panels, 1)
    return hp, hm, e


def gegenbauer_decomposition_many(ms, nu: float, phi: float) -> GegenbauerPieces:
    """g_{nu,+-}(m, phi) and r(m, phi) for an array of m >= 1.

    For phi in (pi/4, 3pi/4): g_+- = F H_+-, r = F E (E needs integer m; it is
    NaN otherwise).  Elsewhere g_+ = F (H_+ + E'), g_- = F H_-, r = 0.
    """
    ms = np.atleast_1d(np.asarray(ms, dtype=float))
    if np.any(ms < 1.0):
        raise DomainError("gegenbauer_decomposition needs m >= 1")
    if not (0.0 <= phi <= math.pi):
        raise DomainError(f"phi must lie in [0, pi], got {phi}")
    if nu < 0.0:
        raise DomainError(f"nu must be >= 0, got {nu}")
    if nu == 0.0:
        g = 1.0 / ms
        return GegenbauerPieces(ms, 0.0, float(phi), g.astype(complex), g.astype(complex),
                                np.zeros(ms.size, dtype=complex), np.zeros(ms.size), True)
    mmax = float(ms.max())
    n = int(0.5 * mmax) + 40
    panels = max(24, int(math.ceil(mmax / 16.0)))
    hp1, hm1, e1 = _h_and_e(ms, nu, phi, n, panels)
    hp2, hm2, e2 = _h_and_e(ms, nu, phi, n + 16, 2 * panels)
    f = f_nu1(ms, nu)
    middle = in_middle_regime(phi)
    if middle:
        gp, gm = f * hp2, f * hm2
        r = f * e2
        r = np.where(np.isclose(ms, np.round(ms), rtol=0.0, atol=1e-12), r, np.nan + 0j)
        err = f * (np.abs(hp2 - hp1) + np.abs(hm2 - hm1) + np.abs(e2 - e1))
    else:
        gp, gm = f * (hp2 + e2), f * hm2
        r = np.zeros(ms.size, dtype=complex)
        err = f * (np.abs(hp2 - hp1) + np.abs(hm2 - hm1) + np.abs(e2 - e1))
    err = err + 1e-14 * f
    conv = bool(np.all(err <= 1e-9 * np.maximum(f, 1.0)))
    return GegenbauerPieces(ms, float(nu), float(phi), gp, gm, r, err, conv)


class GegenbauerTriple(NamedTuple):
    g_plus: complex
    g_minus: complex
    r: complex


def gegenbauer_decomposition(m: float, nu: float, phi: float) -> GegenbauerTriple:
    """(g_plus, g_minus, r) with nu^{-1}C_m^nu(cos phi) = g_+ e^{im phi} + g_- e^{-im phi} + r."""
    pieces = gegenbauer_decomposition_many([m], nu, phi)
    if not pieces.converged:
        warnings.warn(f"Gegenbauer pieces unsettled at m={m}, nu={nu}, phi={phi}: "
                      f"{pieces.abs_error[0]:.2e}", ConvergenceWarning, stacklevel=2)
    return GegenbauerTriple(complex(pieces.g_plus[0]), complex(pieces.g_minus[0]), complex(pieces.r[0]))


# ---------------------------------------------------------------------------
# amplitude tables and symbol ratios
# ---------------------------------------------------------------------------

AmplitudeKind = Literal["zeta1", "zeta2", "zeta3", "gplus", "gminus", "aplus", "aminus",
                        "fnu1", "custom"]


@dataclass(frozen=True)
class AmplitudeTable:
    """Samples of one amplitude on a (m, y, phi) product grid.

    ``law(m, y, phi, alpha)`` is the claimed bound for the alpha-th m-derivative
    and ``claimed_scaling`` records its exponents for reporting.
    """
    kind: str
    m: np.ndarray
    ys: np.ndarray
    phis: np.ndarray
    values: np.ndarray
    law: Callable
    claimed_scaling: tuple = ()
    meta: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["kind", "m", "y", "phi", "re", "im"])
            for i, m in enumerate(self.m):
                for j, y in enumerate(self.ys):
                    for k, phi in enumerate(self.phis):
                        v = complex(self.values[i, j, k])
                        wr.writerow([self.kind, repr(float(m)), repr(float(y)), repr(float(phi)),
                                     repr(v.real), repr(v.imag)])


def symbol_estimate_ratio(table: AmplitudeTable, alpha: int) -> float:
    """sup over the grid of |Delta^alpha f| / law: the empirical symbol constant."""
    if alpha not in (0, 1, 2):
        raise DomainError(f"alpha must be 0, 1 or 2, got {alpha}")
    m = np.asarray(table.m, dtype=float)
    if m.size < alpha + 3:
        raise DomainError(f"grid too coarse: {m.size} m points for alpha={alpha}")
    h = np.diff(m)
    if np.any(h <= 0) or np.ptp(h) > 1e-9 * h[0]:
        raise DomainError("m grid must be uniform and increasing")
    d = np.asarray(table.values, dtype=complex)
    if alpha:
        d = np.diff(d, n=alpha, axis=0) / h[0] ** alpha
    mm = m[: m.size - alpha] + 0.5 * alpha * h[0]
    M, Y, P = np.meshgrid(mm, table.ys, table.phis, indexing="ij")
    law = np.asarray(table.law(M, Y, P, alpha), dtype=float)
    ok = np.isfinite(law) & (law > 0) & np.isfinite(d)
    if not np.any(ok):
        raise DomainError("law vanishes on the whole grid")
    return float(np.max(np.abs(d[ok]) / law[ok]))


def symbol_phi_grid(n: int, m_max: float) -> np.ndarray:
    """Uniform phi grid plus points with sin(phi) log-spaced down to 1/(2 m_max).

    The g-laws cross over at m sin(phi) ~ 1, so a uniform grid alone misses
    the sup near phi = 0 and phi = pi until its spacing reaches 1/m_max.
    """
    s = np.geomspace(0.5 / m_max, 0.5, max(2, n // 4))
    side = np.arcsin(s)
    return np.unique(np.concatenate([np.linspace(0.0, math.pi, n + 1), side, math.pi - side]))


def _law_g(nu: float):
    def law(m, y, phi, alpha):
        return m ** (2 * nu - 1 - alpha) * (1.0 + m * np.sin(phi)) ** (-nu)
    return law


def amplitude_table(kind: AmplitudeKind, b: float, nu: float, ms, ys, phis) -> AmplitudeTable:
    """Sample an amplitude of the decomposition on a product grid."""
    ms = np.asarray(ms, dtype=float)
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    vals = np.zeros((ms.size, ys.size, phis.size), dtype=complex)
    lbn = math.lgamma(b * nu + 1.0) + b * nu * math.log(2.0)
    if kind in ("gplus", "gminus"):
        for k, phi in enumerate(phis):
            g = gegenbauer_decomposition_many(ms, nu, float(phi))
            vals[:, :, k] = (g.g_plus if kind == "gplus" else g.g_minus)[:, None]
        return AmplitudeTable(kind, ms, ys, phis, vals, _law_g(nu),
                              (("m", 2 * nu - 1), ("1+m sin phi", -nu)))
    if kind == "fnu1":
        vals[:] = f_nu1(ms, nu)[:, None, None]
        return AmplitudeTable(kind, ms, ys, phis, vals,
                              lambda m, y, phi, a: m ** (2 * nu - 1 - a), (("m", 2 * nu - 1),))
    if kind in ("aplus", "aminus"):
        for j, y in enumerate(ys):
            t = wkb_amplitudes_many(b * (ms + nu), float(y))
            vals[:, j, :] = (t.a_plus if kind == "aplus" else t.a_minus)[:, None]
        return AmplitudeTable(kind, ms, ys, phis, vals,
                              lambda m, y, phi, a: (b ** a) * (y - b * (m + nu)) ** (-a),
                              (("y-mu", 0),))
    if kind in ("zeta1", "zeta2", "zeta3"):
        for j, y in enumerate(ys):
            rp = region_partition(b, nu, float(y))
            pref = math.exp(lbn - b * nu * math.log(y))
            mu = rp.mu_of_m(ms)
            for k, phi in enumerate(phis):
                g = gegenbauer_decomposition_many(ms, nu, float(phi)).g_plus
                if kind == "zeta1":
                    c = rp.chi1(ms)
                    live = c > 0
                    a = np.zeros(ms.size, dtype=complex)
                    if np.any(live):
                        a[live] = wkb_amplitudes_many(mu[live], float(y)).a_plus
                    with np.errstate(invalid="ignore", divide="ignore"):
                        env = np.where(live, np.abs(y - mu) ** -0.25, 0.0)
                    vals[:, j, k] = pref * y ** -0.25 * c * (ms + nu) * env * g * a
                else:
                    c = rp.chi2(ms) if kind == "zeta2" else rp.chi3(ms)
                    vals[:, j, k] = pref * c * (ms + nu) * bessel_j_values(mu, np.full_like(mu, y)) * g
        if kind == "zeta1":
            def law(m, y, phi, a):
                mu = b * (m + nu)
                gap = np.maximum(y - mu, 1e-300)
                return (y ** (-b * nu - 0.25) * (1 + m) ** (2 * nu) * gap ** -0.25
                        * (1 + m * np.sin(phi)) ** (-nu) * np.maximum(gap ** -a, m ** -a))
            scaling = (("y", -b * nu - 0.25), ("1+m", 2 * nu), ("y-mu", -0.25), ("1+m sin phi", -nu))
        elif kind == "zeta2":
            def law(m, y, phi, a):
                return y ** ((2 - b) * nu - (1 + a) / 3.0) + 0 * m
            scaling = (("y", (2 - b) * nu - 1.0 / 3.0),)
        else:
            def law(m, y, phi, a):
                return y ** ((2 - b) * nu - 0.25 - a / 3.0) + 0 * m
            scaling = (("y", (2 - b) * nu - 0.25),)
        return AmplitudeTable(kind, ms, ys, phis, vals, law, scaling, {"b": b, "nu": nu})
    raise DomainError(f"unknown amplitude kind {kind!r}")


# ---------------------------------------------------------------------------
# the decomposition of S
# ---------------------------------------------------------------------------

SIGMA_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class SumDecomposition:
    I1: np.ndarray      # indexed like SIGMA_PAIRS
    I2: np.ndarray      # sigma2 = +, -
    I3: np.ndarray
    R: complex
    total: complex
    abs_error: float
    m_max: int


def _m_limit(b: float, nu: float, y: float) -> int:
    # J_mu(y) is below 1e-13 relative once mu - y exceeds 10 y^{1/3}
    return int(math.ceil((y + 10.0 * y ** (1.0 / 3.0)) / b - nu)) + 40


def _remainder_terms(rp: RegionDecomposition, ms, jl, phase, phi, pieces) -> complex:
    chi0 = rp.chi0(ms)
    w = gegenbauer_weight_table(int(ms[-1]), rp.nu, [phi])[0]
    first = chi0 * phase * jl * w
    second = np.zeros_like(first)
    if pieces is not None and rp.nu > 0.0:
        r = np.zeros(ms.size, dtype=complex)
        r[1:] = pieces.r
        second = (1.0 - chi0) * phase * jl * (ms + rp.nu) * r
    return _fsum_c(first) + _fsum_c(second)


def remainder_R(p: SeriesParams) -> complex:
    """R(y, phi): the chi_0 head of the series plus the r(m, phi) tail."""
    rp = region_partition(p.b, p.nu, p.y)
    m_max = _m_limit(p.b, p.nu, p.y)
    if p.nu > 0.0 and in_middle_regime(p.phi):
        # |r| <= F (5/8)^{m/2}, negligible past a few hundred terms
        m_max = min(m_max, 400)
    else:
        m_max = min(m_max, int(rp.chi0_edge) + 2)
    ms = np.arange(m_max + 1, dtype=float)
    jl = bessel_j_ladder(p.b, p.nu, p.y, m_max)
    phase = phase_factors(p.b, m_max)
    pieces = None
    if p.nu > 0.0 and in_middle_regime(p.phi):
        pieces = gegenbauer_decomposition_many(ms[1:], p.nu, p.phi)
    pref = math.exp(p.log_l - p.b * p.nu * math.log(p.y))
    return pref * _remainder_terms(rp, ms, jl, phase, p.phi, pieces)


def sum_decomposition(p: SeriesParams) -> SumDecomposition:
    """Split S(b, nu; -iy; cos phi) into I_{1,sigma}, I_{2,sigma2}, I_{3,sigma2}, R.

    Every piece is a direct sum of its defining series.  The Bessel
    remainder R_0 is folded into a_+ so that the split is exact up to
    quadrature error.
    """
    if p.y < MIN_Y:
        raise DomainError(f"sum_decomposition needs y >= {MIN_Y:g}, got {p.y}")
    b, nu, y, phi = p.b, p.nu, p.y, p.phi
    rp = region_partition(b, nu, y)
    m_max = _m_limit(b, nu, y)
    ms = np.arange(m_max + 1, dtype=float)
    mu = rp.mu_of_m(ms)
    jl = bessel_j_ladder(b, nu, y, m_max)
    phase = phase_factors(b, m_max)
    pref = math.exp(p.log_l - b * nu * math.log(y))
    pieces = gegenbauer_decomposition_many(ms[1:], nu, phi)
    gp = np.concatenate([[0.0], pieces.g_plus])
    gm = np.concatenate([[0.0], pieces.g_minus])
    rot = np.exp(1j * ms * phi)
    g_sig = {1: gp * rot, -1: gm * np.conj(rot)}

    c1, c2, c3 = rp.chi1(ms), rp.chi2(ms), rp.chi3(ms)
    live = c1 > 0
    I1 = np.zeros(4, dtype=complex)
    err = 0.0
    if np.any(live):
        t = wkb_amplitudes_many(mu[live], y, include_remainder=True)
        env = (y * (y - mu[live])) ** -0.25
        hph = y * h1_phase(mu[live] / y)
        amp = {1: t.a_plus * np.exp(1j * hph), -1: t.a_minus * np.exp(-1j * hph)}
        base = c1[live] * (ms[live] + nu) * env * phase[live]
        for k, (s1, s2) in enumerate(SIGMA_PAIRS):
            I1[k] = pref * _fsum_c(base * amp[s1] * g_sig[s2][live])
        gabs = np.abs(gp[live]) + np.abs(gm[live])
        err += pref * float(np.sum(c1[live] * (ms[live] + nu) * env * t.abs_error * gabs))
    I2 = np.array([pref * _fsum_c(c2 * (ms + nu) * jl * g_sig[s] * phase) for s in (1, -1)])
    I3 = np.array([pref * _fsum_c(c3 * (ms + nu) * jl * g_sig[s] * phase) for s in (1, -1)])
    R = pref * _remainder_terms(rp, ms, jl, phase, phi, pieces)
    err += pref * float(np.sum((ms[1:] + nu) * np.abs(jl[1:]) * pieces.abs_error))
    total = _fsum_c(np.concatenate([I1, I2, I3, [R]]))
    return SumDecomposition(I1, I2, I3, complex(R), total, err, m_max)
