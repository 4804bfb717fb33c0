"""Hot loops: Bessel J evaluation, Miller ladders, Gegenbauer recurrences.

Every kernel exists twice.  The ``*_loop`` form is written for numba's
nopython mode (it also runs as plain Python, slowly).  The ``*_np`` form is
the numpy fallback, vectorised across the independent axis of each problem.
The public names at the bottom bind to one or the other according to
``_accel.USE_NUMBA``.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

EPS = 2.220446049250313e-16
PI = math.pi

GL20_X, GL20_W = np.polynomial.legendre.leggauss(20)
GL12_X, GL12_W = np.polynomial.legendre.leggauss(12)

# Schlafli tail: level step and total exponent covered by the level panels.
_TAIL_STEP = 3.0
_TAIL_LEVELS = 15
# Hankel expansion is used above this argument when mu^2 <= y/4.
HANKEL_MIN_ARG = 400.0

METHOD_AUTO = 0
METHOD_SERIES = 1
METHOD_SCHLAFLI = 2
METHOD_HANKEL = 3


# ---------------------------------------------------------------------------
# Bessel J, loop form
# ---------------------------------------------------------------------------

def _j_series_loop(mu, y):
    if y == 0.0:
        if mu == 0.0:
            return 1.0, 0.0
        return 0.0, 0.0
    h = 0.5 * y
    lt = mu * math.log(h) - math.lgamma(mu + 1.0)
    if lt < -740.0:
        return 0.0, 1e-300
    t = math.exp(lt)
    s = t
    comp = 0.0
    tmax = abs(t)
    q = -h * h
    k = 0
    while k < 2000:
        k += 1
        t *= q / (k * (k + mu))
        x = s + t
        if abs(s) >= abs(t):
            comp += (s - x) + t
        else:
            comp += (t - x) + s
        s = x
        at = abs(t)
        if at > tmax:
            tmax = at
        if k > h and at <= 1e-18 * tmax:
            break
    return s + comp, 8.0 * EPS * tmax + abs(t) + 64.0 * EPS


def _j_schlafli_loop(mu, y, density):
    # (1/pi) int_0^pi cos(y sin w - mu w) dw, 20-point Gauss panels each
    # spanning at most ~1.5 periods of the integrand (scaled by density).
    npan = int(density * (y + abs(mu)) / 3.0) + 2
    hw = 0.5 * PI / npan
    s1 = 0.0
    c1 = 0.0
    for p in range(npan):
        centre = (2 * p + 1) * hw
        acc = 0.0
        for i in range(20):
            w = centre + hw * GL20_X[i]
            acc += GL20_W[i] * math.cos(y * math.sin(w) - mu * w)
        x = s1 + acc
        if abs(s1) >= abs(acc):
            c1 += (s1 - x) + acc
        else:
            c1 += (acc - x) + s1
        s1 = x
    first = (s1 + c1) * hw / PI
    nodes = 20 * npan
    err = 16.0 * EPS * math.sqrt(nodes) + 32.0 * EPS
    frac = mu - math.floor(mu)
    if frac == 0.0:
        return first, err
    sp = math.sin(PI * mu)
    # int_0^inf exp(-y sinh w - mu w) dw over level panels of the exponent
    s2 = 0.0
    w_lo = 0.0
    w_hi = 0.0
    for lev in range(1, _TAIL_LEVELS + 1):
        target = _TAIL_STEP * lev
        w = math.asinh(target / y)
        if w < w_lo:
            w = w_lo
        for _ in range(60):
            g = y * math.sinh(w) + mu * w - target
            dg = y * math.cosh(w) + mu
            step = g / dg
            w -= step
            if abs(step) <= 1e-15 * (1.0 + w):
                break
        w_hi = w
        half = 0.5 * (w_hi - w_lo)
        mid = 0.5 * (w_hi + w_lo)
        acc = 0.0
        for i in range(12):
            u = mid + half * GL12_X[i]
            acc += GL12_W[i] * math.exp(-(y * math.sinh(u) + mu * u))
        s2 += acc * half
        w_lo = w_hi
    tail = math.exp(-_TAIL_STEP * _TAIL_LEVELS) / (y * math.cosh(w_hi) + mu)
    value = first - sp / PI * s2
    return value, err + abs(sp) / PI * (tail + 8.0 * EPS * s2)


def _j_hankel_loop(mu, y):
    m4 = 4.0 * mu * mu
    chi = y - (0.5 * mu + 0.25) * PI
    p = 1.0
    q = 0.0
    term = 1.0
    last = 1.0
    k = 0
    while k < 200:
        k += 1
        odd = 2 * k - 1
        nxt = term * (m4 - odd * odd) / (k * 8.0 * y)
        if abs(nxt) > abs(term) and k > 1:
            break
        term = nxt
        last = abs(term)
        r = k % 4
        if r == 1:
            q += term
        elif r == 2:
            p -= term
        elif r == 3:
            q -= term
        else:
            p += term
        if last < 1e-17:
            break
    amp = math.sqrt(2.0 / (PI * y))
    value = amp * (p * math.cos(chi) - q * math.sin(chi))
    return value, amp * (last + 64.0 * EPS) + 4.0 * EPS * abs(value)


def _j_eval_loop(mu, y, method):
    if y == 0.0:
        return _j_series_loop(mu, y)
    if method == METHOD_SERIES:
        return _j_series_loop(mu, y)
    if method == METHOD_SCHLAFLI:
        if y + mu <= 0.0:
            return _j_series_loop(mu, y)
        return _j_schlafli_loop(mu, y, 1.0)
    if method == METHOD_HANKEL:
        return _j_hankel_loop(mu, y)
    if y < 8.0:
        return _j_series_loop(mu, y)
    if y >= HANKEL_MIN_ARG and mu * mu <= 0.25 * y:
        return _j_hankel_loop(mu, y)
    return _j_schlafli_loop(mu, y, 1.0)


def _j_many_loop(mu, y, method):
    n = y.shape[0]
    vals = np.empty(n)
    errs = np.empty(n)
    for i in range(n):
        v, e = _j_eval_loop(mu[i], y[i], method)
        vals[i] = v
        errs[i] = e
    return vals, errs


# ---------------------------------------------------------------------------
# Bessel J, numpy form
# ---------------------------------------------------------------------------

def _lgamma_np(x):
    from scipy.special import gammaln

    return gammaln(x)


def _j_series_np(mu, y):
    mu = np.asarray(mu, dtype=float)
    y = np.asarray(y, dtype=float)
    vals = np.zeros_like(y)
    errs = np.zeros_like(y)
    zero = y == 0.0
    vals[zero & (mu == 0.0)] = 1.0
    live = ~zero
    if not np.any(live):
        return vals, errs
    m = mu[live]
    h = 0.5 * y[live]
    lt = m * np.log(h) - _lgamma_np(m + 1.0)
    under = lt < -740.0
    t = np.where(under, 0.0, np.exp(np.minimum(lt, 700.0)))
    s = t.copy()
    tmax = np.abs(t)
    q = -h * h
    kmax = int(np.max(h)) + 80
    for k in range(1, min(kmax, 2000) + 1):
        t = t * (q / (k * (k + m)))
        s = s + t
        tmax = np.maximum(tmax, np.abs(t))
        if k > np.max(h) and np.all(np.abs(t) <= 1e-18 * np.maximum(tmax, 1e-300)):
            break
    e = 8.0 * EPS * tmax + np.abs(t) + 64.0 * EPS
    e[under] = 1e-300
    vals[live] = s
    errs[live] = e
    return vals, errs


def _j_schlafli_np(mu, y, density=1.0):
    mu = float(mu)
    y = float(y)
    npan = int(density * (y + abs(mu)) / 3.0) + 2
    hw = 0.5 * PI / npan
    centres = (2 * np.arange(npan) + 1) * hw
    w = (centres[:, None] + hw * GL20_X[None, :]).ravel()
    f = np.cos(y * np.sin(w) - mu * w) * np.tile(GL20_W, npan)
    first = math.fsum(f) * hw / PI
    err = 16.0 * EPS * math.sqrt(f.size) + 32.0 * EPS
    if mu == math.floor(mu):
        return first, err
    sp = math.sin(PI * mu)
    targets = _TAIL_STEP * np.arange(1, _TAIL_LEVELS + 1)
    wl = np.arcsinh(targets / y)
    for _ in range(60):
        g = y * np.sinh(wl) + mu * wl - targets
        step = g / (y * np.cosh(wl) + mu)
        wl = wl - step
        if np.all(np.abs(step) <= 1e-15 * (1.0 + wl)):
            break
    edges = np.concatenate(([0.0], wl))
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = mid[:, None] + half[:, None] * GL12_X[None, :]
    vals = np.exp(-(y * np.sinh(u) + mu * u)) * GL12_W[None, :]
    s2 = math.fsum((vals.sum(axis=1) * half).tolist())
    tail = math.exp(-_TAIL_STEP * _TAIL_LEVELS) / (y * math.cosh(wl[-1]) + mu)
    value = first - sp / PI * s2
    return value, err + abs(sp) / PI * (tail + 8.0 * EPS * s2)


def _j_hankel_np(mu, y):
    mu = np.asarray(mu, dtype=float)
    y = np.asarray(y, dtype=float)
    m4 = 4.0 * mu * mu
    chi = y - (0.5 * mu + 0.25) * PI
    p = np.ones_like(y)
    q = np.zeros_like(y)
    term = np.ones_like(y)
    last = np.ones_like(y)
    active = np.ones(y.shape, dtype=bool)
    for k in range(1, 201):
        odd = 2 * k - 1
        nxt = term * (m4 - odd * odd) / (k * 8.0 * y)
        grow = (np.abs(nxt) > np.abs(term)) & (k > 1)
        active &= ~grow
        if not np.any(active):
            break
        term = np.where(active, nxt, term)
        last = np.where(active, np.abs(term), last)
        r = k % 4
        if r == 1:
            q = np.where(active, q + term, q)
        elif r == 2:
            p = np.where(active, p - term, p)
        elif r == 3:
            q = np.where(active, q - term, q)
        else:
            p = np.where(active, p + term, p)
        active &= last >= 1e-17
        if not np.any(active):
            break
    amp = np.sqrt(2.0 / (PI * y))
    value = amp * (p * np.cos(chi) - q * np.sin(chi))
    return value, amp * (last + 64.0 * EPS) + 4.0 * EPS * np.abs(value)


def _j_many_np(mu, y, method):
    mu = np.asarray(mu, dtype=float)
    y = np.asarray(y, dtype=float)
    vals = np.empty_like(y)
    errs = np.empty_like(y)
    if method == METHOD_SERIES:
        return _j_series_np(mu, y)
    if method == METHOD_HANKEL:
        return _j_hankel_np(mu, y)
    if method == METHOD_SCHLAFLI:
        ser = (y == 0.0) | (y + mu <= 0.0)
        hank = np.zeros_like(ser)
    else:
        ser = y < 8.0
        hank = (~ser) & (y >= HANKEL_MIN_ARG) & (mu * mu <= 0.25 * y)
    if np.any(ser):
        vals[ser], errs[ser] = _j_series_np(mu[ser], y[ser])
    if np.any(hank):
        vals[hank], errs[hank] = _j_hankel_np(mu[hank], y[hank])
    rest = np.flatnonzero(~(ser | hank))
    for i in rest:
        vals[i], errs[i] = _j_schlafli_np(mu[i], y[i])
    return vals, errs


def _j_eval_np(mu, y, method):
    v, e = _j_many_np(np.array([mu], dtype=float), np.array([y], dtype=float), method)
    return float(v[0]), float(e[0])


def _j_schlafli_dispatch_np(mu, y, density):
    return _j_schlafli_np(mu, y, density)


# ---------------------------------------------------------------------------
# Miller backward recurrence
# ---------------------------------------------------------------------------

def _miller_loop(frac, jmax, y, nstart):
    """Unnormalised J_{frac+j}(y), j = 0..jmax, by backward recurrence."""
    out = np.zeros(jmax + 1)
    jp1 = 0.0
    j0 = 1e-280
    for n in range(nstart, 0, -1):
        order = frac + n
        jm1 = (2.0 * order / y) * j0 - jp1
        jp1 = j0
        j0 = jm1
        idx = n - 1
        if idx <= jmax:
            out[idx] = j0
        if abs(j0) > 1e250:
            j0 *= 1e-250
            jp1 *= 1e-250
            lo = idx if idx <= jmax else jmax + 1
            for i in range(lo, jmax + 1):
                out[i] *= 1e-250
    return out


def _miller_many_loop(fracs, jmax, y, nstart):
    g = fracs.shape[0]
    out = np.zeros((g, jmax + 1))
    for i in range(g):
        out[i, :] = _miller_loop(fracs[i], jmax, y, nstart)
    return out


def _miller_many_np(fracs, jmax, y, nstart):
    fracs = np.asarray(fracs, dtype=float)
    g = fracs.size
    out = np.zeros((g, jmax + 1))
    jp1 = np.zeros(g)
    j0 = np.full(g, 1e-280)
    for n in range(nstart, 0, -1):
        jm1 = (2.0 * (fracs + n) / y) * j0 - jp1
        jp1 = j0
        j0 = jm1
        idx = n - 1
        if idx <= jmax:
            out[:, idx] = j0
        big = np.abs(j0) > 1e250
        if np.any(big):
            j0[big] *= 1e-250
            jp1[big] *= 1e-250
            lo = idx if idx <= jmax else jmax + 1
            out[big, lo:] *= 1e-250
    return out


# ---------------------------------------------------------------------------
# Gegenbauer weights (m+nu) nu^{-1} C_m^nu(t) and fused series accumulation
# ---------------------------------------------------------------------------

def _gegen_weights_loop(mmax, nu, t):
    # D_m = C_m^nu / nu obeys the Gegenbauer recurrence; nu D_0 = 1 enters only
    # at m = 2, so the loop is uniform in nu down to nu = 0 (Chebyshev limit)
    nt = t.shape[0]
    out = np.empty((nt, mmax + 1))
    for r in range(nt):
        x = t[r]
        out[r, 0] = 1.0
        if mmax == 0:
            continue
        dm1 = 2.0 * x
        out[r, 1] = (1.0 + nu) * dm1
        if mmax == 1:
            continue
        dm2 = dm1
        dm1 = (2.0 * x * (1.0 + nu) * dm2 - 2.0) / 2.0
        out[r, 2] = (2.0 + nu) * dm1
        for m in range(3, mmax + 1):
            d = (2.0 * x * (m + nu - 1.0) * dm1 - (m + 2.0 * nu - 2.0) * dm2) / m
            out[r, m] = (m + nu) * d
            dm2 = dm1
            dm1 = d
    return out


def _gegen_weights_np(mmax, nu, t):
    t = np.asarray(t, dtype=float)
    out = np.empty((t.size, mmax + 1))
    out[:, 0] = 1.0
    if mmax == 0:
        return out
    dm1 = 2.0 * t
    out[:, 1] = (1.0 + nu) * dm1
    if mmax == 1:
        return out
    dm2 = dm1
    dm1 = (2.0 * t * (1.0 + nu) * dm2 - 2.0) / 2.0
    out[:, 2] = (2.0 + nu) * dm1
    for m in range(3, mmax + 1):
        d = (2.0 * t * (m + nu - 1.0) * dm1 - (m + 2.0 * nu - 2.0) * dm2) / m
        out[:, m] = (m + nu) * d
        dm2, dm1 = dm1, d
    return out


def _series_accumulate_loop(coef_re, coef_im, nu, t, scale, small, m_turn, need):
    """Sum coef[m] * w_m(t) per t with Neumaier compensation.

    Stops once m >= m_turn and ``need`` consecutive terms satisfy
    scale*|term| < small.  Returns (re, im, terms_used, stopped, max_abs).
    """
    nt = t.shape[0]
    mmax = coef_re.shape[0] - 1
    out_re = np.empty(nt)
    out_im = np.empty(nt)
    used = np.empty(nt, dtype=np.int64)
    stopped = np.zeros(nt, dtype=np.bool_)
    biggest = np.zeros(nt)
    for r in range(nt):
        x = t[r]
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        run = 0
        big = 0.0
        dm2 = 0.0
        dm1 = 0.0
        m_done = mmax + 1
        for m in range(mmax + 1):
            # same D_m = C_m^nu / nu recurrence as _gegen_weights_loop
            if m == 0:
                w = 1.0
            else:
                if m == 1:
                    d = 2.0 * x
                elif m == 2:
                    d = (2.0 * x * (1.0 + nu) * dm1 - 2.0) / 2.0
                else:
                    d = (2.0 * x * (m + nu - 1.0) * dm1 - (m + 2.0 * nu - 2.0) * dm2) / m
                dm2 = dm1
                dm1 = d
                w = (m + nu) * d
            tr = coef_re[m] * w
            ti = coef_im[m] * w
            xs = sr + tr
            if abs(sr) >= abs(tr):
                cr += (sr - xs) + tr
            else:
                cr += (tr - xs) + sr
            sr = xs
            xs = si + ti
            if abs(si) >= abs(ti):
                ci += (si - xs) + ti
            else:
                ci += (ti - xs) + si
            si = xs
            mag = scale * math.hypot(tr, ti)
            if mag > big:
                big = mag
            if m >= m_turn and mag < small:
                run += 1
                if run >= need:
                    m_done = m + 1
                    stopped[r] = True
                    break
            else:
                run = 0
        out_re[r] = sr + cr
        out_im[r] = si + ci
        used[r] = m_done
        biggest[r] = big
    return out_re, out_im, used, stopped, biggest


def _series_accumulate_np(coef_re, coef_im, nu, t, scale, small, m_turn, need):
    t = np.asarray(t, dtype=float)
    mmax = coef_re.size - 1
    w = _gegen_weights_np(mmax, nu, t)
    tr = w * coef_re[None, :]
    ti = w * coef_im[None, :]
    mag = scale * np.hypot(tr, ti)
    ok = (mag < small) & (np.arange(mmax + 1)[None, :] >= m_turn)
    # length of the run of consecutive small terms ending at each m
    idx = np.arange(mmax + 1)[None, :]
    last_bad = np.maximum.accumulate(np.where(ok, -1, idx), axis=1)
    run = idx - last_bad
    hit = run >= need
    stopped = hit.any(axis=1)
    first = np.where(stopped, hit.argmax(axis=1), mmax)
    used = first + 1
    keep = idx <= first[:, None]
    out_re = np.array([math.fsum(row[k]) for row, k in zip(tr, keep)])
    out_im = np.array([math.fsum(row[k]) for row, k in zip(ti, keep)])
    biggest = np.where(keep, mag, 0.0).max(axis=1)
    return out_re, out_im, used.astype(np.int64), stopped, biggest


def _neumaier_loop(values):
    s = 0.0
    c = 0.0
    for i in range(values.shape[0]):
        v = values[i]
        x = s + v
        if abs(s) >= abs(v):
            c += (s - x) + v
        else:
            c += (v - x) + s
        s = x
    return s + c


def _neumaier_np(values):
    return math.fsum(np.asarray(values, dtype=float).tolist())


# ---------------------------------------------------------------------------
# bindings
# ---------------------------------------------------------------------------

if USE_NUMBA:
    _j_series_nb = njit(_j_series_loop)
    _j_hankel_nb = njit(_j_hankel_loop)
    # the dispatcher must see compiled callees
    _j_series_loop = _j_series_nb  # noqa: F811
    _j_hankel_loop = _j_hankel_nb  # noqa: F811
    _j_schlafli_loop = njit(_j_schlafli_loop)  # noqa: F811
    _j_eval_loop = njit(_j_eval_loop)  # noqa: F811
    _j_many_loop = njit(_j_many_loop)  # noqa: F811
    _miller_loop = njit(_miller_loop)  # noqa: F811
    _miller_many_loop = njit(_miller_many_loop)  # noqa: F811

    j_eval = _j_eval_loop
    j_many = _j_many_loop
    j_schlafli = _j_schlafli_loop
    miller_many = _miller_many_loop
    gegen_weights = njit(_gegen_weights_loop)
    series_accumulate = njit(_series_accumulate_loop)
    neumaier = njit(_neumaier_loop)
else:
    j_eval = _j_eval_np
    j_many = _j_many_np
    j_schlafli = _j_schlafli_dispatch_np
    miller_many = _miller_many_np
    gegen_weights = _gegen_weights_np
    series_accumulate = _series_accumulate_np
    neumaier = _neumaier_np


def numpy_backend():
    """The numpy implementations, for benchmarking against the active path."""
    return {
        "j_many": _j_many_np,
        "miller_many": _miller_many_np,
        "gegen_weights": _gegen_weights_np,
        "series_accumulate": _series_accumulate_np,
    }


def active_backend():
    """The implementations selected at import time (compiled when numba is on)."""
    return {
        "j_many": j_many,
        "miller_many": miller_many,
        "gegen_weights": gegen_weights,
        "series_accumulate": series_accumulate,
    }
