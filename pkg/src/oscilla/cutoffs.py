"""Smooth cutoff profiles built from the exp(-1/x) smoothstep.

psi(x) = 0 for x <= 0, 1 for x >= 1, and 1/(1 + exp(1/x - 1/(1-x))) between.
Every cutoff in the package is an affine rescaling of this one profile.
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit


def _inner(x):
    x = np.clip(x, 1e-300, 1.0 - 1e-16)
    return 1.0 / (1.0 - x) - 1.0 / x


def smoothstep(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 1.0, 1.0, 0.0)
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        out = out.astype(float)
        out[mid] = expit(_inner(x[mid]))
    return out if out.ndim else float(out)


def smoothstep_deriv(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        xm = x[mid]
        p = expit(_inner(xm))
        out[mid] = p * (1.0 - p) * (1.0 / (1.0 - xm) ** 2 + 1.0 / xm ** 2)
    return out if out.ndim else float(out)


def step_up(x, lo: float, hi: float):
    """0 below lo, 1 above hi."""
    return smoothstep((np.asarray(x, dtype=float) - lo) / (hi - lo))


def step_up_deriv(x, lo: float, hi: float):
    return smoothstep_deriv((np.asarray(x, dtype=float) - lo) / (hi - lo)) / (hi - lo)


def flat_bump(x, inner: float, outer: float):
    """Even bump: 1 on |x| <= inner, 0 on |x| >= outer."""
    return 1.0 - step_up(np.abs(np.asarray(x, dtype=float)), inner, outer)


def flat_bump_deriv(x, inner: float, outer: float):
    x = np.asarray(x, dtype=float)
    return -np.sign(x) * step_up_deriv(np.abs(x), inner, outer)


def window(x, a: float, b: float, ramp: float):
    """1 on [a+ramp, b-ramp], 0 outside [a, b]."""
    x = np.asarray(x, dtype=float)
    return step_up(x, a, a + ramp) * (1.0 - step_up(x, b - ramp, b))


def window_deriv(x, a: float, b: float, ramp: float):
    x = np.asarray(x, dtype=float)
    up = step_up(x, a, a + ramp)
    down = 1.0 - step_up(x, b - ramp, b)
    return step_up_deriv(x, a, a + ramp) * down - up * step_up_deriv(x, b - ramp, b)
