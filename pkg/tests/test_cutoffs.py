import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from oscilla.cutoffs import (flat_bump, flat_bump_deriv, smoothstep, smoothstep_deriv, step_up,
                             window, window_deriv)


def test_smoothstep_ends_and_midpoint():
    assert smoothstep(-1.0) == 0.0 and smoothstep(0.0) == 0.0
    assert smoothstep(1.0) == 1.0 and smoothstep(2.0) == 1.0
    assert smoothstep(0.5) == 0.5


@given(st.floats(-2.0, 3.0))
def test_smoothstep_reflection(x):
    assert abs(smoothstep(x) + smoothstep(1.0 - x) - 1.0) <= 1e-15


def test_derivatives_match_finite_differences():
    x = np.linspace(-0.2, 1.2, 301)
    h = 1e-6
    fd = (smoothstep(x + h) - smoothstep(x - h)) / (2 * h)
    assert np.max(np.abs(fd - smoothstep_deriv(x))) < 1e-6
    fd = (flat_bump(x * 4 - 2 + h, 0.5, 1.5) - flat_bump(x * 4 - 2 - h, 0.5, 1.5)) / (2 * h)
    assert np.max(np.abs(fd - flat_bump_deriv(x * 4 - 2, 0.5, 1.5))) < 1e-6
    y = np.linspace(-1, 12, 400)
    fd = (window(y + h, 0.0, 10.0, 2.0) - window(y - h, 0.0, 10.0, 2.0)) / (2 * h)
    assert np.max(np.abs(fd - window_deriv(y, 0.0, 10.0, 2.0))) < 1e-6


@given(st.floats(-5.0, 5.0))
def test_flat_bump_support(x):
    v = flat_bump(x, 1.0, 2.0)
    assert 0.0 <= v <= 1.0
    if abs(x) <= 1.0:
        assert v == 1.0
    if abs(x) >= 2.0:
        assert v == 0.0


def test_step_up_is_monotone():
    v = step_up(np.linspace(-1, 4, 1001), 0.5, 2.5)
    assert np.all(np.diff(v) >= 0.0)
