import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle_values import SCRIPT_I
from oscilla.errors import DomainError
from oscilla.series import (SeriesParams, evaluate, phase_factors, quarter_turns, script_i,
                            script_i_grid, script_i_negative_y, script_i_small_y)


@pytest.mark.parametrize("b,nu,y,phi,expected", SCRIPT_I)
def test_script_i_matches_termwise_oracle(b, nu, y, phi, expected):
    r = script_i(SeriesParams(b, nu, y, phi, tol=1e-9))
    assert r.converged
    assert abs(r.value - expected) <= 1e-11 * max(1.0, abs(expected))


@pytest.mark.parametrize("b,nu,y,phi,expected", [c for c in SCRIPT_I if c[2] <= 20.0])
def test_small_y_route_matches_oracle(b, nu, y, phi, expected):
    r = script_i_small_y(SeriesParams(b, nu, y, phi, tol=1e-10))
    assert abs(r.value - expected) <= 1e-9 * max(1.0, abs(expected))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.0, 2.0), st.floats(0.01, 12.0), st.floats(0.0, math.pi))
def test_power_series_and_bessel_routes_agree(b, nu, y, phi):
    p = SeriesParams(b, nu, y, phi, tol=1e-10)
    a = script_i_small_y(p)
    j = script_i(p)
    assert abs(a.value - j.value) <= 1e-8 * max(1.0, abs(j.value)) + a.abs_error + j.abs_error


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 100.0), st.floats(0.0, math.pi), st.sampled_from([0.0, 0.5, 1.0, 2.0]))
def test_b_one_modulus_is_one(y, phi, nu):
    assert abs(abs(script_i(SeriesParams(1.0, nu, y, phi)).value) - 1.0) <= 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 100.0), st.sampled_from([0.25, 0.75, 1.5]))
def test_b_two_antipodal_anchor(y, nu):
    assert abs(script_i(SeriesParams(2.0, nu, y, math.pi)).value - 1.0) <= 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 4.0), st.floats(0.0, 3.0), st.floats(0.0, math.pi))
def test_origin_anchor(b, nu, phi):
    assert script_i(SeriesParams(b, nu, 0.0, phi)).value == 1.0


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.0, 2.0), st.floats(0.5, 80.0), st.floats(0.0, math.pi))
def test_negative_y_is_conjugate(b, nu, y, phi):
    pos = evaluate(SeriesParams(b, nu, y, phi)).value
    neg = evaluate(SeriesParams(b, nu, -y, phi)).value
    assert abs(neg - pos.conjugate()) <= 1e-12 * max(1.0, abs(pos))


def test_grid_matches_scalar_calls():
    phis = np.linspace(0.0, math.pi, 9)
    vals, errs, used, conv = script_i_grid(1.5, 0.5, 37.0, phis)
    assert conv.all()
    for phi, v in zip(phis, vals):
        assert v == script_i(SeriesParams(1.5, 0.5, 37.0, phi)).value


@pytest.mark.parametrize("y", [5e-324, 1e-300, 1e-20, 0.2])
def test_tiny_y_is_finite_and_near_one(y):
    for b, nu in ((2.0, 0.75), (0.5, 2.0), (3.0, 0.0)):
        v = script_i(SeriesParams(b, nu, y, 1.0)).value
        assert abs(v - 1.0) <= 2.0 * y ** min(b, 2.0) * (1.0 + nu) + 1e-15


def test_result_metadata():
    r = script_i(SeriesParams(2.5, 1.0, 80.0, 1.2))
    assert r.converged and r.terms_used > 80 / 2.5
    assert 0.0 < r.abs_error <= 1e-8
    assert r.m_cutoff_reason in ("turning_point_margin", "tail_bound", "budget")


def test_negative_route_requires_negative_y():
    with pytest.raises(DomainError):
        script_i_negative_y(SeriesParams(1.0, 0.5, 3.0, 0.2))


@pytest.mark.parametrize("kw", [dict(b=0.0), dict(b=-1.0), dict(nu=-0.1), dict(phi=4.0),
                                dict(y=math.inf), dict(tol=0.0)])
def test_params_validation(kw):
    base = dict(b=1.0, nu=0.5, y=1.0, phi=0.3)
    base.update(kw)
    with pytest.raises(DomainError):
        SeriesParams(**base)


def test_quarter_turn_phases():
    # b = 1: e^{-i pi m/2} cycles through 1, -i, -1, i
    ph = phase_factors(1.0, 4)
    np.testing.assert_allclose(ph, [1, -1j, -1, 1j, 1], atol=0.0)
    assert quarter_turns(2.0, np.array([3]))[0] == 2
    assert quarter_turns(0.5, np.array([3]))[0] == 1.5
