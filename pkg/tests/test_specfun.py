import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle_values import BESSEL_J, F_NU1, GEGENBAUER, I_TILDE, LOG_GAMMA
from oscilla import specfun
from oscilla.errors import DomainError
from oscilla.specfun import (BesselQuery, GegenbauerQuery, bessel_j, bessel_j_fast, bessel_j_ladder,
                             bessel_j_values, f_nu1, gegenbauer_integral_oracle, gegenbauer_scaled,
                             gegenbauer_weight, gegenbauer_weight_table, h1_phase,
                             i_bessel_normalized_imag, i_tilde_imag_values, log_gamma)


@pytest.mark.parametrize("x,expected", LOG_GAMMA)
def test_log_gamma_matches_oracle(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-14, abs=1e-14)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        log_gamma(0.0)


@pytest.mark.parametrize("mu,y,expected", BESSEL_J)
def test_bessel_j_matches_oracle(mu, y, expected):
    r = bessel_j(mu, y)
    assert r.converged
    assert abs(r.value - expected) <= 1e-12
    # the reported error bound is honest
    assert abs(r.value - expected) <= r.abs_error + 1e-15


@pytest.mark.parametrize("mu,y,expected", BESSEL_J)
def test_vectorised_routes_match_oracle(mu, y, expected):
    assert bessel_j_values(mu, y)[()] == pytest.approx(expected, abs=1e-12)
    assert bessel_j_fast(np.array([mu]), np.array([y]))[0] == pytest.approx(expected, abs=1e-12)


def test_bessel_at_zero():
    assert bessel_j(0.0, 0.0).value == 1.0
    assert bessel_j(2.5, 0.0).value == 0.0


def test_bessel_query_validation():
    with pytest.raises(DomainError):
        BesselQuery(-1.0, 2.0)
    with pytest.raises(DomainError):
        BesselQuery(1.0, -2.0)
    with pytest.raises(DomainError):
        BesselQuery(1.0, 2.0, "magic")


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 12.0), st.floats(2.0, 16.0))
def test_series_and_schlafli_agree_on_overlap(mu, y):
    a = bessel_j(mu, y, "series").value
    b = bessel_j(mu, y, "schlafli").value
    assert abs(a - b) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 40.0), st.floats(8.0, 600.0))
def test_airy_scale_bound(mu, y):
    assert abs(bessel_j(mu, y).value) * y ** (1.0 / 3.0) <= 1.0


def test_fast_route_matches_direct_route():
    rng = np.random.default_rng(3)
    lam = rng.uniform(-0.5, 8.0, 400)
    y = rng.uniform(0.0, 300.0, 400)
    assert np.max(np.abs(bessel_j_fast(lam, y) - bessel_j_values(lam, y))) <= 1e-12


def test_ladder_matches_direct():
    rng = np.random.default_rng(11)
    for _ in range(20):
        b, nu, y = rng.uniform(0.5, 3.0), rng.uniform(0.0, 2.0), rng.uniform(0.1, 200.0)
        lad = bessel_j_ladder(b, nu, y, 60)
        direct = bessel_j_values(b * (np.arange(61) + nu), y)
        assert np.max(np.abs(lad - direct)) <= 1e-9


def test_ladder_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv(specfun.CACHE_ENV, str(tmp_path))
    first = bessel_j_ladder(1.5, 0.5, 33.0, 40)
    assert any(tmp_path.iterdir())
    second = bessel_j_ladder(1.5, 0.5, 33.0, 40)
    np.testing.assert_array_equal(first, second)


@pytest.mark.parametrize("lam,y,expected", I_TILDE)
def test_normalised_i_bessel(lam, y, expected):
    assert i_bessel_normalized_imag(lam, y).real == pytest.approx(expected, rel=1e-12, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.5, 6.0), st.floats(0.0, 200.0))
def test_normalised_i_bessel_even_and_bounded(lam, y):
    a = i_tilde_imag_values(lam, y)[()]
    b = i_tilde_imag_values(lam, -y)[()]
    assert a == b
    assert abs(a) * math.gamma(lam + 1.0) <= 1.0 + 1e-9


def test_normalised_i_bessel_domain():
    with pytest.raises(DomainError):
        i_bessel_normalized_imag(-1.0, 1.0)


@pytest.mark.parametrize("m,nu,phi,expected", GEGENBAUER)
def test_gegenbauer_matches_oracle(m, nu, phi, expected):
    assert gegenbauer_scaled(m, nu, phi) == pytest.approx(expected, rel=1e-12, abs=1e-13)
    assert gegenbauer_scaled(GegenbauerQuery(m, nu, phi)) == gegenbauer_scaled(m, nu, phi)


@pytest.mark.parametrize("m,nu,phi,expected", GEGENBAUER)
def test_gegenbauer_integral_route(m, nu, phi, expected):
    assert gegenbauer_integral_oracle(m, nu, phi) == pytest.approx(expected, rel=1e-9, abs=1e-10)


def test_gegenbauer_nu_zero_limit():
    # the weight tends to 2 cos(m phi) as nu -> 0
    for m in (1, 4, 9):
        assert gegenbauer_weight(m, 1e-9, 0.8) == pytest.approx(2.0 * math.cos(m * 0.8), abs=1e-6)
        assert gegenbauer_weight(m, 0.0, 0.8) == pytest.approx(2.0 * math.cos(m * 0.8), abs=1e-15)
    assert gegenbauer_scaled(0, 0.0, 1.0) == 1.0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 60), st.floats(0.05, 3.0), st.floats(0.0, math.pi))
def test_gegenbauer_three_term_recurrence(m, nu, phi):
    # (m+1) C_{m+1} = 2 (m+nu) t C_m - (m+2nu-1) C_{m-1}
    t = math.cos(phi)
    c = [nu * gegenbauer_scaled(j, nu, phi) for j in (m - 1, m, m + 1)]
    lhs = (m + 1) * c[2]
    rhs = 2.0 * (m + nu) * t * c[1] - (m + 2.0 * nu - 1.0) * c[0]
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9 * (1.0 + abs(c[1]) * (m + nu)))


def test_weight_table_rows_match_scalar():
    phis = np.array([0.0, 0.7, 2.2, math.pi])
    tab = gegenbauer_weight_table(25, 0.75, phis)
    assert tab.shape == (4, 26)
    for i, phi in enumerate(phis):
        assert tab[i, 17] == pytest.approx(gegenbauer_weight(17, 0.75, phi), rel=1e-14)


def test_gegenbauer_bad_args():
    with pytest.raises(DomainError):
        gegenbauer_scaled(-1, 0.5, 0.3)
    with pytest.raises(DomainError):
        gegenbauer_scaled(2, -0.5, 0.3)
    with pytest.raises(DomainError):
        gegenbauer_scaled(2, 0.5, 4.0)


@pytest.mark.parametrize("m,nu,expected", F_NU1)
def test_f_nu1(m, nu, expected):
    assert f_nu1(m, nu) == pytest.approx(expected, rel=1e-12)


def test_h1_phase_endpoints():
    assert h1_phase(0.0) == 1.0
    assert h1_phase(1.0) == 0.0
    assert h1_phase(0.5) == pytest.approx(math.sqrt(0.75) - 0.5 * math.acos(0.5), rel=1e-15)
    with pytest.raises(DomainError):
        h1_phase(1.5)
