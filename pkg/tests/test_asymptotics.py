import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from oracle_values import GEGENBAUER
from oscilla.asymptotics import (AmplitudeTable, PhaseS1, amplitude_table, bessel_wkb_amplitudes,
                                 gegenbauer_decomposition, gegenbauer_decomposition_many,
                                 in_middle_regime, region_partition, remainder_R,
                                 sum_decomposition, symbol_estimate_ratio, symbol_phi_grid,
                                 wkb_amplitudes_many, wkb_regime_check)
from oscilla.errors import DomainError
from oscilla.series import SeriesParams, script_i
from oscilla.specfun import f_nu1, gegenbauer_scaled


# -- region partition -------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(0.0, 2.0), st.floats(64.0, 2000.0))
def test_partition_of_unity(b, nu, y):
    rp = region_partition(b, nu, y)
    m = np.linspace(0.0, 3.0 * y / b, 2001)
    assert rp.partition_residual(m) <= 1e-14
    for chi in rp.cutoffs:
        v = chi(m)
        assert np.all(v >= -1e-15) and np.all(v <= 1.0 + 1e-15)


def test_regions_are_ordered_and_overlap():
    rp = region_partition(1.5, 0.5, 300.0)
    o1, o2, o3 = rp.omega1, rp.omega2, rp.omega3
    assert o1[0] < o2[0] < o1[1] < o2[1]
    assert o2[0] < o3[0] < o2[1] and o3[1] == math.inf
    # chi_1 lives in Omega_1 and chi_3 in Omega_3
    m = np.linspace(1.0, 600.0, 5000)
    assert np.all(rp.chi1(m)[m > o1[1]] == 0.0)
    assert np.all(rp.chi3(m)[m < o3[0]] == 0.0)


def test_chi2_derivatives_scale_with_window_width():
    # z = (b(m+nu) - y)/y^{1/3}, so d/dm carries b y^{-1/3}
    for alpha in (1, 2):
        s = [region_partition(1.0, 0.5, y).chi2_derivative_sup(alpha) * y ** (alpha / 3.0)
             for y in (1000.0, 8000.0)]
        assert s[1] == pytest.approx(s[0], rel=0.05)


def test_partition_needs_large_y():
    with pytest.raises(DomainError):
        region_partition(1.0, 0.5, 10.0)


def test_phase_s1_derivative():
    s = PhaseS1(1, -1, 1.5, 0.5)
    m = np.linspace(5.0, 100.0, 50)
    h = 1e-5
    fd = (s(m + h, 200.0, 0.7) - s(m - h, 200.0, 0.7)) / (2 * h)
    np.testing.assert_allclose(s.dm(m, 200.0, 0.7), fd, atol=1e-6)


# -- WKB amplitudes ---------------------------------------------------------

@pytest.mark.parametrize("mu,y", [(50.0, 100.0), (200.0, 400.0), (900.0, 1000.0), (10.0, 64.0)])
def test_wkb_reconstruction(mu, y):
    t = wkb_amplitudes_many([mu], y)
    ref = jv(mu, y)
    assert abs(t.reconstruct()[0] - ref) <= 0.03 * t.envelope()[0]
    # with the remainder folded into a_+ the representation is exact
    exact = wkb_amplitudes_many([mu], y, include_remainder=True)
    assert abs(exact.reconstruct()[0] - ref) <= 1e-12
    assert abs(t.reconstruct()[0] - exact.reconstruct()[0]) == pytest.approx(
        abs(exact.remainder[0]), rel=1e-6, abs=1e-14)


def test_wkb_amplitudes_are_conjugate_pair():
    ap, am = bessel_wkb_amplitudes(300.0, 500.0)
    assert abs(ap - am.conjugate()) <= 1e-12 * abs(ap)
    # leading order a_+ ~ e^{-i pi/4} (1 + mu/y)^{-1/4} / sqrt(2 pi)
    lead = complex(math.cos(math.pi / 4), -math.sin(math.pi / 4)) * 1.6 ** -0.25 / math.sqrt(2 * math.pi)
    assert abs(ap - lead) < 0.01 * abs(lead)


@pytest.mark.parametrize("mu,y", [(5.0, 4.0), (-1.0, 100.0), (99.0, 100.0)])
def test_wkb_regime_violations_are_named(mu, y):
    with pytest.raises(DomainError) as exc:
        wkb_regime_check(mu, y)
    assert any(s in str(exc.value) for s in ("y >=", "mu >=", "mu <=", "(y-mu)"))


# -- Gegenbauer decomposition ----------------------------------------------

@pytest.mark.parametrize("m,nu,phi,expected", [g for g in GEGENBAUER if g[0] >= 1])
def test_gegenbauer_reassembly_matches_oracle(m, nu, phi, expected):
    g = gegenbauer_decomposition_many([m], nu, phi)
    r = np.where(np.isnan(g.r), 0.0, g.r)
    val = g.g_plus * np.exp(1j * m * phi) + g.g_minus * np.exp(-1j * m * phi) + r
    assert abs(val[0] - expected) <= 1e-9 * max(1.0, f_nu1(m, nu))


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_gegenbauer_reassembly_sweep(nu):
    ms = np.arange(1, 201)
    for phi in (0.1, 0.9, 1.6, 2.5, 3.0):
        g = gegenbauer_decomposition_many(ms, nu, phi)
        ref = np.array([gegenbauer_scaled(int(m), nu, phi) for m in ms])
        assert g.converged
        assert np.max(np.abs(g.reassemble() - ref) / np.maximum(1.0, f_nu1(ms, nu))) <= 1e-7


def test_gegenbauer_middle_regime_remainder_is_tiny():
    g = gegenbauer_decomposition(80, 1.0, 1.5)
    assert in_middle_regime(1.5)
    assert abs(g.r) <= 1e-6
    assert abs(g.g_plus - np.conj(g.g_minus)) <= 1e-12


def test_gegenbauer_nu_zero_pieces():
    g = gegenbauer_decomposition(7, 0.0, 0.4)
    assert g.g_plus == pytest.approx(1.0 / 7.0)
    assert g.g_minus == pytest.approx(1.0 / 7.0)


def test_gegenbauer_non_integer_m_has_no_remainder_in_middle():
    g = gegenbauer_decomposition_many([10.5], 1.0, 1.5)
    assert np.isnan(g.r[0])


# -- amplitude tables -------------------------------------------------------

def test_symbol_ratio_stable_under_refinement():
    out = []
    for step, n in ((1.0, 16), (0.5, 32)):
        ms = np.arange(4.0, 120.0 + 1e-9, step)
        tab = amplitude_table("gplus", 1.0, 1.0, ms, [100.0], symbol_phi_grid(n, 120.0))
        out.append(symbol_estimate_ratio(tab, 0))
    assert np.isfinite(out).all()
    assert out[1] == pytest.approx(out[0], rel=0.1)


def test_fnu1_table_obeys_its_law():
    ms = np.arange(1.0, 50.0)
    tab = amplitude_table("fnu1", 1.0, 1.5, ms, [100.0], [0.5])
    for alpha in (0, 1, 2):
        assert symbol_estimate_ratio(tab, alpha) < 10.0


def test_symbol_ratio_input_checks():
    tab = AmplitudeTable("x", np.array([1.0, 2.0, 4.0, 5.0]), np.array([1.0]), np.array([0.0]),
                         np.ones((4, 1, 1)), lambda m, y, p, a: np.ones_like(m))
    with pytest.raises(DomainError):
        symbol_estimate_ratio(tab, 0)
    with pytest.raises(DomainError):
        symbol_estimate_ratio(tab, 3)


def test_table_csv(tmp_path):
    tab = amplitude_table("aplus", 1.0, 0.5, np.arange(10.0, 14.0), [200.0], [0.3])
    path = tmp_path / "t.csv"
    tab.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "kind,m,y,phi,re,im" and len(lines) == 5


# -- sum decomposition ------------------------------------------------------

@pytest.mark.parametrize("b,nu,y,phi", [(1.5, 0.5, 200.0, 1.0), (1.0, 0.0, 100.0, 0.3),
                                        (2.0, 1.0, 300.0, 2.0), (2.5, 0.5, 64.0, 0.7)])
def test_sum_decomposition_reassembles_series(b, nu, y, phi):
    p = SeriesParams(b, nu, y, phi)
    d = sum_decomposition(p)
    ref = script_i(p).value
    assert abs(d.total - ref) <= 1e-9 * max(1.0, abs(ref))
    assert d.total == pytest.approx(d.I1.sum() + d.I2.sum() + d.I3.sum() + d.R, abs=1e-14)
    assert remainder_R(p) == pytest.approx(d.R, abs=1e-12)


def test_remainder_decays_faster_than_series():
    vals = [abs(remainder_R(SeriesParams(1.5, 0.5, y, 1.0))) * y ** (0.75 + 1 / 3)
            for y in (64.0, 256.0, 1024.0)]
    assert max(vals) < 10.0


def test_sum_decomposition_needs_large_y():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(DomainError):
            sum_decomposition(SeriesParams(1.0, 0.5, 20.0, 1.0))
