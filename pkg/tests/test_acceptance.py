"""Acceptance suite: thirteen numbered criteria at their stated tolerances.

Each test records one PASS/FAIL line; the lines are printed as they run
and repeated in the terminal summary.  Run alone with
``pytest tests/test_acceptance.py -v``.
"""
import math
import warnings

import numpy as np
import pytest

from oscilla.asymptotics import (amplitude_table, gegenbauer_decomposition_many, remainder_R,
                                 sum_decomposition, symbol_estimate_ratio, symbol_phi_grid,
                                 wkb_amplitudes_many)
from oscilla.kernel import (AliasingWarning, KernelParams, evolve_1d, grid_function,
                            group_law_check, mixed_norm, symmetric_trajectory,
                            unitary_normalization)
from oscilla.oscint import (SuiteParams, default_poisson_families, poisson_identity_report,
                            stationary_phase_suite)
from oscilla.series import SeriesParams, script_i, script_i_grid
from oscilla.specfun import bessel_j, bessel_j_ladder, bessel_j_values, f_nu1, gegenbauer_scaled
from oscilla.verify import (SweepSpec, bound_sweep, dispersive_sweep, fit_growth, load_calibration,
                            mehler_check)

RESULTS: dict[int, str] = {}

# y in [0, 100]: the origin plus 32 geometric points
Y_GRID = np.concatenate([[0.0], np.geomspace(1e-2, 100.0, 32)])
PHI_GRID = np.linspace(0.0, math.pi, 65)


def record(n: int, ok: bool, detail: str, capsys=None):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


def test_criterion_01_b_one_modulus(capsys):
    worst = 0.0
    for nu in (0.0, 0.5, 1.0, 2.0):
        for y in Y_GRID:
            vals, _, _, conv = script_i_grid(1.0, nu, float(y), PHI_GRID)
            assert conv.all()
            worst = max(worst, float(np.max(np.abs(np.abs(vals) - 1.0))))
    record(1, worst <= 1e-6, f"max ||S| - 1| = {worst:.2e} (tol 1e-6)", capsys)


def test_criterion_02_b_two_antipodal(capsys):
    worst = 0.0
    for nu in (0.25, 0.75, 1.5):
        for y in Y_GRID:
            worst = max(worst, abs(script_i(SeriesParams(2.0, nu, float(y), math.pi)).value - 1.0))
    record(2, worst <= 1e-6, f"max |S - 1| = {worst:.2e} (tol 1e-6)", capsys)


def test_criterion_03_origin(capsys):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        b, nu, phi = rng.uniform(0.1, 4.0), rng.uniform(0.0, 3.0), rng.uniform(0.0, math.pi)
        worst = max(worst, abs(script_i(SeriesParams(b, nu, 0.0, phi)).value - 1.0))
    record(3, worst <= 1e-12, f"max |S - 1| = {worst:.2e} (tol 1e-12)", capsys)


def test_criterion_04_growth_exponents(capsys):
    msgs, ok = [], True
    for target, bs in (("theorem14_i", [1.25, 1.5, 1.75]), ("theorem14_ii", [2.5, 3.0])):
        spec = SweepSpec.from_dict({"target": target, "bs": bs, "nus": [0.5, 1.0], "epsilon": 0.1})
        rep = bound_sweep(spec)
        for g in rep.groups:
            good = g["fitted_exponent"] <= g["claimed_exponent"] + 0.1
            ok &= good
            msgs.append(f"{g['key'].split('|')[1]}:{g['fitted_exponent']:.3f}<={g['claimed_exponent'] + 0.1:.3f}")
    record(4, ok, "fitted slopes " + " ".join(msgs), capsys)


def test_criterion_05_poisson(capsys):
    res = {f.name: poisson_identity_report(f, 60).residual for f in default_poisson_families()}
    worst = max(res.values())
    record(5, worst <= 1e-7 and len(res) == 3, f"max residual {worst:.2e} (tol 1e-7)", capsys)


def test_criterion_06_stationary_phase(capsys):
    ok, parts = True, []
    for k, j in ((2, 0), (3, 0), (2, 2)):
        fit = stationary_phase_suite("b", SuiteParams(k=k, j=j))
        pred = -(j + 1.0) / k
        ok &= abs(fit.fitted_exponent - pred) <= 0.03
        parts.append(f"({k},{j}):{fit.fitted_exponent:.4f}/{pred:.4f}")
    lams = tuple(np.geomspace(10.0, 1e4, 13))
    for nu in (0.5, 1.0):
        fit = stationary_phase_suite("d", SuiteParams(nu=nu, lambdas=lams))
        sup = np.asarray(fit.extra["scaled_sup"])
        drift = fit.extra["top_decade_drift"]
        ok &= bool(np.all(np.isfinite(sup))) and drift <= 0.10
        parts.append(f"model nu={nu}: sup {sup.max():.3f} drift {drift:+.3f}")
    record(6, ok, "; ".join(parts), capsys)


def test_criterion_07_bessel(capsys):
    mus, ys = np.linspace(0.0, 12.0, 25), np.linspace(2.0, 16.0, 29)
    overlap = max(abs(bessel_j(m, y, "series").value - bessel_j(m, y, "schlafli").value)
                  for m in mus for y in ys)
    rng = np.random.default_rng(7)
    ladder = 0.0
    for _ in range(200):
        b, nu, y = rng.uniform(0.25, 3.0), rng.uniform(0.0, 3.0), rng.uniform(0.05, 300.0)
        m_max = int(rng.integers(5, 80))
        lad = bessel_j_ladder(b, nu, y, m_max)
        ladder = max(ladder, float(np.max(np.abs(lad - bessel_j_values(b * (np.arange(m_max + 1) + nu), y)))))
    mu_s, y_s = np.meshgrid(np.linspace(0.0, 60.0, 61), np.geomspace(8.0, 2000.0, 80))
    airy = float(np.max(np.abs(bessel_j_values(mu_s.ravel(), y_s.ravel())) * y_s.ravel() ** (1 / 3)))
    ok = overlap <= 1e-9 and ladder <= 1e-9 and airy <= 1.0
    record(7, ok, f"overlap {overlap:.1e}, ladder {ladder:.1e}, sup |J| y^(1/3) = {airy:.4f}", capsys)


def test_criterion_08_wkb(capsys):
    def rel(mu, y):
        t = wkb_amplitudes_many([mu], y)
        return abs(t.reconstruct()[0] - bessel_j_values(mu, y)) / t.envelope()[0]

    fixed = max(rel(mu, y) for mu, y in ((50.0, 100.0), (200.0, 400.0), (900.0, 1000.0)))
    rng = np.random.default_rng(8)
    rand = 0.0
    for _ in range(50):
        y = float(rng.uniform(64.0, 1000.0))
        rand = max(rand, rel(float(rng.uniform(1.0, y - 0.5 * y ** (1 / 3))), y))
    record(8, max(fixed, rand) <= 0.03, f"fixed {fixed:.2e}, random {rand:.2e} (tol 3e-2)", capsys)


def test_criterion_09_gegenbauer(capsys):
    ms = np.arange(1, 201)
    worst = 0.0
    for nu in (0.5, 1.0, 2.0):
        ref_scale = np.maximum(1.0, f_nu1(ms, nu))
        for phi in np.linspace(0.05, math.pi - 0.05, 12):
            g = gegenbauer_decomposition_many(ms, nu, phi)
            ref = np.array([gegenbauer_scaled(int(m), nu, phi) for m in ms])
            worst = max(worst, float(np.max(np.abs(g.reassemble() - ref) / ref_scale)))
    drift = 0.0
    finite = True
    for nu in (0.5, 1.0, 2.0):
        for kind in ("gplus", "gminus"):
            r = []
            for step, n in ((1.0, 16), (0.5, 32)):
                tab = amplitude_table(kind, 1.0, nu, np.arange(4.0, 400.0 + 1e-9, step), [100.0],
                                      symbol_phi_grid(n, 400.0))
                r.append(symbol_estimate_ratio(tab, 0))
            finite &= all(math.isfinite(v) for v in r)
            drift = max(drift, abs(r[1] / r[0] - 1.0))
    ok = worst <= 1e-7 and finite and drift <= 0.10
    record(9, ok, f"reassembly {worst:.1e} (tol 1e-7), symbol ratio change {drift:.3f} (tol 0.10)", capsys)


def test_criterion_10_decomposition(capsys):
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(20):
        b, nu = rng.uniform(0.75, 2.75), rng.uniform(0.0, 1.5)
        y, phi = float(np.exp(rng.uniform(math.log(64), math.log(512)))), rng.uniform(0.0, math.pi)
        p = SeriesParams(b, nu, y, phi)
        ref = script_i(p).value
        worst = max(worst, abs(sum_decomposition(p).total - ref) / abs(ref))
    ladder = 64.0 * 2.0 ** np.arange(6)
    sup, slope = 0.0, -math.inf
    for b, nu in ((1.5, 0.5), (1.0, 1.0), (2.5, 0.5)):
        for phi in (0.0, 1.2, math.pi):
            vals = [abs(remainder_R(SeriesParams(b, nu, float(y), phi))) * y ** (b * nu + 1 / 3)
                    for y in ladder]
            sup = max(sup, max(vals))
            slope = max(slope, fit_growth(ladder, vals, 0.0))
    ok = worst <= 1e-3 and sup < 10.0 and slope <= 0.1
    record(10, ok, f"rel err {worst:.1e} (tol 1e-3), sup |R| y^(b nu+1/3) = {sup:.3f}, "
                   f"max ladder slope {slope:+.3f}", capsys)


def test_criterion_11_dispersive(capsys):
    rep = dispersive_sweep(SweepSpec.default("dispersive_1d"))
    cal = load_calibration()
    within = all(g["sup_ratio"] <= 1.1 * cal[g["key"]] for g in rep.groups)
    rng = np.random.default_rng(11)
    pts = [(rng.uniform(0.01, 3.0), *rng.uniform(-4.0, 4.0, 2)) for _ in range(10)]
    c, misfit = mehler_check(pts)
    ok = within and len(rep.groups) == 3 and misfit <= 1e-8
    sups = ", ".join(f"{g['key'].split('|')[1]}:{g['sup_ratio']:.4f}" for g in rep.groups)
    record(11, ok, f"sup ratios {sups}; Mehler constant {complex(c).real:.6f} misfit {misfit:.1e}", capsys)


def test_criterion_12_unitarity(capsys):
    ok, parts = True, []
    for k, a in ((0.0, 2.0), (0.5, 1.0), (0.25, 1.5)):
        p = KernelParams(1, k, a, 0.5)
        p = KernelParams(1, k, a, 0.5, unitary_normalization(p))
        f = lambda x: (1 + x) * np.exp(-np.abs(x) ** a / a - 0.3 * x * x)
        u0 = grid_function(p, f, 800, 9.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AliasingWarning)
            ratios = [evolve_1d(u0, p, t).norm() / u0.norm() for t in (0.1, 0.4, 0.8)]
            gl = group_law_check(f, p, 0.3, 0.5)
        spread = max(ratios) - min(ratios)
        ok &= spread <= 0.01 and all(abs(r - 1) <= 0.01 for r in ratios) and gl.ok
        parts.append(f"(a={a},k={k}) spread {spread:.1e} group {gl.defect:.1e}/{2 * gl.budget:.1e}")
    record(12, ok, "; ".join(parts), capsys)


def test_criterion_13_global_time(capsys):
    p = KernelParams(1, 0.0, 2.0, 0.25)
    p = KernelParams(1, 0.0, 2.0, 0.25, unitary_normalization(p))
    u0 = grid_function(p, lambda x: np.exp(-x * x / 2), 400, 9.0)
    norms = []
    for T in (1.0, 2.0, 4.0, 8.0):
        times, frames = symmetric_trajectory(u0, p, T, 0.25)
        norms.append(mixed_norm(frames, times, 8.0, 4.0))
    growth = [n2 / n1 / 2 ** (1 / 8) - 1.0 for n1, n2 in zip(norms, norms[1:])]
    ok = all(abs(g) <= 0.10 for g in growth)
    record(13, ok, "doubling ratio / 2^(1/8) - 1 = " + ", ".join(f"{g:+.4f}" for g in growth), capsys)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
