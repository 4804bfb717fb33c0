"""Bound-verification harness: parameter sweeps, growth-exponent fits,
calibrated sup ratios and deterministic CSV/JSON reports.

A report is a ``violation`` when a fitted growth exponent exceeds the claimed
one by more than the target's margin, or when a sup ratio exceeds its frozen
calibration constant by more than 10%.  Calibration constants live in
``data/calibration.json`` and are produced by :func:`calibrate`.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from importlib import resources
from typing import Literal

import numpy as np

from . import __version__
from .asymptotics import remainder_R, sum_decomposition
from .errors import DomainError
from .kernel import KernelParams, kernel_1d, kernel_radial_k0
from .oscint import (SuiteParams, default_poisson_families, poisson_identity_report,
                     stationary_phase_suite)
from .series import SeriesParams, script_i, script_i_grid

Target = Literal["theorem14_i", "theorem14_ii", "pieces", "dispersive_1d", "dispersive_radial",
                 "sharpness", "poisson", "stationary_phase"]
Verdict = Literal["consistent", "violation", "inconclusive"]
TARGETS = ("theorem14_i", "theorem14_ii", "pieces", "dispersive_1d", "dispersive_radial",
           "sharpness", "poisson", "stationary_phase")

CALIBRATION_SLACK = 0.10
FIT_MIN_Y = 16.0
FLAG_FRACTION = 0.01


# ---------------------------------------------------------------------------
# grids and specs
# ---------------------------------------------------------------------------

def expand_grid(g) -> tuple[float, ...]:
    """A grid is a list of numbers or {"geom"|"lin": [lo, hi, count]}."""
    if isinstance(g, dict):
        if len(g) != 1:
            raise DomainError(f"grid spec must have exactly one key, got {sorted(g)}")
        (kind, args), = g.items()
        if kind not in ("geom", "lin") or len(args) != 3:
            raise DomainError(f"grid spec must be geom/lin with [lo, hi, count], got {g}")
        lo, hi, count = float(args[0]), float(args[1]), int(args[2])
        if count < 1:
            raise DomainError("grid count must be >= 1")
        pts = np.geomspace(lo, hi, count) if kind == "geom" else np.linspace(lo, hi, count)
        return tuple(float(v) for v in pts)
    return tuple(float(v) for v in g)


@dataclass(frozen=True)
class SweepSpec:
    target: str
    bs: tuple = ()
    nus: tuple = ()
    ys: tuple = ()
    phis: tuple = ()
    aks: tuple = ()
    ts: tuple = ()
    xs: tuple = ()
    n: int = 1
    epsilon: float = 0.1
    tol: float = 1e-8
    exponent_margin: float = 0.1

    def __post_init__(self):
        if self.target not in TARGETS:
            raise DomainError(f"unknown target {self.target!r}; choose from {', '.join(TARGETS)}")
        needs = {
            "theorem14_i": ("bs", "nus", "ys", "phis"), "theorem14_ii": ("bs", "nus", "ys", "phis"),
            "sharpness": ("nus", "ys"), "pieces": ("bs", "nus", "ys", "phis"),
            "dispersive_1d": ("aks", "ts", "xs"), "dispersive_radial": ("aks", "ts", "xs", "phis"),
        }.get(self.target, ())
        for name in needs:
            if len(getattr(self, name)) == 0:
                raise DomainError(f"{self.target} needs a non-empty '{name}' grid")
        if self.target == "theorem14_i":
            if any(b >= 2.0 or b <= 0.0 for b in self.bs):
                raise DomainError("theorem14_i covers 0 < b < 2")
            if any(b != 1.0 for b in self.bs) and not self.epsilon > 0.0:
                raise DomainError("theorem14_i needs epsilon > 0 when b != 1")
        if self.target == "sharpness" and any(b not in (1.0, 2.0) for b in self.bs):
            raise DomainError("sharpness probes need b in {1, 2}")

    @classmethod
    def default(cls, target: str) -> "SweepSpec":
        ys = expand_grid({"geom": [1.0, 256.0, 33]})
        phis = expand_grid({"lin": [0.0, math.pi, 65]})
        ts = expand_grid({"geom": [1e-3, math.pi / 2, 25]})
        xs = expand_grid({"lin": [-6.0, 6.0, 121]})
        if target == "theorem14_i":
            return cls(target, bs=(1.25, 1.5, 1.75), nus=(0.5, 1.0), ys=ys, phis=phis)
        if target == "theorem14_ii":
            return cls(target, bs=(2.5, 3.0), nus=(0.5, 1.0), ys=ys, phis=phis)
        if target == "sharpness":
            return cls(target, bs=(1.0, 2.0), nus=(0.0, 0.5, 1.0, 2.0),
                       ys=(0.0,) + expand_grid({"geom": [1e-2, 100.0, 32]}), phis=phis)
        if target == "pieces":
            return cls(target, bs=(1.5, 2.5), nus=(0.5,), ys=expand_grid({"geom": [64.0, 512.0, 4]}),
                       phis=(0.3, 1.0, 2.0))
        if target == "dispersive_1d":
            return cls(target, aks=((2.0, 0.0), (1.0, 0.5), (1.5, 0.25)), ts=ts, xs=xs)
        if target == "dispersive_radial":
            return cls(target, aks=((2.0, 0.0), (1.0, 0.0)), ts=expand_grid({"geom": [1e-2, math.pi / 2, 9]}),
                       xs=expand_grid({"lin": [0.0, 4.0, 9]}), phis=expand_grid({"lin": [0.0, math.pi, 9]}),
                       n=3)
        if target in ("poisson", "stationary_phase"):
            return cls(target, exponent_margin=0.03 if target == "stationary_phase" else 0.1)
        raise DomainError(f"unknown target {target!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        allowed = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - allowed)
        if unknown:
            raise DomainError(f"unknown sweep keys: {', '.join(unknown)}")
        if "target" not in d:
            raise DomainError("sweep spec needs a 'target'")
        base = cls.default(d["target"])
        kw = {f.name: getattr(base, f.name) for f in fields(cls)}
        for key, val in d.items():
            if key in ("bs", "nus", "ys", "phis", "ts", "xs"):
                kw[key] = expand_grid(val)
            elif key == "aks":
                kw[key] = tuple((float(a), float(k)) for a, k in val)
            else:
                kw[key] = val
        return cls(**kw)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = [list(p) if isinstance(p, tuple) else p for p in v] if isinstance(v, tuple) else v
        return out


@dataclass
class BoundReport:
    target: str
    grid_summary: dict
    sup_ratio: float
    fitted_exponent: float
    verdict: str
    rows: list = field(default_factory=list)
    groups: list = field(default_factory=list)
    calibration: dict = field(default_factory=dict)
    spec: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"target": self.target, "grid_summary": self.grid_summary,
                "sup_ratio": self.sup_ratio, "fitted_exponent": self.fitted_exponent,
                "verdict": self.verdict, "groups": self.groups, "rows": self.rows,
                "calibration": self.calibration, "spec": self.spec}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        return cls(d["target"], d["grid_summary"], d["sup_ratio"], d["fitted_exponent"], d["verdict"],
                   d.get("rows", []), d.get("groups", []), d.get("calibration", {}), d.get("spec", {}))


# ---------------------------------------------------------------------------
# calibration
# ---------------------------------------------------------------------------

def load_calibration() -> dict:
    try:
        text = resources.files("oscilla").joinpath("data/calibration.json").read_text()
    except (FileNotFoundError, OSError):
        return {}
    return json.loads(text).get("constants", {})


def _cal_key(target: str, **kw) -> str:
    return target + "|" + ",".join(f"{k}={float(v):g}" for k, v in sorted(kw.items()))


def fit_growth(xs, vals, x_min: float = 0.0) -> float:
    """Least-squares slope of log(vals) against log(xs) over xs >= x_min."""
    xs = np.asarray(xs, dtype=float)
    vals = np.asarray(vals, dtype=float)
    sel = (xs >= x_min) & (xs > 0.0) & (vals > 0.0)
    if sel.sum() < 3:
        return math.nan
    slope, _ = np.polyfit(np.log(xs[sel]), np.log(vals[sel]), 1)
    return float(slope)


def _group_verdict(fitted: float, claimed: float, margin: float, sup_ratio: float,
                   cal: float | None, flagged: int, total: int) -> str:
    if total and flagged > FLAG_FRACTION * total:
        return "inconclusive"
    if math.isfinite(fitted) and fitted > claimed + margin:
        return "violation"
    if cal is not None and sup_ratio > (1.0 + CALIBRATION_SLACK) * cal:
        return "violation"
    if not math.isfinite(fitted):
        return "inconclusive"
    return "consistent"


def _combine(verdicts) -> str:
    verdicts = list(verdicts)
    if "violation" in verdicts:
        return "violation"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "consistent"


# ---------------------------------------------------------------------------
# theorem sweeps
# ---------------------------------------------------------------------------

def _theorem_group(args):
    target, b, nu, ys, phis, eps, tol = args
    claimed = (1.0 - b) * nu if target == "theorem14_i" else (2.0 - b) * nu
    phis = np.asarray(phis, dtype=float)
    if target == "theorem14_i":
        phis = phis[phis <= math.pi - eps + 1e-12]
    rows, flagged = [], 0
    for y in ys:
        vals, errs, _, conv = script_i_grid(b, nu, float(y), phis, tol)
        flagged += int(np.sum(~conv))
        scale = (1.0 + abs(y)) ** (-claimed)
        for phi, v, e, c in zip(phis, vals, errs, conv):
            rows.append({"b": b, "nu": nu, "y": float(y), "phi": float(phi), "abs_value": float(abs(v)),
                         "ratio": float(abs(v)) * scale, "abs_error": float(e), "converged": bool(c)})
    return claimed, rows, flagged, int(len(ys) * phis.size)


def _run_groups(fn, jobs_args, jobs: int):
    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, jobs_args))
    return [fn(a) for a in jobs_args]


def _theorem_sweep(spec: SweepSpec, jobs: int, cal: dict) -> BoundReport:
    args = [(spec.target, b, nu, spec.ys, spec.phis, spec.epsilon, spec.tol)
            for b in spec.bs for nu in spec.nus]
    results = _run_groups(_theorem_group, args, jobs)
    rows, groups = [], []
    for (target, b, nu, *_), (claimed, grows, flagged, total) in zip(args, results):
        sups: dict = {}
        for r in grows:
            sups[r["y"]] = max(sups.get(r["y"], 0.0), r["abs_value"])
        fitted = fit_growth(list(sups), list(sups.values()), FIT_MIN_Y)
        sup_ratio = max(r["ratio"] for r in grows)
        key = _cal_key(target, b=b, nu=nu)
        verdict = _group_verdict(fitted, claimed, spec.exponent_margin, sup_ratio, cal.get(key),
                                 flagged, total)
        for r in grows:
            r["verdict"] = verdict
        rows.extend(grows)
        groups.append({"key": key, "b": b, "nu": nu, "claimed_exponent": claimed,
                       "fitted_exponent": fitted, "sup_ratio": sup_ratio, "flagged": flagged,
                       "verdict": verdict})
    return _assemble(spec, rows, groups, cal)


def _assemble(spec: SweepSpec, rows, groups, cal) -> BoundReport:
    worst = max(groups, key=lambda g: (g["fitted_exponent"] - g["claimed_exponent"])
                if math.isfinite(g["fitted_exponent"]) else -math.inf)
    summary = {"points": len(rows), "groups": len(groups)}
    for name in ("bs", "nus", "ys", "phis", "ts", "xs"):
        v = getattr(spec, name)
        if v:
            summary[name] = [min(v), max(v), len(v)]
    used = {g["key"]: cal[g["key"]] for g in groups if g["key"] in cal}
    return BoundReport(spec.target, summary, max(g["sup_ratio"] for g in groups),
                       worst["fitted_exponent"], _combine(g["verdict"] for g in groups),
                       rows, groups, used, spec.to_dict())


def sharpness_probe(b: float, nu: float, y_grid, phis=None, tol: float = 1e-10) -> BoundReport:
    """Check that |S| does not decay along the anchor families.

    b = 1: |S(1, nu; -iy; cos phi)| = 1 for all phi; b = 2: S(2, nu; -iy; -1) = 1.
    """
    if b not in (1.0, 2.0):
        raise DomainError(f"sharpness probes need b in {{1, 2}}, got {b}")
    if phis is None:
        phis = np.linspace(0.0, math.pi, 65)
    use = np.asarray(phis, dtype=float) if b == 1.0 else np.array([math.pi])
    rows = []
    for y in y_grid:
        vals, errs, _, conv = script_i_grid(b, nu, float(y), use, tol)
        dev = float(np.max(np.abs(vals - 1.0))) if b == 2.0 else float(np.max(np.abs(np.abs(vals) - 1.0)))
        rows.append({"b": b, "nu": nu, "y": float(y), "sup_abs": float(np.max(np.abs(vals))),
                     "deviation": dev, "converged": bool(np.all(conv))})
    worst = max(r["deviation"] for r in rows)
    verdict = "consistent" if worst <= 1e-6 else "violation"
    for r in rows:
        r["verdict"] = verdict
    fitted = fit_growth([r["y"] for r in rows], [r["sup_abs"] for r in rows], 1.0)
    group = {"key": _cal_key("sharpness", b=b, nu=nu), "b": b, "nu": nu, "claimed_exponent": 0.0,
             "fitted_exponent": fitted, "sup_ratio": max(r["sup_abs"] for r in rows),
             "max_deviation": worst, "verdict": verdict}
    spec = {"target": "sharpness", "bs": [b], "nus": [nu], "ys": [float(y) for y in y_grid]}
    return BoundReport("sharpness", {"points": len(rows), "groups": 1}, group["sup_ratio"], fitted,
                       verdict, rows, [group], {}, spec)


def _sharpness_sweep(spec: SweepSpec) -> BoundReport:
    reps = [sharpness_probe(b, nu, spec.ys, spec.phis) for b in spec.bs for nu in spec.nus]
    rows = [r for rep in reps for r in rep.rows]
    groups = [g for rep in reps for g in rep.groups]
    return _assemble(spec, rows, groups, {})


# ---------------------------------------------------------------------------
# decomposition pieces
# ---------------------------------------------------------------------------

def _pieces_sweep(spec: SweepSpec, cal: dict) -> BoundReport:
    rows, groups = [], []
    for b in spec.bs:
        for nu in spec.nus:
            grows = []
            for y in spec.ys:
                for phi in spec.phis:
                    p = SeriesParams(b, nu, float(y), float(phi))
                    d = sum_decomposition(p)
                    ref = script_i(p).value
                    big = (2.0 - b) * nu
                    grows.append({
                        "b": b, "nu": nu, "y": float(y), "phi": float(phi),
                        "rel_error": abs(d.total - ref) / max(abs(ref), 1e-300),
                        "I1_scaled": float(np.max(np.abs(d.I1))) * y ** (-big),
                        "I2_scaled": float(np.max(np.abs(d.I2))) * y ** (-big),
                        "I3_scaled": float(np.max(np.abs(d.I3))) * y ** (-big),
                        "R_abs": abs(d.R), "R_scaled": abs(d.R) * y ** (b * nu + 1.0 / 3.0)})
            claimed = -b * nu - 1.0 / 3.0
            ys = sorted({r["y"] for r in grows})
            rmax = [max(r["R_abs"] for r in grows if r["y"] == y) for y in ys]
            fitted = fit_growth(ys, rmax)
            sup_ratio = max(r["R_scaled"] for r in grows)
            key = _cal_key("pieces", b=b, nu=nu)
            verdict = _group_verdict(fitted if len(ys) >= 3 else claimed, claimed,
                                     spec.exponent_margin, sup_ratio, cal.get(key), 0, 0)
            if max(r["rel_error"] for r in grows) > 1e-3:
                verdict = "violation"
            for r in grows:
                r["verdict"] = verdict
            rows.extend(grows)
            groups.append({"key": key, "b": b, "nu": nu, "claimed_exponent": claimed,
                           "fitted_exponent": fitted, "sup_ratio": sup_ratio, "verdict": verdict})
    return _assemble(spec, rows, groups, cal)


def remainder_ladder(b: float, nu: float, ys, phis) -> np.ndarray:
    """|R(y, phi)| y^{b nu + 1/3} on a (y, phi) grid."""
    out = np.empty((len(ys), len(phis)))
    for i, y in enumerate(ys):
        for j, phi in enumerate(phis):
            out[i, j] = abs(remainder_R(SeriesParams(b, nu, float(y), float(phi)))) * y ** (b * nu + 1.0 / 3.0)
    return out


# ---------------------------------------------------------------------------
# dispersive sweeps
# ---------------------------------------------------------------------------

def _dispersive_1d_group(args):
    a, k, ts, xs = args
    x = np.asarray(xs, dtype=float)
    rows = []
    for t in ts:
        p = KernelParams(1, k, a, float(t))
        kv = np.abs(kernel_1d(p, x[:, None], x[None, :]))
        sup = float(kv.max())
        rows.append({"a": a, "k": k, "sigma": p.sigma, "t": float(t), "sup_abs": sup,
                     "ratio": sup * abs(t) ** p.sigma})
    return rows


def _dispersive_radial_group(args):
    a, n, ts, rs, phis = args
    rows = []
    cos_all = np.cos(np.asarray(phis, dtype=float))
    phi0 = math.pi / 3.0 if 1.0 < a < 2.0 else math.pi
    cosang = cos_all[cos_all >= math.cos(phi0) - 1e-12]
    for t in ts:
        p = KernelParams(n, 0.0, a, float(t))
        sup = 0.0
        for r in rs:
            for rp in rs:
                for c in cosang:
                    sup = max(sup, abs(kernel_radial_k0(p, float(r), float(rp), float(c))))
        rows.append({"a": a, "n": n, "sigma": p.sigma, "t": float(t), "sup_abs": sup,
                     "ratio": sup * abs(t) ** p.sigma})
    return rows


def dispersive_sweep(spec: SweepSpec, jobs: int = 1, cal: dict | None = None) -> BoundReport:
    """sup over space of |K_t| |t|^sigma on the t grid, per (a, k)."""
    cal = load_calibration() if cal is None else cal
    if spec.target == "dispersive_1d":
        args = [(a, k, spec.ts, spec.xs) for a, k in spec.aks]
        results = _run_groups(_dispersive_1d_group, args, jobs)
    elif spec.target == "dispersive_radial":
        args = [(a, spec.n, spec.ts, [abs(v) for v in spec.xs], spec.phis) for a, _ in spec.aks]
        results = _run_groups(_dispersive_radial_group, args, jobs)
    else:
        raise DomainError(f"dispersive_sweep needs a dispersive target, got {spec.target}")
    rows, groups = [], []
    for (a, k), grows in zip(spec.aks, results):
        sigma = grows[0]["sigma"]
        fitted = fit_growth([1.0 / r["t"] for r in grows], [r["sup_abs"] for r in grows])
        sup_ratio = max(r["ratio"] for r in grows)
        key = _cal_key(spec.target, a=a, k=k) if spec.target == "dispersive_1d" else \
            _cal_key(spec.target, a=a, n=spec.n)
        verdict = _group_verdict(fitted, sigma, spec.exponent_margin, sup_ratio, cal.get(key), 0, 0)
        for r in grows:
            r["verdict"] = verdict
        rows.extend(grows)
        groups.append({"key": key, "a": a, "k": k, "claimed_exponent": sigma, "fitted_exponent": fitted,
                       "sup_ratio": sup_ratio, "verdict": verdict})
    return _assemble(spec, rows, groups, cal)


def mehler_kernel(t: float, x, xp):
    """Kernel of exp(-itH) for H = (-d^2/dx^2 + x^2)/2."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    s = math.sin(t)
    return (2j * math.pi * s) ** -0.5 * np.exp(1j * ((x * x + xp * xp) * math.cos(t) - 2 * x * xp) / (2 * s))


def mehler_check(points) -> tuple[complex, float]:
    """Fit kernel_1d(a=2, k=0) = c * Mehler once; return (c, max relative misfit)."""
    ratios, pairs = [], []
    for t, x, xp in points:
        k = kernel_1d(KernelParams(1, 0.0, 2.0, float(t)), x, xp)
        m = complex(mehler_kernel(float(t), x, xp))
        ratios.append(k / m)
        pairs.append((k, m))
    c = complex(np.median(np.real(ratios)), np.median(np.imag(ratios)))
    misfit = max(abs(k - c * m) / abs(c * m) for k, m in pairs)
    return c, float(misfit)


# ---------------------------------------------------------------------------
# oscillatory-integral targets
# ---------------------------------------------------------------------------

def _poisson_sweep(spec: SweepSpec) -> BoundReport:
    rows = []
    for fam in default_poisson_families():
        rep = poisson_identity_report(fam, 60)
        rows.append({"family": fam.name, "q_max": 60, "residual": rep.residual,
                     "quadrature_error": rep.quadrature_error, "converged": rep.converged})
    worst = max(r["residual"] for r in rows)
    verdict = "consistent" if worst <= 1e-7 else "violation"
    for r in rows:
        r["verdict"] = verdict
    group = {"key": "poisson", "claimed_exponent": 0.0, "fitted_exponent": 0.0, "sup_ratio": worst,
             "verdict": verdict}
    return BoundReport("poisson", {"points": len(rows), "groups": 1}, worst, 0.0, verdict, rows,
                       [group], {}, spec.to_dict())


STATIONARY_CASES = (("a", {}), ("b", {"k": 2, "j": 0}), ("b", {"k": 3, "j": 0}), ("b", {"k": 2, "j": 2}),
                    ("c", {"variant": "i"}), ("c", {"variant": "ii"}),
                    ("d", {"nu": 0.5}), ("d", {"nu": 1.0}))


def _stationary_sweep(spec: SweepSpec) -> BoundReport:
    rows, groups = [], []
    for case, kw in STATIONARY_CASES:
        fit = stationary_phase_suite(case, SuiteParams(**kw))
        pred = fit.extra["predicted"]
        label = case + "".join(f",{k}={v}" for k, v in sorted(kw.items()))
        ok = abs(fit.fitted_exponent - pred) <= spec.exponent_margin and fit.converged
        extra = {}
        if case == "d":
            extra = {"scaled_sup": float(np.max(fit.extra["scaled_sup"])),
                     "top_decade_drift": fit.extra["top_decade_drift"]}
            ok = fit.extra["top_decade_drift"] <= 0.10 and fit.converged
        verdict = "consistent" if ok else "violation"
        for lam, mag in zip(fit.lambdas, fit.magnitudes):
            rows.append({"case": label, "lambda": float(lam), "magnitude": float(mag), "verdict": verdict})
        groups.append({"key": label, "claimed_exponent": pred, "fitted_exponent": fit.fitted_exponent,
                       "sup_ratio": extra.get("scaled_sup", 0.0), "verdict": verdict, **extra})
    worst = max(groups, key=lambda g: abs(g["fitted_exponent"] - g["claimed_exponent"]))
    return BoundReport("stationary_phase", {"points": len(rows), "groups": len(groups)},
                       max(g["sup_ratio"] for g in groups), worst["fitted_exponent"],
                       _combine(g["verdict"] for g in groups), rows, groups, {}, spec.to_dict())


def bound_sweep(spec: SweepSpec, jobs: int = 1, calibration: dict | None = None) -> BoundReport:
    """Run the sweep named by ``spec.target`` and render a verdict."""
    cal = load_calibration() if calibration is None else calibration
    if spec.target in ("theorem14_i", "theorem14_ii"):
        return _theorem_sweep(spec, jobs, cal)
    if spec.target == "sharpness":
        return _sharpness_sweep(spec)
    if spec.target == "pieces":
        return _pieces_sweep(spec, cal)
    if spec.target in ("dispersive_1d", "dispersive_radial"):
        return dispersive_sweep(spec, jobs, cal)
    if spec.target == "poisson":
        return _poisson_sweep(spec)
    return _stationary_sweep(spec)


def calibrate(targets=("theorem14_i", "theorem14_ii", "dispersive_1d", "dispersive_radial", "pieces"),
              jobs: int = 1) -> dict:
    """Sup ratios on the default grids, keyed like the report groups."""
    out = {}
    for t in targets:
        rep = bound_sweep(SweepSpec.default(t), jobs, calibration={})
        for g in rep.groups:
            out[g["key"]] = g["sup_ratio"]
    return out


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

CSV_COLUMNS = {
    "theorem14_i": ["b", "nu", "y", "phi", "abs_value", "ratio", "abs_error", "converged", "verdict"],
    "theorem14_ii": ["b", "nu", "y", "phi", "abs_value", "ratio", "abs_error", "converged", "verdict"],
    "sharpness": ["b", "nu", "y", "sup_abs", "deviation", "converged", "verdict"],
    "pieces": ["b", "nu", "y", "phi", "rel_error", "I1_scaled", "I2_scaled", "I3_scaled", "R_abs",
               "R_scaled", "verdict"],
    "dispersive_1d": ["a", "k", "sigma", "t", "sup_abs", "ratio", "verdict"],
    "dispersive_radial": ["a", "n", "sigma", "t", "sup_abs", "ratio", "verdict"],
    "poisson": ["family", "q_max", "residual", "quadrature_error", "converged", "verdict"],
    "stationary_phase": ["case", "lambda", "magnitude", "verdict"],
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, np.generic):
        return _json_safe(v.item())
    return v


def report_csv(r: BoundReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    cols = CSV_COLUMNS[r.target]
    wr.writerow(cols)
    for row in r.rows:
        wr.writerow([_fmt(row.get(c, "")) for c in cols])
    return buf.getvalue()


def report_json(r: BoundReport, timestamp: str | None = None) -> str:
    body = {"library": "oscilla", "version": __version__, **r.to_dict()}
    if timestamp is not None:
        body["generated"] = timestamp
    return json.dumps(_json_safe(body), indent=2, sort_keys=True) + "\n"


def default_timestamp() -> str:
    return time.strftime("%Y%m%dT%H%M%SZ", time.gmtime())


def emit_report(r: BoundReport, fmt: str, directory=".", timestamp: str | None = None) -> str:
    """Write ``{target}-{timestamp}.{fmt}`` and return its path."""
    if fmt not in ("csv", "json"):
        raise DomainError(f"format must be csv or json, got {fmt!r}")
    ts = timestamp or default_timestamp()
    path = os.path.join(str(directory), f"{r.target}-{ts}.{fmt}")
    text = report_csv(r) if fmt == "csv" else report_json(r, ts)
    try:
        os.makedirs(str(directory), exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path


def load_report(path) -> tuple[BoundReport, str | None]:
    """Parse a JSON report; returns the report and its timestamp."""
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read report {path}: {exc}") from exc
    return BoundReport.from_dict(d), d.get("generated")


__all__ = [
    "BoundReport", "SweepSpec", "TARGETS", "bound_sweep", "calibrate", "dispersive_sweep",
    "emit_report", "expand_grid", "fit_growth", "load_calibration", "load_report", "mehler_check",
    "mehler_kernel", "remainder_ladder", "report_csv", "report_json", "sharpness_probe",
]
