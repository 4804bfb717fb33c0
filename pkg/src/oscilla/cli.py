"""Command-line interface.

Exit codes: 0 ok, 1 violation verdict, 2 usage error, 3 non-convergence.
Every command accepts ``--config FILE`` (a JSON object whose keys are the
command's long flags with dashes replaced by underscores); explicit flags
override config values and unknown keys are rejected.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from typing import Callable

import numpy as np

from . import __version__
from .errors import ConvergenceWarning, DomainError, NonConvergenceError

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors with the list of valid flags."""

    def error(self, message):
        flags = sorted({s for a in self._actions for s in a.option_strings if s.startswith("--")})
        raise UsageError(f"{self.prog}: {message}\nvalid flags: {' '.join(flags)}")


# numeric flag types; float() keeps full double precision

def _real(name: str, check: Callable[[float], bool] | None = None, what: str = ""):
    def conv(text):
        try:
            v = float(text)
        except (TypeError, ValueError):
            raise argparse.ArgumentTypeError(f"--{name} expects a number, got {text!r}")
        if not math.isfinite(v) or (check is not None and not check(v)):
            raise argparse.ArgumentTypeError(f"--{name} must be {what}, got {text}")
        return v
    conv.__name__ = name
    return conv


def _integer(name: str, lo: int = 0):
    def conv(text):
        try:
            v = int(str(text))
        except ValueError:
            raise argparse.ArgumentTypeError(f"--{name} expects an integer, got {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"--{name} must be >= {lo}, got {v}")
        return v
    conv.__name__ = name
    return conv


POS_B = _real("b", lambda v: v > 0.0, "> 0")
NU = _real("nu", lambda v: v >= 0.0, ">= 0")
PHI = _real("phi", lambda v: 0.0 <= v <= math.pi, "in [0, pi]")
TOL = _real("tol", lambda v: v > 0.0, "> 0")
A = _real("a", lambda v: v > 0.0, "> 0")


def _defaults_table() -> dict[str, dict]:
    return {
        "eval": {"b": None, "nu": None, "y": None, "phi": None, "tol": 1e-8},
        "bessel": {"order": None, "y": None, "method": "auto"},
        "gegenbauer": {"m": None, "nu": None, "phi": None},
        "decompose": {"b": None, "nu": None, "y": None, "phi": None},
        "check-poisson": {"q_max": 60, "family": None, "threshold": 1e-7},
        "check-stationary-phase": {"case": "b", "k": 2, "j": 0, "nu": 0.5, "variant": "i",
                                   "margin": 0.03},
        "sweep": {"target": None, "out_dir": ".", "format": "csv", "timestamp": None,
                  "epsilon": None, "tol": None},
        "kernel": {"n": 1, "k": 0.0, "a": 2.0, "t": None, "x": None, "xp": None, "cosangle": 1.0},
        "evolve": {"k": 0.0, "a": 2.0, "dt": None, "steps": 1, "nodes": 800, "x_max": None,
                   "shift": 0.0, "out_dir": ".", "stem": "evolve"},
        "report": {"input": None, "format": "csv", "out_dir": "."},
    }


def build_parser() -> argparse.ArgumentParser:
    sup = argparse.SUPPRESS
    top = _Parser(prog="oscilla", description="Oscillatory-sum numerics and bound verification.")
    top.add_argument("--version", action="version", version=f"oscilla {__version__}")
    sub = top.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_, description=help_, argument_default=sup)
        p.add_argument("--config", help="JSON file of flag values (flags override it)")
        p.add_argument("--jobs", type=_integer("jobs", 1),
                       help="worker processes (default: available cores)")
        return p

    p = cmd("eval", "Evaluate S(b, nu; -iy; cos phi).")
    p.add_argument("--b", type=POS_B, help="b > 0")
    p.add_argument("--nu", type=NU, help="nu >= 0")
    p.add_argument("--y", type=_real("y"), help="real y")
    p.add_argument("--phi", type=PHI, help="angle in [0, pi]")
    p.add_argument("--tol", type=TOL, help="absolute tolerance (default 1e-8)")

    p = cmd("bessel", "Evaluate J_order(y) with an error estimate.")
    p.add_argument("--order", type=_real("order", lambda v: v >= 0.0, ">= 0"), help="order >= 0")
    p.add_argument("--y", type=_real("y", lambda v: v >= 0.0, ">= 0"), help="argument >= 0")
    p.add_argument("--method", choices=("auto", "series", "schlafli", "ladder"), help="evaluation route")

    p = cmd("gegenbauer", "Weight (m+nu)C_m^nu(cos phi)/nu and its g+/g-/r decomposition.")
    p.add_argument("--m", type=_integer("m", 0), help="degree >= 0")
    p.add_argument("--nu", type=NU, help="nu >= 0")
    p.add_argument("--phi", type=PHI, help="angle in [0, pi]")

    p = cmd("decompose", "Split S into its region pieces I1, I2, I3 and R (needs y >= 64).")
    p.add_argument("--b", type=POS_B, help="b > 0")
    p.add_argument("--nu", type=NU, help="nu >= 0")
    p.add_argument("--y", type=_real("y", lambda v: v >= 64.0, ">= 64"), help="y >= 64")
    p.add_argument("--phi", type=PHI, help="angle in [0, pi]")

    p = cmd("check-poisson", "Truncated Poisson summation residual for the test families.")
    p.add_argument("--q-max", type=_integer("q-max", 1), help="truncation (default 60)")
    p.add_argument("--family", help="family name (default: all)")
    p.add_argument("--threshold", type=TOL, help="residual bound (default 1e-7)")

    p = cmd("check-stationary-phase", "Decay-exponent fit for a stationary-phase test case.")
    p.add_argument("--case", choices=("a", "b", "c", "d"), help="test case (default b)")
    p.add_argument("--k", type=_integer("k", 2), help="phase degeneracy order (case b)")
    p.add_argument("--j", type=_integer("j", 0), help="amplitude vanishing order (case b)")
    p.add_argument("--nu", type=NU, help="nu for case d")
    p.add_argument("--variant", choices=("i", "ii"), help="case c variant")
    p.add_argument("--margin", type=TOL, help="allowed |fitted - predicted| (default 0.03)")

    p = cmd("sweep", "Run a verification sweep and write a report file.")
    p.add_argument("--target", choices=_targets(), help="sweep target")
    p.add_argument("--out-dir", help="output directory (default .)")
    p.add_argument("--format", choices=("csv", "json"), help="report format (default csv)")
    p.add_argument("--timestamp", help="timestamp used in the file name")
    p.add_argument("--epsilon", type=_real("epsilon", lambda v: v >= 0.0, ">= 0"),
                   help="angular margin for theorem14_i")
    p.add_argument("--tol", type=TOL, help="series tolerance")

    p = cmd("kernel", "Evaluate the propagator kernel K_t.")
    p.add_argument("--n", type=_integer("n", 1), help="dimension (default 1)")
    p.add_argument("--k", type=_real("k", lambda v: v >= 0.0, ">= 0"), help="k >= 0 (default 0)")
    p.add_argument("--a", type=A, help="a > 0 (default 2)")
    p.add_argument("--t", type=_real("t", lambda v: v != 0.0, "nonzero"), help="time")
    p.add_argument("--x", type=_real("x"), help="x (radius when n >= 2)")
    p.add_argument("--xp", type=_real("xp"), help="x' (radius when n >= 2)")
    p.add_argument("--cosangle", type=_real("cosangle", lambda v: -1.0 <= v <= 1.0, "in [-1, 1]"),
                   help="cosine of the angle between x and x' (n >= 2)")

    p = cmd("evolve", "Evolve a shifted ground state in 1-D and write CSV frames.")
    p.add_argument("--k", type=_real("k", lambda v: v >= 0.0, ">= 0"), help="k >= 0 (default 0)")
    p.add_argument("--a", type=A, help="a > 0 (default 2)")
    p.add_argument("--dt", type=_real("dt", lambda v: v != 0.0, "nonzero"), help="time step")
    p.add_argument("--steps", type=_integer("steps", 1), help="number of steps (default 1)")
    p.add_argument("--nodes", type=_integer("nodes", 64), help="grid nodes, even (default 800)")
    p.add_argument("--x-max", type=_real("x-max", lambda v: v > 0.0, "> 0"), help="grid half-width (default: where the state is below 1e-9)")
    p.add_argument("--shift", type=_real("shift"), help="shift of the initial ground state")
    p.add_argument("--out-dir", help="output directory (default .)")
    p.add_argument("--stem", help="file name stem (default evolve)")

    p = cmd("report", "Re-emit a saved JSON report as CSV or JSON.")
    p.add_argument("--input", help="JSON report path")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p.add_argument("--out-dir", help="output directory (default .)")
    return top


def _targets():
    from .verify import TARGETS
    return TARGETS


def _subparser(parser, name):
    for a in parser._actions:
        if isinstance(a, argparse._SubParsersAction):
            return a.choices[name]
    raise KeyError(name)


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config: {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise UsageError(f"--config: {path} must hold a JSON object")
    return data


def _coerce_config(sub: argparse.ArgumentParser, key: str, value):
    """Run a config value through the same converter as its flag."""
    for a in sub._actions:
        if a.dest == key:
            if a.type is not None and not isinstance(value, (list, dict)):
                try:
                    value = a.type(repr(value) if isinstance(value, float) else str(value))
                except argparse.ArgumentTypeError as exc:
                    raise UsageError(f"--config: {exc}")
            if a.choices is not None and value not in a.choices:
                raise UsageError(f"--config: {key} must be one of {', '.join(map(str, a.choices))}")
            return value
    raise KeyError(key)


def parse_invocation(argv) -> tuple[str, dict, dict]:
    """(command, options, sweep_overrides).  Raises UsageError."""
    parser = build_parser()
    ns, rest = parser.parse_known_args(list(argv))
    if ns.command is None:
        raise UsageError("a command is required; choose from " + ", ".join(_defaults_table()))
    command = ns.command
    sub = _subparser(parser, command)
    if rest:
        sub.error("unrecognized arguments: " + " ".join(rest))
    flags = {k: v for k, v in vars(ns).items() if k != "command"}
    opts = dict(_defaults_table()[command])
    opts["jobs"] = os.cpu_count() or 1
    extra: dict = {}
    if "config" in flags:
        cfg = _load_config(flags["config"])
        sweep_keys = set()
        if command == "sweep":
            from dataclasses import fields

            from .verify import SweepSpec
            sweep_keys = {f.name for f in fields(SweepSpec)} - {"target", "epsilon", "tol"}
        valid = (set(opts) | sweep_keys) - {"config"}
        unknown = sorted(set(cfg) - valid)
        if unknown:
            raise UsageError(f"--config: unknown keys {', '.join(unknown)}; valid keys: "
                             + ", ".join(sorted(valid)))
        for key, val in cfg.items():
            if key in sweep_keys:
                extra[key] = val
            else:
                opts[key] = _coerce_config(sub, key, val)
    opts.update({k: v for k, v in flags.items() if k != "config"})
    missing = [k for k, v in opts.items() if v is None and k not in
               ("family", "timestamp", "epsilon", "tol", "x_max")]
    if missing:
        sub.error("missing required flag(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return command, opts, extra


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cx(z: complex) -> str:
    return f"{z.real:.15g} {z.imag:+.15g}i"


def _nonconv(what: str, **params):
    tup = ", ".join(f"{k}={v!r}" for k, v in params.items())
    raise NonConvergenceError(f"{what} did not converge at ({tup})")


def _run_eval(o, out):
    from .series import SeriesParams, evaluate
    p = SeriesParams(o["b"], o["nu"], o["y"], o["phi"], o["tol"])
    r = evaluate(p)
    if not r.converged:
        _nonconv("series", b=p.b, nu=p.nu, y=p.y, phi=p.phi)
    print(f"value {_cx(r.value)}", file=out)
    print(f"modulus {abs(r.value):.6f}", file=out)
    print(f"abs_error {r.abs_error:.3e}", file=out)
    print(f"terms {r.terms_used} ({r.m_cutoff_reason})", file=out)
    return EXIT_OK


def _run_bessel(o, out):
    from .specfun import bessel_j
    r = bessel_j(o["order"], o["y"], o["method"])
    if not r.converged:
        _nonconv("Bessel evaluation", order=o["order"], y=o["y"], method=o["method"])
    print(f"value {r.value.real:.17g}", file=out)
    print(f"abs_error {r.abs_error:.3e}", file=out)
    return EXIT_OK


def _run_gegenbauer(o, out):
    from .asymptotics import gegenbauer_decomposition
    from .specfun import gegenbauer_weight
    m, nu, phi = o["m"], o["nu"], o["phi"]
    print(f"weight {gegenbauer_weight(m, nu, phi):.17g}", file=out)
    if m >= 1:
        with warnings.catch_warnings():
            warnings.simplefilter("error", ConvergenceWarning)
            try:
                g = gegenbauer_decomposition(m, nu, phi)
            except ConvergenceWarning:
                _nonconv("Gegenbauer decomposition", m=m, nu=nu, phi=phi)
        print(f"g_plus {_cx(g.g_plus)}", file=out)
        print(f"g_minus {_cx(g.g_minus)}", file=out)
        print(f"r {complex(g.r).real:.17g}", file=out)
    return EXIT_OK


def _run_decompose(o, out):
    from .asymptotics import sum_decomposition
    from .series import SeriesParams, script_i
    p = SeriesParams(o["b"], o["nu"], o["y"], o["phi"])
    d = sum_decomposition(p)
    for s, v in zip(("++", "+-", "-+", "--"), d.I1):
        print(f"I1[{s}] {_cx(v)}", file=out)
    for s, v in zip(("+", "-"), d.I2):
        print(f"I2[{s}] {_cx(v)}", file=out)
    for s, v in zip(("+", "-"), d.I3):
        print(f"I3[{s}] {_cx(v)}", file=out)
    print(f"R {_cx(d.R)}", file=out)
    print(f"total {_cx(d.total)}", file=out)
    ref = script_i(p).value
    print(f"series {_cx(ref)}", file=out)
    print(f"rel_diff {abs(d.total - ref) / max(abs(ref), 1e-300):.3e}", file=out)
    return EXIT_OK


def _run_poisson(o, out):
    from .oscint import default_poisson_families, poisson_identity_report
    fams = default_poisson_families()
    if o["family"] is not None:
        fams = [f for f in fams if f.name == o["family"]]
        if not fams:
            names = ", ".join(f.name for f in default_poisson_families())
            raise UsageError(f"--family: unknown family {o['family']!r}; choose from {names}")
    status = EXIT_OK
    for fam in fams:
        rep = poisson_identity_report(fam, o["q_max"])
        if not rep.converged:
            _nonconv("Poisson quadrature", family=fam.name, q_max=o["q_max"])
        ok = rep.residual <= o["threshold"]
        print(f"{fam.name} residual {rep.residual:.3e} {'ok' if ok else 'violation'}", file=out)
        if not ok:
            status = EXIT_VIOLATION
    return status


def _run_stationary(o, out):
    from .oscint import SuiteParams, stationary_phase_suite
    sp = SuiteParams(nu=o["nu"], j=o["j"], k=o["k"], variant=o["variant"])
    fit = stationary_phase_suite(o["case"], sp)
    if not fit.converged:
        _nonconv("oscillatory quadrature", case=o["case"], k=o["k"], j=o["j"], nu=o["nu"])
    pred = fit.extra["predicted"]
    ok = abs(fit.fitted_exponent - pred) <= o["margin"]
    print(f"fitted {fit.fitted_exponent:.6f}", file=out)
    print(f"predicted {pred:.6f}", file=out)
    if o["case"] == "d":
        drift = fit.extra["top_decade_drift"]
        ok = drift <= 0.10
        print(f"scaled_sup {float(np.max(fit.extra['scaled_sup'])):.6f}", file=out)
        print(f"top_decade_drift {drift:.4f}", file=out)
    print("verdict " + ("consistent" if ok else "violation"), file=out)
    return EXIT_OK if ok else EXIT_VIOLATION


def _run_sweep(o, extra, out):
    from .verify import SweepSpec, bound_sweep, emit_report
    d = {"target": o["target"], **extra}
    for key in ("epsilon", "tol"):
        if o.get(key) is not None:
            d[key] = o[key]
    try:
        spec = SweepSpec.from_dict(d)
    except DomainError as exc:
        raise UsageError(f"sweep: {exc}")
    rep = bound_sweep(spec, jobs=o["jobs"])
    path = emit_report(rep, o["format"], o["out_dir"], o["timestamp"])
    print(f"verdict {rep.verdict}", file=out)
    print(f"sup_ratio {rep.sup_ratio:.6g}", file=out)
    print(f"fitted_exponent {rep.fitted_exponent:.6g}", file=out)
    print(f"wrote {path}", file=out)
    return EXIT_VIOLATION if rep.verdict == "violation" else EXIT_OK


def _run_kernel(o, out):
    from .kernel import KernelParams, kernel_1d, kernel_radial_k0
    p = KernelParams(o["n"], o["k"], o["a"], o["t"])
    if p.n == 1:
        v = complex(kernel_1d(p, o["x"], o["xp"]))
    else:
        v = kernel_radial_k0(p, o["x"], o["xp"], o["cosangle"])
    print(f"value {_cx(v)}", file=out)
    print(f"abs {abs(v):.15g}", file=out)
    print(f"sigma {p.sigma:.15g}", file=out)
    return EXIT_OK


def _run_evolve(o, out):
    from .kernel import (KernelParams, evolve_1d, evolve_trajectory, grid_function, ground_state,
                         unitary_normalization, write_evolution)
    if o["nodes"] % 2:
        raise UsageError("--nodes must be even")
    p = KernelParams(1, o["k"], o["a"], o["dt"])
    p = KernelParams(1, o["k"], o["a"], o["dt"], unitary_normalization(p))
    x_max = o["x_max"]
    if x_max is None:
        # ground state below 1e-9 at the edge
        x_max = (20.0 * p.a) ** (1.0 / p.a) + abs(o["shift"])
    u = grid_function(p, lambda x: ground_state(p, x - o["shift"]), o["nodes"], x_max)
    # edge and aliasing checks apply to the initial state; later frames reuse the matrix
    first = evolve_1d(u, p, o["dt"])
    frames = [u] + evolve_trajectory(first, p, o["dt"], o["steps"] - 1)
    times = [i * o["dt"] for i in range(len(frames))]
    path = write_evolution(frames, times, p, o["out_dir"], o["stem"])
    ratio = frames[-1].norm(2.0) / frames[0].norm(2.0)
    print(f"norm_ratio {ratio:.10f}", file=out)
    print(f"wrote {path}", file=out)
    return EXIT_OK


def _run_report(o, out):
    from .verify import emit_report, load_report
    rep, ts = load_report(o["input"])
    path = emit_report(rep, o["format"], o["out_dir"], ts)
    print(f"verdict {rep.verdict}", file=out)
    print(f"wrote {path}", file=out)
    return EXIT_VIOLATION if rep.verdict == "violation" else EXIT_OK


def execute(command: str, opts: dict, extra: dict | None = None, out=None) -> int:
    out = out or sys.stdout
    if command == "sweep":
        return _run_sweep(opts, extra or {}, out)
    table = {"eval": _run_eval, "bessel": _run_bessel, "gegenbauer": _run_gegenbauer,
             "decompose": _run_decompose, "check-poisson": _run_poisson,
             "check-stationary-phase": _run_stationary, "kernel": _run_kernel,
             "evolve": _run_evolve, "report": _run_report}
    return table[command](opts, out)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        command, opts, extra = parse_invocation(argv)
        return execute(command, opts, extra)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
