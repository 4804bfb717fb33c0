"""Time the numba kernels against their numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

The per-kernel table calls both implementations in this process.  With
--end-to-end the series sweep is also run in two subprocesses, one with
OSCILLA_DISABLE_NUMBA=1, so import-time selection is exercised as well.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from oscilla import _accel
from oscilla import _kernels as _k


def cases():
    rng = np.random.default_rng(0)
    mu = rng.uniform(0, 60, 2000)
    y = rng.uniform(8, 900, 2000)
    t = np.cos(np.linspace(0, np.pi, 65))
    cr = rng.normal(size=600) * np.exp(-np.arange(600) / 80)
    ci = rng.normal(size=600) * np.exp(-np.arange(600) / 80)
    fr = np.linspace(0, 0.9, 8)
    return {
        "j_many (2000 Schlafli)": lambda f: f["j_many"](mu, y, _k.METHOD_SCHLAFLI),
        "miller_many (8 x 400)": lambda f: f["miller_many"](fr, 400, 250.0, 700),
        "gegen_weights (600 x 65)": lambda f: f["gegen_weights"](600, 1.0, t),
        "series_accumulate (600 x 65)": lambda f: f["series_accumulate"](cr, ci, 1.0, t, 1.0, 1e-14, 500, 8),
    }


_E2E = """
import time
from oscilla.series import script_i_grid
import numpy as np
phis = np.linspace(0, np.pi, 65)
script_i_grid(1.5, 0.5, 10.0, phis)
t0 = time.perf_counter()
for y in np.geomspace(1, 256, 33):
    script_i_grid(1.5, 1.0, float(y), phis)
print(time.perf_counter() - t0)
"""


def end_to_end(disable: bool) -> float:
    env = dict(os.environ)
    env.pop(_accel.DISABLE_ENV, None)
    if disable:
        env[_accel.DISABLE_ENV] = "1"
    out = subprocess.run([sys.executable, "-c", _E2E], env=env, capture_output=True, text=True,
                         check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)

    fast, ref = _k.active_backend(), _k.numpy_backend()
    print(f"active backend: {_accel.backend()}")
    print(f"{'kernel':32s} {'active ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, call in cases().items():
        call(fast)  # compile outside the timing
        a = min(timeit.repeat(lambda: call(fast), number=1, repeat=args.repeat)) * 1e3
        b = min(timeit.repeat(lambda: call(ref), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:32s} {a:10.3f} {b:10.3f} {b / a:8.1f}")
    if args.end_to_end:
        on, off = end_to_end(False), end_to_end(True)
        print(f"series sweep 33 y x 65 phi: numba {on:.3f} s, numpy {off:.3f} s, speedup {off / on:.1f}")


if __name__ == "__main__":
    main()
