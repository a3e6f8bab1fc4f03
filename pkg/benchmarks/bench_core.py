"""Compare the compiled core with the numpy fallback.

Times each hot routine and a full kernel evaluation on the same inputs with
both backends, and reports the largest disagreement.

    python benchmarks/bench_core.py [--points 20000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from desitter import _backend, _core_py
from desitter.kernels import kernel_arrays, sample_phase_space
from desitter.transforms import Regime


def _best(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _diff(a, b):
    arrs_a = a if isinstance(a, tuple) else (a,)
    arrs_b = b if isinstance(b, tuple) else (b,)
    worst = 0.0
    for x, y in zip(arrs_a, arrs_b):
        x, y = np.asarray(x), np.asarray(y)
        if x.dtype == bool:
            continue
        worst = max(worst, float(np.max(np.abs(x - y) / np.maximum(np.abs(y), 1.0))))
    return worst


def cases(points: int):
    rng = np.random.default_rng(1)
    z_small = 8.0 * np.sqrt(rng.uniform(0, 1, points)) * np.exp(1j * rng.uniform(0, 2 * np.pi, points))
    z_large = 2j * rng.uniform(20.0, 80.0, points)
    z_from = 8.0j * np.ones(points // 4)
    z_to = 2j * rng.uniform(4.0, 20.0, points // 4)
    w0, dw0, _ = _core_py.kummer_series(0.25, 0.5, z_from, 400, 1e-17)
    x = rng.uniform(1e-3, 80.0, points)
    t, s, xi = sample_phase_space(points // 4, seed=2)
    return [
        ("kummer_series", lambda core: core.kummer_series(0.25, 0.5, z_small, 400, 1e-17)),
        ("asymptotic_sum", lambda core: core.asymptotic_sum(0.75, 0.25, z_large, 1e-15, 400)),
        ("kummer_continue", lambda core: core.kummer_continue(0.25, 0.5, z_from, w0, dw0, z_to, 2.0, 1e-15, 400)),
        ("bessel_01", lambda core: core.bessel_01(x, 12.0)),
        ("kernels_dissipation", lambda core: _with_core(core, lambda: kernel_arrays(Regime.DISSIPATION, 1.5, t, s, xi))),
        ("kernels_mass", lambda core: _with_core(core, lambda: kernel_arrays(Regime.MASS, 0.7, t, s, xi))),
        ("kernels_balanced", lambda core: _with_core(core, lambda: kernel_arrays(Regime.BALANCED, 0.0, t, s, xi))),
    ]


def _with_core(core, fn):
    saved = _backend.core
    _backend.core = core
    try:
        return fn()
    finally:
        _backend.core = saved


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    try:
        compiled = _backend.get("compiled")
    except ImportError:
        print("compiled core not built; nothing to compare")
        return 1
    print(f"{'routine':<22s} {'numpy [s]':>10s} {'compiled [s]':>13s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in cases(args.points):
        t_py, out_py = _best(lambda: fn(_core_py), args.repeat)
        t_c, out_c = _best(lambda: fn(compiled), args.repeat)
        print(f"{name:<22s} {t_py:10.4f} {t_c:13.4f} {t_py / t_c:8.1f} {_diff(out_py, out_c):10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
