import importlib.util
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from desitter import BACKEND, _backend, _core_py

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_core.py"

try:
    compiled = _backend.get("compiled")
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled core not built")


def _load_bench():
    spec = importlib.util.spec_from_file_location("bench_core", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def _backend_in_subprocess(env_value):
    env = dict(os.environ, DESITTER_BACKEND=env_value)
    out = subprocess.run([sys.executable, "-c", "import desitter; print(desitter.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_forces_fallback():
    assert _backend_in_subprocess("python") == "python"


@needs_compiled
def test_compiled_is_default():
    assert BACKEND == "compiled"
    assert _backend_in_subprocess("") == "compiled"


def test_get_by_name():
    assert _backend.get("python") is _core_py
    assert _backend.get() is _backend.core
    with pytest.raises(ValueError):
        _backend.get("fortran")


@needs_compiled
@pytest.mark.parametrize("name", [n for n, _ in _load_bench().cases(64)])
def test_backends_agree(name):
    bench = _load_bench()
    fn = dict(bench.cases(400))[name]
    assert bench._diff(fn(_core_py), fn(compiled)) < 1e-11


@needs_compiled
def test_swap_restores_core():
    bench = _load_bench()
    saved = _backend.core
    bench._with_core(_core_py, lambda: None)
    assert _backend.core is saved


@needs_compiled
def test_benchmark_runs(capsys):
    assert _load_bench().main(["--points", "200", "--repeat", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 8
    assert all(float(line.split()[-1]) < 1e-11 for line in lines[1:])


def test_fallback_bessel_matches_scipy():
    special = pytest.importorskip("scipy.special")
    x = np.linspace(0.05, 60.0, 500)
    j0, j1, y0, y1 = _core_py.bessel_01(x, 12.0)
    for ours, ref in ((j0, special.j0(x)), (y0, special.y0(x)), (j1, special.j1(x)), (y1, special.y1(x))):
        assert np.max(np.abs(ours - ref)) < 5e-12
