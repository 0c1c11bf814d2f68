import os
import subprocess
import sys

import numpy as np
import pytest

from polybif import _kernels_py, kernels

try:
    from polybif import _kernels_c
except ImportError:
    _kernels_c = None

needs_ext = pytest.mark.skipif(_kernels_c is None, reason="compiled extension not built")


def _block(mod):
    c = np.linspace(0.5, 2.2, 64)
    coeffs = np.ascontiguousarray(np.stack([2.658 - c, np.zeros_like(c), -c], axis=1))
    out = np.empty((64, 7))
    esc = mod.iterate_block(coeffs, np.zeros(64), 40, 7, 1e6, out)
    return esc, out


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_ext
def test_iterate_block_parity():
    e1, o1 = _block(_kernels_py)
    e2, o2 = _block(_kernels_c)
    assert e1 == e2
    assert np.array_equal(o1, o2, equal_nan=True)


@needs_ext
def test_orbit_jet_parity():
    a = np.array([1.0, 0.0, -1.9])
    da = np.array([0.0, 0.0, -1.0])
    for x in np.linspace(-1, 1, 25):
        c1, c2 = np.empty(3), np.empty(3)
        r1 = _kernels_py.orbit_jet(a, da, float(x), 3, c1)
        r2 = _kernels_c.orbit_jet(a, da, float(x), 3, c2)
        assert r1 == pytest.approx(r2, rel=1e-14, abs=1e-15)
        assert np.allclose(c1, c2, rtol=1e-15, atol=0)


def test_escape_marks_rows_nan():
    coeffs = np.array([[1.0, 0.0, -3.0], [1.0, 0.0, -1.0]])
    out = np.empty((2, 3))
    esc = kernels.iterate_block(coeffs, np.zeros(2), 50, 3, 1e6, out)
    assert esc == 1
    assert np.isnan(out[0]).all() and np.isfinite(out[1]).all()


def test_env_var_forces_fallback():
    env = dict(os.environ, POLYBIF_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from polybif import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
