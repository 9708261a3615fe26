from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from realdyn import _kernels
from realdyn.families import chebyshev, hermite
from realdyn.ratmap import fixed_point_data, ratmap_new


def _coeffs(f):
    hp, hq = f.homogeneous()
    return np.array(hp, dtype=np.float64), np.array(hq, dtype=np.float64)


@pytest.mark.parametrize("f,k", [(chebyshev(2), 6), (hermite(3), 3), (ratmap_new([-1, 0, 2], [0, 1]), 4)])
def test_numba_and_numpy_paths_agree(f, k):
    if not _kernels.numba_enabled():
        pytest.skip("numba disabled")
    pc, qc = _coeffs(f)
    xs = np.linspace(-2.0, 2.0, 257)
    h0, d0 = _kernels.orbit_residual_numpy(pc, qc, xs, k)
    h1, d1 = _kernels._orbit_residual_jit(pc, qc, xs, k)
    np.testing.assert_allclose(h1, h0, rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(d1, d0, rtol=1e-12, atol=1e-300)


def test_residual_vanishes_at_fixed_points():
    pc, qc = _coeffs(chebyshev(2))
    xs = np.array([1.0, -0.5, 0.3])
    h, dh = _kernels.orbit_residual(pc, qc, xs, 1)
    assert abs(h[0]) < 1e-15 and abs(h[1]) < 1e-15 and abs(h[2]) > 0.1
    # sign of F'(x) relative to F: F = 2x^2 - x - 1, F'(1) = 3 > 0
    assert np.sign(dh[0]) == np.sign(3.0)


def test_env_flag_disables_numba(monkeypatch):
    monkeypatch.setenv("REALDYN_NO_NUMBA", "1")
    assert not _kernels.numba_enabled()
    monkeypatch.setenv("REALDYN_NO_NUMBA", "0")
    assert _kernels.numba_enabled() == _kernels._HAVE_NUMBA


def test_certificate_without_numba():
    code = (
        "from realdyn.families import chebyshev; from realdyn.ratmap import fixed_point_data; "
        "from realdyn import _kernels; assert not _kernels.numba_enabled(); "
        "print(fixed_point_data(chebyshev(2), 6).all_real)"
    )
    env = dict(os.environ, REALDYN_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "True"
    assert fixed_point_data(chebyshev(2), 6).all_real
