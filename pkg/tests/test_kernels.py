import os
import subprocess
import sys

import numpy as np
import pytest

from qtgrad import _quadkernel_py, kernels

try:
    from qtgrad import _quadkernel
except ImportError:
    _quadkernel = None

needs_ext = pytest.mark.skipif(_quadkernel is None,
                               reason="compiled kernel not built")


def _random_case(seed, n=64):
    rng = np.random.default_rng(seed)
    v = rng.uniform(0.5, 100.0, size=n)
    xs = rng.uniform(-10.0, 10.0, size=n)
    x = rng.uniform(-10.0, 10.0, size=n)
    g = 2.0 * v * (x - xs)
    return v, xs, x, g


def test_python_kernel_matches_dense_formulas():
    v, xs, x, g = _random_case(0)
    alpha = 0.01
    x1 = x.copy()
    g_new = np.empty_like(g)
    gy, yy, gg = _quadkernel_py.quad_step(v, xs, x1, g, g_new, alpha, 2.0)
    x_ref = x - alpha * g
    g_ref = 2.0 * v * (x_ref - xs)
    y_ref = g_ref - g
    np.testing.assert_allclose(x1, x_ref, rtol=1e-15)
    np.testing.assert_allclose(g_new, g_ref, rtol=1e-13)
    assert gy == pytest.approx(float(g @ y_ref), rel=1e-12)
    assert yy == pytest.approx(float(y_ref @ y_ref), rel=1e-12)
    assert gg == pytest.approx(float(g_ref @ g_ref), rel=1e-12)


def test_python_kernel_value_and_gradient():
    v, xs, x, _ = _random_case(1)
    out = np.empty_like(x)
    gg = _quadkernel_py.quad_gradient(v, xs, x, 2.0, out)
    np.testing.assert_allclose(out, 2.0 * v * (x - xs), rtol=1e-14)
    assert gg == pytest.approx(float(out @ out), rel=1e-12)
    assert _quadkernel_py.quad_value(v, xs, x, 1.0) == pytest.approx(
        float((x - xs) @ (v * (x - xs))), rel=1e-13)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    v, xs, x, g = _random_case(seed, n=137)
    alpha = 0.003 * (seed + 1)
    xa, ga = x.copy(), g.copy()
    xb, gb = x.copy(), g.copy()
    na, nb = np.empty_like(g), np.empty_like(g)
    ra = _quadkernel.quad_step(v, xs, xa, ga, na, alpha, 2.0)
    rb = _quadkernel_py.quad_step(v, xs, xb, gb, nb, alpha, 2.0)
    np.testing.assert_allclose(xa, xb, rtol=1e-15)
    np.testing.assert_allclose(na, nb, rtol=1e-13)
    for a, b in zip(ra, rb):
        assert a == pytest.approx(b, rel=1e-12)
    va = _quadkernel.quad_value(v, xs, xa, 0.5)
    vb = _quadkernel_py.quad_value(v, xs, xb, 0.5)
    assert va == pytest.approx(vb, rel=1e-12)


def test_backend_name_reports_known_value():
    assert kernels.backend_name() in ("cython", "numpy")


def test_env_var_forces_python_backend():
    env = dict(os.environ, QTGRAD_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from qtgrad import kernels; print(kernels.backend_name())"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


@needs_ext
def test_default_backend_is_compiled():
    env = {k: v for k, v in os.environ.items() if k != "QTGRAD_PURE_PYTHON"}
    out = subprocess.run(
        [sys.executable, "-c",
         "from qtgrad import kernels; print(kernels.backend_name())"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "cython"
