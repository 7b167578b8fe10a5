import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import fdwave
from fdwave import _core

BACKENDS = _core.backends()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


def test_backend_name():
    assert fdwave.BACKEND in BACKENDS


@needs_cython
@given(st.lists(st.complex_numbers(max_magnitude=150, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=20))
def test_loggamma_equivalent(zs):
    z = np.array([w for w in zs if not (w.imag == 0 and w.real <= 0 and w.real == int(w.real))]
                 or [0.5 + 0j])
    py = BACKENDS["python"].loggamma_array(z)
    cy = BACKENDS["cython"].loggamma_array(z)
    assert np.allclose(py.real, cy.real, rtol=1e-13, atol=1e-13)
    d = (py.imag - cy.imag) / (2 * np.pi)
    assert np.allclose(d, np.round(d), atol=1e-12)


@needs_cython
@pytest.mark.parametrize("gamma, log_tau", [(0.5, 0.0), (0.3, 1.2), (0.9, -0.7)])
def test_mb_line_sum_equivalent(gamma, log_tau):
    args = ((0.0, 1.0), (0.5, -1.0), (1.0,), (-0.6,), gamma, log_tau, 0.05, 800)
    py = BACKENDS["python"].mb_line_sum(*args)
    cy = BACKENDS["cython"].mb_line_sum(*args)
    assert np.allclose(py, cy, rtol=1e-12, atol=1e-300)


@needs_cython
@pytest.mark.parametrize("log_tau", [-2.0, 0.0, 1.5])
def test_power_series_sum_equivalent(log_tau):
    from scipy import special as sp

    k = np.arange(300, dtype=float)
    logmag = -sp.gammaln(k + 1) - sp.gammaln(1 + 0.4 * k)
    sign = np.where(k % 2 == 1, -1.0, 1.0)
    py = BACKENDS["python"].power_series_sum(logmag, sign, k, log_tau, 1e-17, 0)
    cy = BACKENDS["cython"].power_series_sum(logmag, sign, k, log_tau, 1e-17, 0)
    assert py[2:] == cy[2:]
    assert py[0] == pytest.approx(cy[0], rel=1e-14) and py[1] == pytest.approx(cy[1], rel=1e-14)


def test_pure_python_fallback_selected_and_consistent():
    code = ("import json, fdwave;"
            "r = fdwave.g_eval((1.5, 0.75, 2), (1.0, 1.0));"
            "k = fdwave.kernel_phi(1.5, 0.6, 0.8);"
            "print(json.dumps([fdwave.BACKEND, r.value, k.value]))")
    env = dict(os.environ, FDWAVE_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env,
                          timeout=300)
    assert proc.returncode == 0, proc.stderr
    backend, g, k = json.loads(proc.stdout)
    assert backend == "python"
    assert g == pytest.approx(fdwave.g_eval((1.5, 0.75, 2), (1.0, 1.0)).value, rel=1e-10)
    assert k == pytest.approx(fdwave.kernel_phi(1.5, 0.6, 0.8).value, rel=1e-10)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_power_series_sum_overflow_is_not_converged(name):
    # finite terms near 1e308 whose running sum overflows
    k = np.arange(40, dtype=float)
    logmag = np.full(40, 709.0)
    sign = np.ones(40)
    total, biggest, used, converged = BACKENDS[name].power_series_sum(logmag, sign, 0 * k, 0.0, 1e-17, 0)
    assert not converged
    assert not math.isfinite(total) or not math.isfinite(biggest)
