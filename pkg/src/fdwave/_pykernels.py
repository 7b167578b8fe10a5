"""Pure NumPy implementations of the hot inner loops.

Selected by :mod:`fdwave._core` when the compiled ``_ckernels`` module is
unavailable or ``FDWAVE_PURE_PYTHON`` is set. Both implementations share
signatures and stopping rules; results agree to rounding.
"""

from __future__ import annotations

import math

import numpy as np

LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)


def _lanczos(z):
    # valid for Re z >= 0.5; returns the principal branch there
    zz = z - 1.0
    acc = np.full_like(zz, LANCZOS_COEF[0])
    for i in range(1, len(LANCZOS_COEF)):
        acc = acc + LANCZOS_COEF[i] / (zz + i)
    t = zz + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (zz + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi(z):
    # log sin(pi z) modulo 2 pi i, without overflow for large |Im z|
    out = np.empty_like(z)
    y = z.imag
    up = y > 0
    down = y < 0
    flat = ~(up | down)
    if up.any():
        zu = z[up]
        out[up] = -1j * math.pi * zu + np.log(-np.expm1(2j * math.pi * zu)) + np.log(0.5j)
    if down.any():
        zd = np.conj(z[down])
        out[down] = np.conj(-1j * math.pi * zd + np.log(-np.expm1(2j * math.pi * zd)) + np.log(0.5j))
    if flat.any():
        with np.errstate(divide="ignore"):
            out[flat] = np.log(np.sin(math.pi * z[flat].real) + 0j)
    return out


def loggamma_array(z):
    """log Gamma(z) elementwise; imaginary part only defined modulo 2 pi."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos(z[right])
    left = ~right
    if left.any():
        zl = z[left]
        out[left] = LOG_PI - _log_sin_pi(zl) - _lanczos(1.0 - zl)
    return out


def _is_pole(x):
    return x.imag == 0.0 and x.real <= 0.0 and x.real == math.floor(x.real)


def mb_line_sum(num_off, num_slope, den_off, den_slope, gamma, log_tau, h, n):
    """Half-line trapezoid sum of Re[K(gamma+iu) tau^(-gamma-iu)], u = 0..n*h.

    Returns ``(weighted_sum, |f(n*h)|, weighted_abs_sum)``; node 0 has weight 1/2.
    """
    u = h * np.arange(n + 1, dtype=float)
    s = gamma + 1j * u
    logf = -s * log_tau
    zero0 = False
    for a, A in zip(num_off, num_slope):
        logf = logf + loggamma_array(a + A * s)
    for b, B in zip(den_off, den_slope):
        arg = b + B * s
        if _is_pole(arg[0]):
            zero0 = True
            arg = arg.copy()
            arg[0] = 0.5
        logf = logf - loggamma_array(arg)
    f = np.exp(logf)
    if zero0:
        f[0] = 0.0
    w = np.ones(n + 1)
    w[0] = 0.5
    return float(np.dot(w, f.real)), float(abs(f[-1])), float(np.dot(w, np.abs(f)))


def _fsum(x) -> float:
    try:
        return math.fsum(x)
    except OverflowError:
        # the compiled kernel's compensated sum overflows to +-inf here
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.sum(x))


def power_series_sum(logmag, sign, expo, log_tau, rel_stop, k_min):
    """Sum sign_k * exp(logmag_k + expo_k * log_tau) with a run-length stop.

    Stops after three consecutive non-zero terms below ``rel_stop`` times the
    partial sum (index >= ``k_min``). Returns
    ``(sum, max_abs_term, n_used, converged)``.
    """
    logmag = np.asarray(logmag, dtype=float)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        terms = np.where(np.isneginf(logmag), 0.0,
                         np.asarray(sign, dtype=float) * np.exp(logmag + np.asarray(expo) * log_tau))
    if terms.size == 0:
        return 0.0, 0.0, 0, False
    if not np.all(np.isfinite(terms)):
        bad = int(np.argmax(~np.isfinite(terms)))
        return _fsum(terms[:bad]), math.inf, bad, False
    with np.errstate(over="ignore", invalid="ignore"):
        partial = np.cumsum(terms)
    if not np.all(np.isfinite(partial)):
        # finite terms whose running sum overflows
        bad = int(np.argmax(~np.isfinite(partial)))
        return float(partial[bad]), math.inf, bad, False
    mag = np.abs(terms)
    live = ~np.isneginf(logmag)
    small = (mag <= rel_stop * np.abs(partial)) | (mag < 1e-300)
    run = 0
    stop = -1
    for k in np.nonzero(live)[0]:
        if k < k_min:
            continue
        if small[k]:
            run += 1
            if run >= 3:
                stop = int(k)
                break
        else:
            run = 0
    if stop < 0:
        return _fsum(terms), float(mag.max()), terms.size, False
    used = terms[: stop + 1]
    return _fsum(used), float(mag[: stop + 1].max()), stop + 1, True
