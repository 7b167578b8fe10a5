# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot inner loops in :mod:`fdwave._pykernels`."""

import numpy as np
from libc.math cimport M_PI, atan2, log, exp, fabs, floor, sin, INFINITY, isfinite
from libc.complex cimport cexp, clog, conj

cdef double LANCZOS_G = 7.0
cdef double HALF_LOG_2PI = 0.9189385332046727
cdef double LOG_PI = 1.1447298858494002
cdef double[9] COEF = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]


cdef inline double complex _lanczos(double complex z) nogil:
    # real arithmetic throughout; avoids the C99 complex division path
    cdef double x = z.real - 1.0, y = z.imag
    cdef double ar = COEF[0], ai = 0.0, dr, inv
    cdef int i
    for i in range(1, 9):
        dr = x + i
        inv = COEF[i] / (dr * dr + y * y)
        ar += dr * inv
        ai -= y * inv
    cdef double tr = x + LANCZOS_G + 0.5
    cdef double lr = 0.5 * log(tr * tr + y * y), li = atan2(y, tr)
    cdef double hr = x + 0.5
    cdef double re = HALF_LOG_2PI + hr * lr - y * li - tr + 0.5 * log(ar * ar + ai * ai)
    cdef double im = hr * li + y * lr - y + atan2(ai, ar)
    return re + 1j * im


cdef inline double complex _cexpm1(double complex w) nogil:
    # accurate exp(w) - 1 for small |w|
    cdef double complex e
    if fabs(w.real) + fabs(w.imag) < 1e-5:
        return w + 0.5 * w * w + w * w * w / 6.0
    e = cexp(w)
    return e - 1.0


cdef inline double complex _log_sin_pi(double complex z) nogil:
    cdef double complex zc
    cdef double complex i_pi = 1j * M_PI
    if z.imag > 0:
        return -i_pi * z + clog(-_cexpm1(2.0 * i_pi * z)) + clog(0.5j)
    if z.imag < 0:
        zc = conj(z)
        return conj(-i_pi * zc + clog(-_cexpm1(2.0 * i_pi * zc)) + clog(0.5j))
    return clog(<double complex>sin(M_PI * z.real))


cdef inline double complex _loggamma(double complex z) nogil:
    if z.real >= 0.5:
        return _lanczos(z)
    return LOG_PI - _log_sin_pi(z) - _lanczos(1.0 - z)


def loggamma_array(z):
    """log Gamma(z) elementwise; imaginary part only defined modulo 2 pi."""
    arr = np.ascontiguousarray(z, dtype=complex)
    flat = arr.reshape(-1)
    out = np.empty_like(flat)
    cdef const double complex[::1] zin = flat
    cdef double complex[::1] zout = out
    cdef Py_ssize_t i, m = zin.shape[0]
    with nogil:
        for i in range(m):
            zout[i] = _loggamma(zin[i])
    return out.reshape(arr.shape)


cdef inline bint _is_pole(double complex x) nogil:
    return x.imag == 0.0 and x.real <= 0.0 and x.real == floor(x.real)


def mb_line_sum(num_off, num_slope, den_off, den_slope, double gamma,
                double log_tau, double h, Py_ssize_t n):
    """Half-line trapezoid sum of Re[K(gamma+iu) tau^(-gamma-iu)], u = 0..n*h.

    Returns ``(weighted_sum, |f(n*h)|, weighted_abs_sum)``; node 0 has weight 1/2.
    """
    cdef const double[::1] na = np.ascontiguousarray(num_off, dtype=float)
    cdef const double[::1] nA = np.ascontiguousarray(num_slope, dtype=float)
    cdef const double[::1] da = np.ascontiguousarray(den_off, dtype=float)
    cdef const double[::1] dA = np.ascontiguousarray(den_slope, dtype=float)
    cdef Py_ssize_t p = na.shape[0], q = da.shape[0], j, k
    cdef double total = 0.0, abs_total = 0.0, last = 0.0, w, mag
    cdef double complex s, logf, arg, f
    cdef bint zero
    with nogil:
        for j in range(n + 1):
            s = gamma + 1j * (h * j)
            logf = -s * log_tau
            zero = False
            for k in range(p):
                logf = logf + _loggamma(na[k] + nA[k] * s)
            for k in range(q):
                arg = da[k] + dA[k] * s
                if _is_pole(arg):
                    zero = True
                else:
                    logf = logf - _loggamma(arg)
            if zero:
                f = 0.0
            else:
                f = cexp(logf)
            w = 0.5 if j == 0 else 1.0
            mag = (f.real * f.real + f.imag * f.imag) ** 0.5
            total += w * f.real
            abs_total += w * mag
            if j == n:
                last = mag
    return total, last, abs_total


def power_series_sum(logmag, sign, expo, double log_tau, double rel_stop,
                     Py_ssize_t k_min):
    """Sum sign_k * exp(logmag_k + expo_k * log_tau) with a run-length stop.

    Stops after three consecutive non-zero terms below ``rel_stop`` times the
    partial sum (index >= ``k_min``). Returns
    ``(sum, max_abs_term, n_used, converged)``.
    """
    cdef const double[::1] lm = np.ascontiguousarray(logmag, dtype=float)
    cdef const double[::1] sg = np.ascontiguousarray(sign, dtype=float)
    cdef const double[::1] ex = np.ascontiguousarray(expo, dtype=float)
    cdef Py_ssize_t m = lm.shape[0], k
    cdef double s = 0.0, c = 0.0, t, tmp, mag, mx = 0.0
    cdef int run = 0
    cdef bint overflow = False
    k = 0
    if m == 0:
        return 0.0, 0.0, 0, False
    with nogil:
        for k in range(m):
            if lm[k] == -INFINITY:
                continue
            t = sg[k] * exp(lm[k] + ex[k] * log_tau)
            if not isfinite(t):
                overflow = True
                break
            tmp = s + t
            if fabs(s) >= fabs(t):
                c += (s - tmp) + t
            else:
                c += (t - tmp) + s
            s = tmp
            mag = fabs(t)
            if mag > mx:
                mx = mag
            if k < k_min:
                continue
            if mag <= rel_stop * fabs(s + c) or mag < 1e-300:
                run += 1
                if run >= 3:
                    break
            else:
                run = 0
    if overflow:
        return s + c, INFINITY, k, False
    if run >= 3:
        return s + c, mx, k + 1, True
    return s + c, mx, m, False
