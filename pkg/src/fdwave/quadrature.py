"""Real-line quadrature utilities: adaptive Gauss-Legendre panels,
semi-infinite geometric panelling and Euler acceleration of alternating sums.

Integrands take and return NumPy arrays.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable

import numpy as np

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)
EPS = np.finfo(float).eps


def gl15(f: Callable, a: float, b: float) -> float:
    """15-point Gauss-Legendre rule on [a, b]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(_GL_W, f(mid + half * _GL_X)))


def _panel(f, a, b):
    m = 0.5 * (a + b)
    left = gl15(f, a, m)
    right = gl15(f, m, b)
    whole = gl15(f, a, b)
    return left + right, abs(left + right - whole), left, right


def adaptive(f: Callable, a: float, b: float, abs_tol: float = 1e-13,
             rel_tol: float = 1e-12, max_panels: int = 400):
    """Globally adaptive GL15 with bisection error estimates.

    Returns ``(value, abs_err, n_panels)``. The error estimate is the sum of
    per-panel differences between one GL15 panel and its two halves, which
    overestimates the error of the refined value for smooth integrands.
    """
    if a == b:
        return 0.0, 0.0, 0
    val, err, left, right = _panel(f, a, b)
    heap = [(-err, a, b, val, err)]
    total, total_err = val, err
    count = 1
    while heap:
        if total_err <= max(abs_tol, rel_tol * abs(total)) or count >= max_panels:
            break
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1, _, _ = _panel(f, lo, mid)
        v2, e2, _, _ = _panel(f, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        count += 1
    # recompute from the panel list to shed accumulated update rounding
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap) + EPS * abs(total) * len(heap)
    return total, total_err, len(heap)


def semi_infinite(f: Callable, a: float, width: float, abs_tol: float = 1e-13,
                  rel_tol: float = 1e-12, max_panels: int = 80):
    """Integral of ``f`` over [a, inf) by doubling-width adaptive panels.

    Stops after three consecutive panels below the tolerance share and adds
    a geometric-ratio estimate of the remaining tail to the value and error.
    Returns ``(value, abs_err, n_panels)``.
    """
    parts = []
    errs = []
    lo, w = a, width
    small = 0
    for _ in range(max_panels):
        hi = lo + w
        v, e, _ = adaptive(f, lo, hi, abs_tol=abs_tol / 4, rel_tol=rel_tol / 4)
        parts.append(v)
        errs.append(e)
        acc = math.fsum(parts)
        if abs(v) <= max(abs_tol, rel_tol * abs(acc)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        lo, w = hi, 2.0 * w
    else:
        acc = math.fsum(parts)
        return acc, abs(parts[-1]) * 10 + math.fsum(errs), len(parts)
    tail = 0.0
    if len(parts) >= 2 and parts[-2] != 0.0:
        q = abs(parts[-1] / parts[-2])
        if q < 1.0:
            tail = parts[-1] * q / (1.0 - q)
    value = math.fsum(parts) + tail
    return value, math.fsum(errs) + abs(tail) + abs(parts[-1]), len(parts)


def euler_accelerate(partial_sums, depth: int = 12):
    """Euler (repeated averaging) transform of alternating partial sums.

    Returns ``(value, abs_err)`` where the error is the spread of the last
    two accelerated estimates.
    """
    s = np.asarray(partial_sums, dtype=float)
    depth = min(depth, s.size - 2)
    if depth < 1:
        return float(s[-1]), float(abs(s[-1] - s[-2])) if s.size > 1 else math.inf
    for _ in range(depth):
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[-1]), float(abs(s[-1] - s[-2]))
