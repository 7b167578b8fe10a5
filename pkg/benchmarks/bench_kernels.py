"""Compiled kernels against the NumPy fallback.

Run ``python3 benchmarks/bench_kernels.py [--repeat N]``. Each kernel is
timed on both backends with identical inputs, and their outputs are compared.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np
from scipy import special as sp

from fdwave._core import backends


def cases():
    rng = np.random.default_rng(0)
    z = rng.uniform(-20, 20, 20000) + 1j * rng.uniform(-150, 150, 20000)
    yield "loggamma_array (20000 pts)", "loggamma_array", (z,)
    line = ((0.0, 1.0), (0.5, -1.0), (1.0,), (-0.6,), 0.4, 0.3, 0.02, 20000)
    yield "mb_line_sum (20001 nodes, 3 gammas)", "mb_line_sum", line
    k = np.arange(1500, dtype=float)
    logmag = -sp.gammaln(k + 1) - sp.gammaln(1 + 0.4 * k)
    sign = np.where(k % 2 == 1, -1.0, 1.0)
    yield "power_series_sum (1500 terms)", "power_series_sum", (logmag, sign, k, 3.0, 1e-17, 0)


def same(a, b) -> bool:
    """Agreement to 1e-12 of the output's largest magnitude (sums cancel, so
    rounding differences scale with the biggest term, not the result)."""
    a = np.atleast_1d(np.asarray(a, dtype=complex if np.iscomplexobj(a) else float))
    b = np.atleast_1d(np.asarray(b, dtype=a.dtype))
    scale = max(1.0, float(np.max(np.abs(a))))
    return bool(np.all(np.abs(a.real - b.real) <= 1e-12 * scale))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    impls = backends()
    if "cython" not in impls:
        print("compiled extension not built; only the NumPy fallback is available")
    print(f"{'kernel':40s} " + " ".join(f"{name:>12s}" for name in impls) + "   speedup  agree")
    for label, fn, inputs in cases():
        times, outs = [], []
        for mod in impls.values():
            f = getattr(mod, fn)
            outs.append(f(*inputs))
            times.append(min(timeit.repeat(lambda: f(*inputs), number=1, repeat=args.repeat)))
        speed = times[0] / times[-1] if len(times) > 1 else 1.0
        agree = all(same(outs[0], o) for o in outs[1:])
        cells = " ".join(f"{1e3 * t:10.2f}ms" for t in times)
        print(f"{label:40s} {cells}   {speed:6.1f}x  {agree}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
