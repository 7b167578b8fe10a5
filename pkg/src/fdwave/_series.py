"""Summation engine for power series with gamma-quotient coefficients.

Every series in the package (Mittag-Leffler, Wright, generalized Wright,
four-parameter Wright, compiled residue series) is a sum

    S(X) = sum_k  c * (+-1)^k * prod Gamma(a_i + A_i k) / prod Gamma(b_j + B_j k) * X^(e0 + e1 k)

with real parameters and X > 0. The first pass runs in double precision with
compensated summation; when cancellation is detected the sum is redone with
mpmath at a working precision sized to the observed cancellation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special as sp

from . import _core
from .errors import NonConvergence
from .result import EvalResult

EPS = np.finfo(float).eps
CANCEL_THRESHOLD = 1e8
MAX_TERMS = 1500
MAX_DPS = 80
REL_STOP = EPS / 8
POLE_SNAP = 1e-13


@dataclass(frozen=True)
class LinearGammaSeries:
    """Coefficient structure of a gamma-quotient power series.

    ``num`` and ``den`` are tuples of ``(offset, slope)`` pairs in the summation
    index ``k``; the term is multiplied by ``X ** (e0 + e1 k)``.
    """

    num: tuple = ()
    den: tuple = ()
    const: float = 1.0
    alternating: bool = False
    e0: float = 0.0
    e1: float = 1.0

    @property
    def kappa(self) -> float:
        """Growth exponent: terms behave like (k!)^(-kappa) times a geometric factor."""
        return sum(B for _, B in self.den) - sum(A for _, A in self.num)

    @property
    def ratio_factor(self) -> float:
        """Limit of |t_{k+1}/t_k| / X^e1 when ``kappa == 0``."""
        lr = sum(A * math.log(abs(A)) for _, A in self.num)
        lr -= sum(B * math.log(abs(B)) for _, B in self.den)
        return math.exp(lr)

    def classify(self, log_x: float) -> str:
        """One of ``entire``, ``inside``, ``outside``, ``divergent``."""
        k = self.kappa
        if k > 1e-12:
            return "entire"
        if k < -1e-12:
            return "divergent"
        q = math.log(self.ratio_factor) + self.e1 * log_x
        if q < -1e-12:
            return "inside"
        return "outside"


@lru_cache(maxsize=512)
def _double_coeffs(series: LinearGammaSeries, n_terms: int):
    k = np.arange(n_terms, dtype=float)
    logmag = np.full(n_terms, math.log(abs(series.const)) if series.const else -math.inf)
    sign = np.full(n_terms, 1.0 if series.const >= 0 else -1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        for a, A in series.num:
            arg = a + A * k
            if np.any((arg <= 0) & (arg == np.floor(arg))):
                raise ZeroDivisionError("numerator gamma pole in series coefficients")
            logmag = logmag + sp.gammaln(arg)
            sign = sign * sp.gammasgn(arg)
        for b, B in series.den:
            arg = b + B * k
            # arguments within rounding of a non-positive integer are poles
            near = np.abs(arg - np.round(arg)) <= POLE_SNAP * np.maximum(1.0, np.abs(arg))
            pole = (arg <= 0.5) & near
            logmag = logmag - np.where(pole, 0.0, sp.gammaln(np.where(pole, 1.0, arg)))
            logmag[pole] = -math.inf
            sign = sign * np.where(pole, 1.0, sp.gammasgn(np.where(pole, 1.0, arg)))
    if series.alternating:
        sign = sign * np.where(k % 2 == 1, -1.0, 1.0)
    expo = series.e0 + series.e1 * k
    logmag.setflags(write=False)
    sign.setflags(write=False)
    expo.setflags(write=False)
    return logmag, sign, expo


@lru_cache(maxsize=512)
def _log_weight(series: LinearGammaSeries, n_terms: int) -> np.ndarray:
    # sum of |log| of the factors of each coefficient: relative rounding of
    # exp(sum of logs) scales with the parts, not with their (cancelled) sum
    k = np.arange(n_terms, dtype=float)
    w = np.full(n_terms, abs(math.log(abs(series.const))) if series.const else 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        for a, A in series.num + series.den:
            g = np.abs(sp.gammaln(a + A * k))
            w += np.where(np.isfinite(g), g, 0.0)
    w.setflags(write=False)
    return w


@lru_cache(maxsize=512)
def _rounding_sensitivity(series: LinearGammaSeries, n_terms: int) -> np.ndarray:
    # relative change of each coefficient when every gamma argument moves
    # by one rounding unit of its offset and slope part
    k = np.arange(n_terms, dtype=float)
    sens = np.zeros(n_terms)
    with np.errstate(invalid="ignore", divide="ignore"):
        for a, A in series.num + series.den:
            arg = a + A * k
            psi = np.abs(sp.psi(arg))
            sens += EPS * (abs(a) + abs(A) * k + 1.0) * np.where(np.isfinite(psi), psi, 0.0)
    sens.setflags(write=False)
    return sens


def rounding_error(series: LinearGammaSeries, x: float, n_terms: int) -> float:
    """Error bound of the sum from rounding of the series parameters.

    Matters when parameters are derived (residue families of a compiled
    symbol) and several families cancel near a pole collision.
    """
    n_terms = max(1, min(int(n_terms), MAX_TERMS))
    logmag, _, expo = _double_coeffs(series, n_terms)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        mags = np.where(np.isneginf(logmag), 0.0, np.exp(logmag + expo * math.log(x)))
    return float(np.dot(mags, _rounding_sensitivity(series, n_terms)))


MP_FLOOR_DPS = 50
_MP_LOCK = threading.Lock()
_MP_CACHE: dict = {}


def _mp_coeffs(series: LinearGammaSeries, n_terms: int, dps: int):
    # one table per series at the highest precision requested so far; a
    # lower request reuses it, precision is never below MP_FLOOR_DPS
    dps = max(dps, MP_FLOOR_DPS)
    with _MP_LOCK:
        entry = _MP_CACHE.get(series)
        if entry is None or entry[0] < dps:
            if len(_MP_CACHE) > 256:
                _MP_CACHE.clear()
            entry = _MP_CACHE[series] = (dps, [])
    work_dps, coeffs = entry
    start = len(coeffs)
    if start >= n_terms:
        return coeffs[:n_terms]
    with mpmath.workdps(work_dps):
        num = [(mpmath.mpf(a), mpmath.mpf(A)) for a, A in series.num]
        den = [(mpmath.mpf(b), mpmath.mpf(B)) for b, B in series.den]
        const = mpmath.mpf(series.const)
        new = []
        for k in range(start, n_terms):
            c = const
            for a, A in num:
                c *= mpmath.gamma(a + A * k)
            for b, B in den:
                c *= mpmath.rgamma(b + B * k)
            if series.alternating and k % 2:
                c = -c
            new.append(c)
    with _MP_LOCK:
        if len(coeffs) < n_terms:
            coeffs.extend(new[len(coeffs) - start:])
    return coeffs[:n_terms]


@dataclass(frozen=True)
class SeriesSum:
    value: float
    abs_err: float
    terms_used: int
    dps: int = 0


def _sum_zero_arg(series: LinearGammaSeries) -> SeriesSum:
    logmag, sign, expo = _double_coeffs(series, 4)
    total = 0.0
    for k in range(4):
        if expo[k] == 0.0 and not math.isinf(logmag[k]):
            total += sign[k] * math.exp(logmag[k])
        elif expo[k] < 0.0 and not math.isinf(logmag[k]):
            raise NonConvergence("series term singular at zero argument", best=math.inf)
    return SeriesSum(total, EPS * abs(total), 1)


def _sum_mp(series, x_in, dps, cap):
    # the number of terms is fixed up front from the double-precision term
    # logarithms: everything below max_term * 10^-dps is dropped
    logmag, _, expo = _double_coeffs(series, cap)
    with np.errstate(invalid="ignore"):
        lt = logmag + expo * math.log(x_in)
    live = np.isfinite(lt)
    if not live.any():
        return 0.0, -math.inf, 1, True, float(dps)
    peak = float(np.max(lt[live]))
    keep = np.nonzero(live & (lt >= peak - dps * math.log(10.0) - 2.0))[0]
    n_terms = int(keep[-1]) + 4
    if n_terms > cap:
        return math.nan, math.inf, cap, False, 0.0
    with mpmath.workdps(dps):
        coeffs = _mp_coeffs(series, n_terms, dps)
        x = mpmath.mpf(x_in)
        step = x ** mpmath.mpf(series.e1)
        power = x ** mpmath.mpf(series.e0)
        powers = []
        for _ in range(n_terms):
            powers.append(power)
            power = power * step
        total = mpmath.fdot(coeffs, powers)
        value = float(total)
    if not math.isfinite(value):
        return value, peak, n_terms, False, -math.inf
    if value:
        digits = dps - (peak - math.log(abs(value))) / math.log(10.0)
    else:
        digits = -math.inf
    return value, peak, n_terms, True, digits


def sum_series(series: LinearGammaSeries, x: float, tol: float = 1e-12,
               max_terms: int = MAX_TERMS, max_dps: int = MAX_DPS,
               abs_tol: float = 0.0) -> SeriesSum:
    """Sum ``series`` at ``X = x > 0`` to relative tolerance ``tol``, or to
    absolute error ``abs_tol`` when that is looser.

    Raises :class:`NonConvergence` when the series diverges at ``x`` or when
    neither the double pass nor precision escalation (up to ``max_dps``
    digits and ``max_terms`` terms) meets the tolerance.
    """
    if x < 0:
        raise ValueError("series argument must be non-negative")
    if x == 0:
        return _sum_zero_arg(series)
    log_x = math.log(x)
    kind = series.classify(log_x)
    if kind in ("divergent", "outside"):
        raise NonConvergence(f"series is {kind} at argument {x!r}", best=None)

    logmag, sign, expo = _double_coeffs(series, max_terms)
    total, biggest, used, converged = _core.power_series_sum(
        logmag, sign, expo, log_x, REL_STOP, 0)
    best = None
    if converged and math.isfinite(biggest):
        lt = logmag[:used] + expo[:used] * log_x
        with np.errstate(under="ignore"):
            mags = np.where(np.isneginf(lt), 0.0, np.exp(lt))
        ell = _log_weight(series, max_terms)[:used] + np.abs(expo[:used] * log_x) + 2.0
        err = EPS * (float(np.dot(mags, ell)) + biggest * math.sqrt(used)) + 2 * REL_STOP * abs(total)
        best = SeriesSum(float(total), float(err), int(used))
        cond = biggest / abs(total) if total else math.inf
        if (cond <= CANCEL_THRESHOLD and err <= tol * abs(total)) or err <= abs_tol:
            return best
        digits_needed = math.log10(cond) if math.isfinite(cond) else 30.0
    else:
        digits_needed = 20.0

    dps = int(10 * math.ceil((20 + digits_needed) / 10))
    for _ in range(4):
        if dps > max_dps:
            break
        value, log_big, used, conv, digits = _sum_mp(series, x, dps, max_terms)
        if not conv:
            break
        err = EPS * abs(value) + math.exp(min(log_big - (dps - 1) * math.log(10.0), 700.0))
        if digits >= 18 or err <= abs_tol:
            return SeriesSum(value, float(err), used, dps)
        dps = int(10 * math.ceil((dps + 20 - max(digits, -40.0)) / 10))
    raise NonConvergence(
        f"series did not converge at argument {x!r} within {max_terms} terms / {max_dps} digits",
        best=None if best is None or not math.isfinite(best.abs_err)
        else EvalResult(best.value, best.abs_err, best.terms_used, "series"))


def asymptotic_sum(series: LinearGammaSeries, x: float, max_terms: int = 64) -> SeriesSum:
    """Optimally truncated sum of a divergent (asymptotic) series."""
    if x <= 0:
        raise ValueError("asymptotic argument must be positive")
    logmag, sign, expo = _double_coeffs(series, max_terms)
    lt = logmag + expo * math.log(x)
    with np.errstate(over="ignore", under="ignore"):
        mags = np.where(np.isneginf(logmag), 0.0, np.exp(lt))
    live = np.nonzero(~np.isneginf(logmag))[0]
    if live.size == 0:
        return SeriesSum(0.0, 0.0, 0)
    # stop at the first live term that is not smaller than its live predecessor
    cut = live[-1] + 1
    for i in range(1, live.size):
        if mags[live[i]] >= mags[live[i - 1]]:
            cut = live[i]
            break
    terms = sign[:cut] * mags[:cut]
    value = math.fsum(terms)
    nxt = mags[cut] if cut < max_terms else mags[live[-1]]
    err = float(nxt) + EPS * float(np.sum(np.abs(terms)))
    return SeriesSum(value, err, int(cut))
