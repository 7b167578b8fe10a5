"""Numerical inverse Mellin transform along a vertical contour.

The Mellin-Barnes integral (1/2 pi i) int F(s) tau^{-s} ds of a real
gamma-quotient symbol reduces to (1/pi) int_0^inf Re[F(g+iu) tau^{-g-iu}] du,
evaluated by the trapezoidal rule (spectrally accurate for integrands
analytic in a strip around the contour) with step halving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import EmptyStrip, NonConvergence, PoleError, SlowDecay
from .mellin import GammaQuotientSymbol, strip
from .result import EvalResult

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-10
MAX_NODES = 200_000
MIN_DECAY = 0.05
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
# B_{2k} / (2k (2k-1)) for k = 1..10
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156,
             -3617 / 122400, 43867 / 244188, -174611 / 125400)


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex ``z`` (scalar or array).

    Stirling's series after shifting Re z to at least 15 with the recurrence
    log Gamma(z) = log Gamma(z + 1) - log z.
    """
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    re = z.real
    if np.any((z.imag == 0) & (re <= 0) & (re == np.floor(re))):
        raise PoleError("log_gamma has poles at the non-positive integers")
    shift = np.maximum(0, np.ceil(15.0 - re)).astype(int)
    w = z + shift
    corr = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        m = shift > k
        corr[m] += np.log(z[m] + k)
    inv = 1.0 / w
    inv2 = inv * inv
    ser = np.zeros_like(w)
    p = inv
    for c in _STIRLING:
        ser += c * p
        p = p * inv2
    out = (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + ser - corr
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class ContourConfig:
    """Vertical line Re s = gamma, truncated at |Im s| <= half_height, step ``step``."""

    gamma: float
    half_height: float
    step: float

    def __post_init__(self):
        if not (self.half_height > 0 and 0 < self.step < self.half_height):
            raise ValueError("need 0 < step < half_height")


def auto_gamma(sym: GammaQuotientSymbol) -> float:
    """Strip midpoint, or one unit inside a half-infinite strip."""
    st = strip(sym)
    lo, hi = st.lo, st.hi
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + 1.0
    if math.isfinite(hi):
        return hi - 1.0
    return 0.0


def _log_abs_f(sym, gamma, log_x, u):
    s = gamma + 1j * np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        lf = sym.log_eval(s).real - gamma * log_x
    return lf


def _pick_height(sym, gamma, log_x, rel=1e-18):
    c = sym.decay_rate
    if c < MIN_DECAY:
        raise SlowDecay(f"integrand decay rate {c:.3g} is below {MIN_DECAY}")
    coarse = np.linspace(0.0, 8.0, 33)
    peak = float(np.max(_log_abs_f(sym, gamma, log_x, coarse)))
    T = 8.0
    while True:
        uu = np.linspace(T, 2 * T, 9)
        lf = _log_abs_f(sym, gamma, log_x, uu)
        peak = max(peak, float(np.max(lf)))
        if lf[0] < peak + math.log(rel):
            return T, peak
        T *= 2.0
        if T / 0.01 > 50 * MAX_NODES:
            raise SlowDecay("contour truncation height exceeds the node budget")


def auto_contour(sym: GammaQuotientSymbol, tau: float = 1.0, tol: float = DEFAULT_TOL) -> ContourConfig:
    """Contour abscissa by :func:`auto_gamma`, height from the integrand decay,
    initial step from the distance to the nearest pole."""
    g = auto_gamma(sym)
    st = strip(sym)
    d = min(g - st.lo, st.hi - g)
    log_x = math.log(sym.scale_base * tau)
    T, _ = _pick_height(sym, g, log_x, rel=min(1e-18, tol * 1e-8))
    h = min(0.5 * d, 1.0) if math.isfinite(d) else 1.0
    return ContourConfig(g, T, min(h, T / 4))


def _line(sym, gamma, log_x, h, n):
    num_off = [t.offset for t in sym.numerator]
    num_sl = [t.slope for t in sym.numerator]
    den_off = [t.offset for t in sym.denominator]
    den_sl = [t.slope for t in sym.denominator]
    total, last, abs_total = _core.mb_line_sum(num_off, num_sl, den_off, den_sl,
                                               gamma, log_x, h, n)
    scale = abs(sym.prefactor) * h / math.pi
    return math.copysign(1.0, sym.prefactor) * scale * total, scale * abs_total, last


def inverse_mellin(sym: GammaQuotientSymbol, tau: float, cfg: ContourConfig | None = None,
                   tol: float = DEFAULT_TOL, gamma: float | None = None) -> EvalResult:
    """(1/2 pi i) int_{g - i inf}^{g + i inf} sym(s) tau^{-s} ds by the trapezoidal rule.

    With ``cfg`` the given contour is used and the step is still halved until
    two successive results agree to ``tol`` relative (or to the rounding floor).
    ``gamma`` overrides only the abscissa of the automatic contour.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    st = strip(sym)
    log_x = math.log(sym.scale_base * tau)
    if cfg is None:
        g = auto_gamma(sym) if gamma is None else float(gamma)
        if not st.contains(g):
            raise EmptyStrip(f"contour abscissa {g} outside strip ({st.lo}, {st.hi})")
        T, _ = _pick_height(sym, g, log_x, rel=min(1e-18, tol * 1e-8))
        d = min(g - st.lo, st.hi - g)
        h = min(0.5 * d, 1.0) if math.isfinite(d) else 1.0
        cfg = ContourConfig(g, T, min(h, T / 4))
    elif not st.contains(cfg.gamma):
        raise EmptyStrip(f"contour abscissa {cfg.gamma} outside strip ({st.lo}, {st.hi})")
    if sym.decay_rate < MIN_DECAY:
        raise SlowDecay(f"integrand decay rate {sym.decay_rate:.3g} is below {MIN_DECAY}")
    g, T, h = cfg.gamma, cfg.half_height, cfg.step
    n = int(math.ceil(T / h))
    prev, _, _ = _line(sym, g, log_x, h, n)
    while True:
        h *= 0.5
        n = int(math.ceil(T / h))
        if n > MAX_NODES:
            raise SlowDecay(f"step refinement exceeded {MAX_NODES} nodes")
        cur, cur_abs, last = _line(sym, g, log_x, h, n)
        diff = abs(cur - prev)
        floor = 8 * EPS * cur_abs
        if diff <= max(tol * abs(cur), floor):
            break
        prev = cur
    c = sym.decay_rate
    p = sym.envelope_power(g)
    rate = c - max(p, 0.0) / T
    tail = abs(sym.prefactor) * last / (math.pi * rate) if rate > 0 else math.inf
    if not math.isfinite(tail):
        raise SlowDecay("tail bound unavailable at this truncation height")
    err = diff + tail + floor
    return EvalResult(cur, err, n + 1, "quadrature")


def mellin_barnes(sym: GammaQuotientSymbol, tau: float, tol: float = 1e-10,
                  prefer: str = "left", exclude: tuple = ()) -> EvalResult:
    """Value of the inverse Mellin transform by the best available route.

    Tries the convergent residue series (``prefer`` side first, then the
    other), then the optimally truncated asymptotic series when its error
    meets ``tol``, then contour quadrature. Sides in ``exclude`` are skipped
    (callers that already failed on one series).
    """
    from .errors import DoublePoleError, EmptyFamily
    from .mellin import residue_series

    sides = [prefer, "right" if prefer == "left" else "left"]
    reps = {}
    for side in sides:
        if side in exclude:
            continue
        try:
            reps[side] = residue_series(sym, side)
        except (DoublePoleError, EmptyFamily):
            continue
    best = None
    for side, rep in reps.items():
        kind = rep.classify(tau)
        if kind in ("entire", "inside"):
            try:
                res = rep.evaluate(tau, tol=min(tol, 1e-12))
            except NonConvergence as exc:
                best = exc.best or best
                continue
            if res.abs_err <= tol * abs(res.value):
                return res
            best = res if best is None or res.abs_err < best.abs_err else best
    for side, rep in reps.items():
        if rep.classify(tau) == "divergent":
            res = rep.asymptotic(tau)
            if res.abs_err <= tol * abs(res.value):
                return res
    try:
        res = inverse_mellin(sym, tau, tol=tol)
    except SlowDecay:
        if best is not None:
            return best
        raise
    if best is not None and best.abs_err < res.abs_err:
        return best
    return res
