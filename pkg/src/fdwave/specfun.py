"""Mittag-Leffler, Wright-type and Bessel functions of real argument, plus a
finite-difference complete-monotonicity test.

All evaluators return :class:`~fdwave.result.EvalResult`. Series run through
the shared engine in :mod:`fdwave._series` (double precision first, mpmath
escalation on cancellation). When a series cannot be summed at a negative
argument, the Mellin-Barnes integral of the same function is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special as sp

from ._series import LinearGammaSeries, SeriesSum, sum_series
from .errors import DomainError, NonConvergence
from .result import EvalResult

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class MittagLefflerOrder:
    """Indices of E_{rho,mu}(x) = sum x^k / Gamma(rho k + mu)."""

    rho: float
    mu: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise DomainError(f"Mittag-Leffler index rho must be positive, got {self.rho}")


@dataclass(frozen=True)
class WrightOrder:
    """Indices of W_{a,mu}(z) = sum z^k / (k! Gamma(a + mu k))."""

    a: float
    mu: float

    def __post_init__(self):
        if not self.mu > -1:
            raise DomainError(f"Wright index mu must exceed -1, got {self.mu}")


@dataclass(frozen=True)
class GenWrightParams:
    """Upper and lower (offset, slope) pairs of a generalized Wright function."""

    upper: tuple = ()
    lower: tuple = ()

    def __post_init__(self):
        up = tuple((float(a), float(A)) for a, A in self.upper)
        lo = tuple((float(b), float(B)) for b, B in self.lower)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)
        if any(A <= 0 for _, A in up) or any(B <= 0 for _, B in lo):
            raise DomainError("generalized Wright slopes must be positive")
        if sum(B for _, B in lo) - sum(A for _, A in up) <= -1:
            raise DomainError("generalized Wright series is not entire for these slopes")


@dataclass(frozen=True)
class FourParamOrder:
    """Indices of W_{(a,mu),(b,nu)}(z) = sum z^k / (Gamma(a + mu k) Gamma(b + nu k))."""

    a: float
    mu: float
    b: float
    nu: float

    def __post_init__(self):
        if self.mu + self.nu < 0:
            raise DomainError("four-parameter Wright function needs mu + nu >= 0")


def _as_ml(order) -> MittagLefflerOrder:
    if isinstance(order, MittagLefflerOrder):
        return order
    if isinstance(order, tuple):
        return MittagLefflerOrder(*order)
    return MittagLefflerOrder(float(order))


def _as_wright(order) -> WrightOrder:
    return order if isinstance(order, WrightOrder) else WrightOrder(*order)


def _from_sum(res: SeriesSum) -> EvalResult:
    return EvalResult(res.value, res.abs_err, res.terms_used, "series")


def _mb_fallback(upper, lower, x: float, tol: float, reason: NonConvergence) -> EvalResult:
    """Value at x < 0 of sum z^k prod Gamma(upper) / prod Gamma(lower) / k!
    as the inverse Mellin transform of Gamma(s) prod Gamma(a - A s) / prod Gamma(b - B s)."""
    from . import mbquad
    from .mellin import GammaQuotientSymbol, GammaTerm
    from .errors import EmptyStrip, SlowDecay

    num = [GammaTerm(0.0, 1.0)] + [GammaTerm(a, -A) for a, A in upper]
    den = [GammaTerm(b, -B) for b, B in lower]
    try:
        sym = GammaQuotientSymbol(1.0, 1.0, num, den)
        return mbquad.mellin_barnes(sym, -x, tol=max(tol, 1e-13), prefer="right",
                                   exclude=("left",))
    except (EmptyStrip, SlowDecay, NonConvergence) as exc:
        raise NonConvergence(f"{reason}; contour fallback failed: {exc}", best=reason.best) from exc


def _gamma_series(upper, lower, x: float, factorial: bool, tol: float,
                  abs_tol: float = 0.0) -> EvalResult:
    den = tuple(lower) + (((1.0, 1.0),) if factorial else ())
    series = LinearGammaSeries(num=tuple(upper), den=den, alternating=x < 0)
    return _from_sum(sum_series(series, abs(x), tol, abs_tol=abs_tol))


# ---------------------------------------------------------------- Mittag-Leffler

def _ml_asymptotic(order: MittagLefflerOrder, x: float, m: int) -> EvalResult:
    # E(x) ~ -sum_{k=1}^m x^{-k} / Gamma(mu - rho k)  for x -> -inf, 0 < rho < 2
    rho, mu = order.rho, order.mu
    terms = [x ** (-k) * sp.rgamma(mu - rho * k) for k in range(1, m + 2)]
    value = -math.fsum(terms[:m])
    err = abs(terms[m])
    if err == 0.0:
        # next term vanishes at a reciprocal-gamma zero; use the following one
        err = abs(x ** (-(m + 2)) * sp.rgamma(mu - rho * (m + 2)))
    if rho >= 1:
        # exponentially small oscillatory part of the expansion
        X = abs(x)
        err += (2 / rho) * X ** ((1 - mu) / rho) * math.exp(X ** (1 / rho) * math.cos(math.pi / rho))
    err += EPS * math.fsum(abs(t) for t in terms[:m])
    return EvalResult(value, err, m, "asymptotic")


def ml_eval(order, x: float, tol: float = DEFAULT_TOL, m: int = 8,
            x_switch: float = 12.0, branch: str | None = None) -> EvalResult:
    """Mittag-Leffler function E_{rho,mu}(x) for real ``x``.

    ``order`` is a :class:`MittagLefflerOrder`, a ``(rho, mu)`` tuple or a bare
    ``rho``. For ``x <= -x_switch`` and ``0 < rho < 2`` the ``m``-term
    asymptotic expansion is tried first and kept when its remainder estimate
    meets ``tol`` relative to the value. ``branch`` forces ``"series"`` or
    ``"asymptotic"``.
    """
    order = _as_ml(order)
    x = float(x)
    rho, mu = order.rho, order.mu
    if branch not in (None, "series", "asymptotic"):
        raise ValueError(f"unknown branch {branch!r}")
    if branch is None and mu == 1.0:
        if rho == 1.0:
            return EvalResult(math.exp(x), EPS * math.exp(x), 0, "closed-form")
        if rho == 2.0:
            v = math.cos(math.sqrt(-x)) if x <= 0 else math.cosh(math.sqrt(x))
            return EvalResult(v, 2 * EPS * max(1.0, abs(v)), 0, "closed-form")
    asym_ok = x < 0 and 0 < rho < 2
    if branch == "asymptotic":
        if not asym_ok:
            raise DomainError("asymptotic branch needs x < 0 and 0 < rho < 2")
        return _ml_asymptotic(order, x, m)
    if branch is None and asym_ok and x <= -x_switch:
        res = _ml_asymptotic(order, x, m)
        if res.abs_err <= tol * abs(res.value):
            return res
    try:
        return _gamma_series((), ((mu, rho),), x, False, tol)
    except NonConvergence as exc:
        if branch == "series" or not (x < 0 and 0 < rho < 2):
            raise
        return _mb_fallback([(1.0, 1.0)], [(mu, rho)], x, tol, exc)


# ---------------------------------------------------------------- Wright family

def wright_eval(order, z: float, tol: float = DEFAULT_TOL, abs_tol: float = 0.0) -> EvalResult:
    """Wright function W_{a,mu}(z) = sum z^k / (k! Gamma(a + mu k)).

    ``abs_tol`` accepts a series value whose absolute error bound meets it
    even when the relative tolerance is not met.
    """
    order = _as_wright(order)
    z = float(z)
    try:
        return _gamma_series((), ((order.a, order.mu),), z, True, tol, abs_tol)
    except NonConvergence as exc:
        if z >= 0:
            raise
        return _mb_fallback([], [(order.a, order.mu)], z, tol, exc)


def _cancel_pairs(upper, lower):
    up = list(upper)
    lo = list(lower)
    for pair in list(up):
        for other in lo:
            if abs(pair[0] - other[0]) <= 1e-12 and abs(pair[1] - other[1]) <= 1e-12:
                up.remove(pair)
                lo.remove(other)
                break
    return tuple(up), tuple(lo)


def gen_wright_eval(params: GenWrightParams, z: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """Generalized Wright function pPsiq with positive slopes at real ``z``."""
    if not isinstance(params, GenWrightParams):
        params = GenWrightParams(*params)
    z = float(z)
    up, lo = _cancel_pairs(params.upper, params.lower)
    if not up and not lo:
        return EvalResult(math.exp(z), EPS * math.exp(z), 0, "closed-form")
    try:
        return _gamma_series(up, lo, z, True, tol)
    except NonConvergence as exc:
        if z >= 0:
            raise
        return _mb_fallback(up, lo, z, tol, exc)


def four_param_wright_eval(order: FourParamOrder, z: float, tol: float = DEFAULT_TOL,
                           abs_tol: float = 0.0) -> EvalResult:
    """Four-parameter Wright function W_{(a,mu),(b,nu)}(z).

    Terms whose denominator hits a gamma pole are exactly zero. When
    ``mu + nu == 0`` the series converges only for ``|z| < 1``.
    """
    if not isinstance(order, FourParamOrder):
        order = FourParamOrder(*order)
    z = float(z)
    if abs(order.mu + order.nu) <= 1e-14 and abs(z) >= 1:
        raise DomainError("mu + nu = 0: series radius of convergence is 1")
    upper = ((1.0, 1.0),)
    lower = ((order.a, order.mu), (order.b, order.nu))
    up, lo = _cancel_pairs(upper, lower)
    try:
        return _gamma_series(up, lo, z, True, tol, abs_tol)
    except NonConvergence as exc:
        if z >= 0:
            raise
        return _mb_fallback(up, lo, z, tol, exc)


def cm7_params(alpha: float, beta: float, gamma: float):
    """``(GenWrightParams, prefactor)`` of the completely monotone
    1Psi1 function phi_{gamma,beta}(lambda) with index ``alpha``."""
    c = (beta + gamma + 1) / beta
    params = GenWrightParams(((c / alpha, 1 / (alpha * beta)),), ((c, 1 / beta),))
    return params, 1.0 / (alpha * abs(beta))


# ---------------------------------------------------------------- Bessel

BESSEL_SWITCH = 20.0


def _bessel_hankel(nu: float, x: float):
    # J ~ sqrt(2/(pi x)) (P cos w - Q sin w), w = x - nu pi/2 - pi/4
    mu4 = 4.0 * nu * nu
    term = 1.0
    P, Q = 1.0, 0.0
    last = math.inf
    err = 0.0
    for k in range(1, 200):
        term *= (mu4 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) >= last:
            err = last
            break
        last = abs(term)
        if k % 2:
            Q += term if k % 4 == 1 else -term
        else:
            P += -term if k % 4 == 2 else term
        if term == 0.0:
            err = 0.0
            break
    w = x - (nu / 2 + 0.25) * math.pi
    amp = math.sqrt(2 / (math.pi * x))
    value = amp * (P * math.cos(w) - Q * math.sin(w))
    return value, amp * (err + 4 * EPS * (abs(P) + abs(Q)) * max(1.0, abs(w)))


def bessel_j(nu: float, x: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """Bessel function J_nu(x) for nu >= -1/2 and x >= 0."""
    if nu < -0.5:
        raise DomainError("bessel_j supports nu >= -1/2 only")
    if x < 0:
        raise DomainError("bessel_j needs x >= 0")
    if x == 0:
        v = 1.0 if nu == 0 else 0.0
        if nu == -0.5:
            raise DomainError("J_{-1/2} is singular at 0")
        return EvalResult(v, 0.0, 1, "series")
    if x >= BESSEL_SWITCH:
        v, e = _bessel_hankel(nu, x)
        return EvalResult(v, e, 0, "asymptotic")
    # (x/2)^nu W_{nu+1,1}(-x^2/4)
    res = _gamma_series((), ((nu + 1.0, 1.0),), -x * x / 4, True, tol)
    scale = (x / 2) ** nu
    return EvalResult(res.value * scale, res.abs_err * scale, res.terms_used, "series")


def bessel_j_array(nu: float, x) -> np.ndarray:
    """Vectorized J_nu for quadrature nodes; accuracy about 1e-10 absolute.

    Half-integer orders +-1/2 use the elementary closed forms. Otherwise the
    ascending series is summed for x < 12 and the Hankel expansion above.
    """
    x = np.asarray(x, dtype=float)
    if nu == 0.5:
        return np.sqrt(2 / (np.pi * x)) * np.sin(x)
    if nu == -0.5:
        return np.sqrt(2 / (np.pi * x)) * np.cos(x)
    out = np.empty_like(x)
    small = x < 12.0
    xs = x[small]
    if xs.size:
        q = -(xs * xs) / 4
        term = np.full_like(xs, 1.0 / math.gamma(nu + 1))
        acc = term.copy()
        for k in range(1, 80):
            term = term * q / (k * (nu + k))
            acc += term
        out[small] = acc * (xs / 2) ** nu
    xl = x[~small]
    if xl.size:
        mu4 = 4.0 * nu * nu
        P = np.ones_like(xl)
        Q = np.zeros_like(xl)
        term = np.ones_like(xl)
        for k in range(1, 25):
            term = term * (mu4 - (2 * k - 1) ** 2) / (k * 8.0 * xl)
            sgn = 1.0 if (k // 2) % 2 == 0 else -1.0
            if k % 2:
                Q += sgn * term
            else:
                P += sgn * term
        w = xl - (nu / 2 + 0.25) * np.pi
        out[~small] = np.sqrt(2 / (np.pi * xl)) * (P * np.cos(w) - Q * np.sin(w))
    return out


# ---------------------------------------------------------------- complete monotonicity

@dataclass
class CMReport:
    """Signs of (-1)^k Delta_h^k f at each grid point and order."""

    grid: list
    max_order: int
    h: float
    values: np.ndarray          # shape (len(grid), max_order + 1)
    scales: np.ndarray          # local function scale per grid point
    tol_cm: float
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def cm_difference_test(f: Callable[[float], float], max_order: int, grid: Sequence[float],
                       h: float, tol_cm: float = 1e-7) -> CMReport:
    """Forward-difference complete-monotonicity check.

    ``f`` maps a positive real to a float (an :class:`EvalResult` is accepted).
    A violation is recorded when ``(-1)^k Delta_h^k f(lambda) < -tol_cm * scale``
    with ``scale`` the largest |f| on the stencil.
    """
    grid = [float(g) for g in grid]
    if h <= 0 or max_order < 0:
        raise DomainError("need h > 0 and max_order >= 0")
    if any(g <= 0 for g in grid):
        raise DomainError("grid points must be positive")
    values = np.zeros((len(grid), max_order + 1))
    scales = np.zeros(len(grid))
    violations = []
    for i, lam in enumerate(grid):
        samples = np.array([float(f(lam + j * h)) for j in range(max_order + 1)])
        scales[i] = np.max(np.abs(samples))
        diff = samples.copy()
        for k in range(max_order + 1):
            signed = (-1) ** k * diff[0]
            values[i, k] = signed
            if signed < -tol_cm * scales[i]:
                violations.append((lam, k, float(signed)))
            diff = np.diff(diff)
    return CMReport(grid, max_order, h, values, scales, tol_cm, violations)
