"""Subordination kernels and the subordination integral.

A subordination formula writes one fundamental solution as a mixture
``G_target(r, t) = int_0^inf k(u) G_base(r, s(u, t)) du`` over a probability
density ``k``. Four kernels are provided:

* :class:`WrightRatio` ``(gamma)``: ``k(u) = W_{1-gamma,-gamma}(-u)`` with
  ``s = t^gamma u``; time-fractional subordination of any base.
* :class:`TheoremPhi` ``(alpha, beta)``: ``k = Phi_{alpha,beta}`` with
  ``s = t^{2 beta/alpha} u``; subordinates the Gaussian.
* :class:`GeneralPhi` ``(alpha, beta, delta, n)``: ``k(tau) = tau^{n-1}
  Phi_{alpha,beta,n}(tau)`` with ``s = t^{beta/delta} tau^{alpha/delta}``;
  base ``G_{alpha,delta,n}``.
* :class:`ExampleOnePdf` ``(alpha, beta)``: the density
  ``Gamma(beta) W_{beta-alpha,-alpha}(-t)``, not tied to a base solution.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import mpmath
import numpy as np

from . import mbquad, quadrature
from .errors import DomainError, DoublePoleError, EmptyFamily, IncompatiblePair, NonConvergence
from .greens import (FDWParams, RadialPoint, _pt, g_2d_alpha, g_eval, g_gaussian,
                     g_space_frac)
from .mellin import builtin, residue_series
from .result import EvalResult
from .specfun import (FourParamOrder, WrightOrder, four_param_wright_eval, ml_eval,
                      wright_eval)

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-10
# beyond this argument the four-parameter series is replaced by the
# algebraic expansion of the Mellin-Barnes integral when that is accurate
ASYMPTOTIC_SWITCH = 6.0


# ---------------------------------------------------------------- kernel specs

@dataclass(frozen=True)
class WrightRatio:
    gamma_ratio: float

    def __post_init__(self):
        object.__setattr__(self, "gamma_ratio", float(self.gamma_ratio))
        if not 0 < self.gamma_ratio < 1:
            raise DomainError(f"gamma_ratio must lie in (0, 1), got {self.gamma_ratio}")

    def density(self, u: float, tol: float = DEFAULT_TOL, abs_tol: float = 0.0) -> EvalResult:
        return kernel_wright(self.gamma_ratio, u, 1.0, tol, abs_tol)

    def time_map(self, u: float, t: float) -> float:
        return t ** self.gamma_ratio * u

    @property
    def endpoint_power(self) -> float:
        return 1.0


@dataclass(frozen=True)
class TheoremPhi:
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        _check_phi(self.alpha, self.beta)

    def density(self, u: float, tol: float = DEFAULT_TOL, abs_tol: float = 0.0) -> EvalResult:
        return kernel_phi(self.alpha, self.beta, u, tol, abs_tol)

    def time_map(self, u: float, t: float) -> float:
        return t ** (2 * self.beta / self.alpha) * u

    @property
    def endpoint_power(self) -> float:
        return max(1.0, 2.0 / self.alpha)


@dataclass(frozen=True)
class GeneralPhi:
    alpha: float
    beta: float
    delta: float
    n: int = 1

    def __post_init__(self):
        for name in ("alpha", "beta", "delta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_general(self.alpha, self.beta, self.delta)
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    def density(self, tau: float, tol: float = DEFAULT_TOL, abs_tol: float = 0.0) -> EvalResult:
        w = tau ** (self.n - 1)
        res = kernel_general(self.alpha, self.beta, self.delta, self.n, tau, tol,
                             abs_tol / w if w else 0.0)
        return res.scaled(w)

    def time_map(self, tau: float, t: float) -> float:
        return t ** (self.beta / self.delta) * tau ** (self.alpha / self.delta)

    @property
    def endpoint_power(self) -> float:
        return max(1.0, self.delta / self.alpha)


@dataclass(frozen=True)
class ExampleOnePdf:
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        _check_example_pdf(self.alpha, self.beta)

    def density(self, t: float, tol: float = DEFAULT_TOL, abs_tol: float = 0.0) -> EvalResult:
        return kernel_example1(self.alpha, self.beta, t, tol, abs_tol)

    def time_map(self, u: float, t: float) -> float:
        raise IncompatiblePair("the ExampleOnePdf density has no base solution")

    @property
    def endpoint_power(self) -> float:
        return 1.0


KernelSpec = Union[WrightRatio, TheoremPhi, GeneralPhi, ExampleOnePdf]


# ---------------------------------------------------------------- validation

def _check_phi(alpha: float, beta: float):
    if not (0 < alpha <= 2 and 0 < beta <= 1 and 2 * beta + alpha < 4):
        raise DomainError(
            f"need 0 < alpha <= 2, 0 < beta <= 1, 2 beta + alpha < 4; got alpha={alpha}, beta={beta}")


def _check_general(alpha: float, beta: float, delta: float):
    if not 0 < alpha <= 2:
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")
    if not 0 < beta < delta <= 2:
        raise DomainError(f"need 0 < beta < delta <= 2, got beta={beta}, delta={delta}")


def _check_example_pdf(alpha: float, beta: float):
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if not beta >= alpha:
        raise DomainError(f"beta must be at least alpha, got beta={beta}")


# ---------------------------------------------------------------- kernels

def kernel_wright(gamma_ratio: float, s: float, t: float, tol: float = DEFAULT_TOL,
                  abs_tol: float = 0.0) -> EvalResult:
    """Time-fractional kernel ``t^{-g} W_{1-g,-g}(-s t^{-g})`` in ``s``.

    Every kernel accepts ``abs_tol``: an absolute error on the returned
    value that is good enough even when ``tol`` (relative) is not met.
    """
    g = float(gamma_ratio)
    if not 0 < g < 1:
        raise DomainError(f"gamma_ratio must lie in (0, 1), got {g}")
    if not (s >= 0 and t > 0):
        raise DomainError("need s >= 0 and t > 0")
    scale = t ** (-g)
    return wright_eval(WrightOrder(1 - g, -g), -s * scale, tol, abs_tol / scale).scaled(scale)


def _case(alpha: float, beta: float) -> str:
    d = beta / alpha - 0.5
    if abs(d) <= 1e-14:
        return "iii"
    return "i" if d < 0 else "ii"


def phi_closed_iii(alpha: float, tau: float) -> float:
    """Summed sine series of the ``beta = alpha/2`` kernel."""
    x = tau ** (alpha / 2)
    c = math.cos(math.pi * alpha / 2)
    return math.sin(math.pi * alpha / 2) * x / (tau * math.pi * (1 + 2 * x * c + x * x))


def phi_sine_series(alpha: float, tau: float, terms: int = 200):
    """Truncated sine series of the ``beta = alpha/2`` kernel, valid off tau = 1.

    Returns ``(value, bound)`` where ``bound`` is the geometric tail bound
    of the omitted terms.
    """
    if tau == 1:
        raise DomainError("the sine series diverge at tau = 1")
    k = np.arange(terms, dtype=float)
    if tau < 1:
        x = tau ** (alpha / 2)
        w = np.sin(np.pi * alpha / 2 * (k + 1)) * (-x) ** k
        pref = tau ** (alpha / 2 - 1) / math.pi
    else:
        x = tau ** (-alpha / 2)
        w = np.sin(np.pi * alpha / 2 * k) * (-x) ** k
        pref = -1.0 / (tau * math.pi)
    value = pref * math.fsum(w)
    bound = abs(pref) * x ** terms / (1 - x)
    return value, bound


@functools.lru_cache(maxsize=64)
def _phi_rep(alpha: float, beta: float, side: str):
    try:
        return residue_series(builtin("MelPhi", alpha=alpha, beta=beta), side)
    except (EmptyFamily, DoublePoleError):
        return None


def _phi_asymptotic(alpha: float, beta: float, tau: float, side: str):
    rep = _phi_rep(alpha, beta, side)
    if rep is None or rep.classify(tau) != "divergent":
        return None
    return rep.asymptotic(tau)


def kernel_phi(alpha: float, beta: float, tau: float, tol: float = DEFAULT_TOL,
               abs_tol: float = 0.0) -> EvalResult:
    """Subordination density ``Phi_{alpha,beta}(tau)`` of the Gaussian.

    Case ``beta < alpha/2``: ``tau^{alpha/2-1} W_{(1-beta,-beta),(alpha/2,alpha/2)}(-tau^{alpha/2})``;
    case ``beta > alpha/2``: ``tau^{-1} W_{(1,beta),(0,-alpha/2)}(-tau^{-alpha/2})``;
    case ``beta = alpha/2``: the closed rational-trigonometric sum.
    Large arguments use the algebraic expansion on the opposite side when
    it meets ``tol``, and the Mellin-Barnes integral otherwise.
    """
    alpha, beta, tau = float(alpha), float(beta), float(tau)
    _check_phi(alpha, beta)
    if not tau > 0:
        raise DomainError("tau must be positive")
    case = _case(alpha, beta)
    if case == "iii":
        v = phi_closed_iii(alpha, tau)
        return EvalResult(v, 8 * EPS * abs(v), 0, "closed-form")
    if case == "i":
        x = tau ** (alpha / 2)
        order = FourParamOrder(1 - beta, -beta, alpha / 2, alpha / 2)
        pref = tau ** (alpha / 2 - 1)
        far_side = "right"
    else:
        x = tau ** (-alpha / 2)
        order = FourParamOrder(1.0, beta, 0.0, -alpha / 2)
        pref = 1.0 / tau
        far_side = "left"
    if x > ASYMPTOTIC_SWITCH:
        res = _phi_asymptotic(alpha, beta, tau, far_side)
        if res is not None and res.abs_err <= max(tol * abs(res.value), abs_tol):
            return res
    try:
        return four_param_wright_eval(order, -x, tol, abs_tol / pref).scaled(pref)
    except NonConvergence:
        pass
    return mbquad.mellin_barnes(builtin("MelPhi", alpha=alpha, beta=beta), tau, tol=tol)


def phi_shifted(alpha: float, beta: float, tau: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """Shifted form ``-tau^{-1-alpha/2} W_{(1+beta,beta),(-alpha/2,-alpha/2)}(-tau^{-alpha/2})``
    of the ``beta > alpha/2`` density (its k = 0 term vanishes, so k -> k + 1)."""
    _check_phi(alpha, beta)
    if _case(alpha, beta) != "ii":
        raise DomainError("the shifted form applies for beta > alpha/2")
    x = tau ** (-alpha / 2)
    res = four_param_wright_eval(FourParamOrder(1 + beta, beta, -alpha / 2, -alpha / 2), -x, tol)
    return res.scaled(-(tau ** (-1 - alpha / 2)))


def kernel_general(alpha: float, beta: float, delta: float, n: int, tau: float,
                   tol: float = DEFAULT_TOL, abs_tol: float = 0.0) -> EvalResult:
    """``(alpha/delta) tau^{alpha/delta-n} W_{1-beta/delta,-beta/delta}(-tau^{alpha/delta})``."""
    alpha, beta, delta, tau = float(alpha), float(beta), float(delta), float(tau)
    _check_general(alpha, beta, delta)
    if not tau > 0:
        raise DomainError("tau must be positive")
    g = beta / delta
    q = alpha / delta
    pref = q * tau ** (q - n)
    res = wright_eval(WrightOrder(1 - g, -g), -(tau ** q), tol, abs_tol / pref)
    return res.scaled(pref)


def kernel_example1(alpha: float, beta: float, t: float, tol: float = DEFAULT_TOL,
                    abs_tol: float = 0.0) -> EvalResult:
    """Density ``Gamma(beta) W_{beta-alpha,-alpha}(-t)`` on ``t > 0``."""
    alpha, beta, t = float(alpha), float(beta), float(t)
    _check_example_pdf(alpha, beta)
    if not t >= 0:
        raise DomainError("t must be non-negative")
    c = math.gamma(beta)
    return wright_eval(WrightOrder(beta - alpha, -alpha), -t, tol, abs_tol / c).scaled(c)


# ---------------------------------------------------------------- base solutions

@dataclass(frozen=True)
class BaseSolution:
    """A base fundamental solution ``(r, s) -> EvalResult`` with its orders."""

    params: FDWParams
    fn: Callable

    def __call__(self, r: float, s: float, tol: float = DEFAULT_TOL) -> EvalResult:
        return self.fn(r, s, tol)


def gaussian_base(n: int) -> BaseSolution:
    return BaseSolution(FDWParams(2.0, 1.0, n), lambda r, s, tol: g_gaussian(n, RadialPoint(r, s)))


def space_frac_base(alpha: float, n: int) -> BaseSolution:
    return BaseSolution(FDWParams(alpha, 1.0, n),
                        lambda r, s, tol: g_space_frac(alpha, n, RadialPoint(r, s), tol))


def two_d_base(alpha: float) -> BaseSolution:
    """``G_{alpha,alpha/2,2}`` in its Mittag-Leffler closed form."""
    return BaseSolution(FDWParams(alpha, alpha / 2, 2),
                        lambda r, s, tol: g_2d_alpha(alpha, RadialPoint(r, s), tol))


def eval_base(params: FDWParams) -> BaseSolution:
    return BaseSolution(params, lambda r, s, tol: g_eval(params, RadialPoint(r, s), tol))


def target_params(kernel: KernelSpec, base: FDWParams) -> FDWParams:
    """Orders of the solution produced by subordinating ``base`` with ``kernel``.

    Raises :class:`IncompatiblePair` when the pair has no subordination formula.
    """
    if isinstance(kernel, ExampleOnePdf):
        raise IncompatiblePair("the ExampleOnePdf density has no base solution")
    if isinstance(kernel, TheoremPhi):
        if abs(base.alpha - 2) > 1e-12 or abs(base.beta - 1) > 1e-12:
            raise IncompatiblePair("Phi_{alpha,beta} subordinates the Gaussian G_{2,1,n} only")
        return FDWParams(kernel.alpha, kernel.beta, base.n)
    if isinstance(kernel, WrightRatio):
        return FDWParams(base.alpha, kernel.gamma_ratio * base.beta, base.n)
    if isinstance(kernel, GeneralPhi):
        if (abs(base.alpha - kernel.alpha) > 1e-12 or abs(base.beta - kernel.delta) > 1e-12
                or base.n != kernel.n):
            raise IncompatiblePair(
                f"GeneralPhi({kernel.alpha}, {kernel.beta}, {kernel.delta}, {kernel.n}) needs "
                f"base G_{{{kernel.alpha},{kernel.delta},{kernel.n}}}")
        return FDWParams(kernel.alpha, kernel.beta, kernel.n)
    raise IncompatiblePair(f"unknown kernel {kernel!r}")


# ---------------------------------------------------------------- quadrature on (0, inf)

class _Tracked:
    """Scalar integrand wrapper that vectorizes and records propagated errors."""

    def __init__(self, fn):
        self.fn = fn
        self.vals = []
        self.errs = []

    def __call__(self, x):
        out = np.empty(len(x))
        for i, xi in enumerate(x):
            v, e = self.fn(float(xi))
            out[i] = v
            self.vals.append(abs(v))
            self.errs.append(e)
        return out

    def relative_error(self) -> float:
        if not self.vals:
            return 0.0
        vals = np.asarray(self.vals)
        errs = np.asarray(self.errs)
        floor = max(1e-8 * vals.max(), 1e-300)
        return float(np.max(errs / np.maximum(vals, floor)))


def _locate_mode(fn, lo: float = -25.0, hi: float = 25.0, step: float = 1.0,
                 drop: float = 60.0) -> float:
    """Maximizer of ``u |fn(u)|`` (the mode in log u).

    A log-grid scan walks outward from ``u = 1`` and stops in each
    direction once the value has fallen ``e^drop`` below the running
    maximum; golden section then refines the best bracket.
    """
    def h(x):
        v = math.exp(x) * abs(fn(math.exp(x))[0])
        return math.log(v) if v > 0 else -math.inf

    pts = {0.0: h(0.0)}
    for direction in (1.0, -1.0):
        x = 0.0
        while lo < x + direction * step < hi:
            x += direction * step
            pts[x] = h(x)
            top = max(pts.values())
            if math.isfinite(top) and pts[x] < top - drop:
                break
    xs = sorted(pts)
    vals = [pts[x] for x in xs]
    if not any(math.isfinite(v) for v in vals):
        raise NonConvergence("integrand vanishes on the whole scan range")
    i = int(np.argmax(vals))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    hc, hd = h(c), h(d)
    while b - a > 0.05:
        if hc > hd:
            b, d, hd = d, c, hc
            c = b - g * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + g * (b - a)
            hd = h(d)
    return math.exp(0.5 * (a + b))


def _shanks(partial):
    """Epsilon-algorithm limit of a partial-sum sequence (deepest even column)."""
    row = mpmath.shanks([mpmath.mpf(x) for x in partial])[-1]
    return float(row[-2] if len(row) % 2 else row[-1])


def _tail(f, a: float, tol: float, scale: float = 0.0, max_panels: int = 120):
    """Integral of ``f`` over [a, inf) by doubling panels.

    Panel sums of an algebraic tail behave like a sum of geometric
    sequences, so their partial sums are extrapolated by the epsilon
    algorithm; exponentially decaying tails stop on three negligible panels.
    ``scale`` is the magnitude of the integral already accumulated elsewhere.
    """
    parts, errs, partial = [], [], []
    lo, w = a, a
    small = 0
    history = []
    for _ in range(max_panels):
        floor = tol * (scale + abs(math.fsum(parts))) / 16
        v, e, _ = quadrature.adaptive(f, lo, lo + w, abs_tol=floor, rel_tol=tol / 8)
        parts.append(v)
        errs.append(e)
        acc = math.fsum(parts)
        partial.append(acc)
        lo, w = lo + w, 2 * w
        if abs(v) <= tol * (scale + abs(acc)) / 8:
            small += 1
            # a negligible panel after a sharp drop marks faster than
            # geometric decay; otherwise wait for three in a row
            sharp = len(parts) >= 2 and abs(v) <= 1e-3 * abs(parts[-2])
            if small >= 3 or sharp:
                return acc, math.fsum(errs) + 2 * abs(v)
            continue
        small = 0
        if len(partial) >= 7:
            # consecutive windows share their deepest even column, so
            # compare with the estimate two steps back
            history.append(_shanks(partial[-min(len(partial), 15):]))
            if len(history) >= 4:
                spread = max(abs(history[-1] - history[-3]), abs(history[-2] - history[-4]))
                if spread <= tol * abs(history[-1]) / 4:
                    return history[-1], math.fsum(errs) + spread + 8 * EPS * abs(history[-1])
    raise NonConvergence(f"tail integral not settled after {max_panels} panels",
                         best=EvalResult(partial[-1], abs(parts[-1]) * 1e3 + math.fsum(errs),
                                         len(parts), "quadrature"))


def _integrate(fn, p: float, tol: float) -> EvalResult:
    """``int_0^inf fn(u) du`` for a unimodal integrand; ``fn`` returns ``(value, abs_err)``.

    Split at the integrand mode ``m``; ``u = m v^p`` on [0, m]; doubling
    panels beyond ``m``.
    """
    tracked = _Tracked(fn)
    m = _locate_mode(fn)
    scalar = tracked.fn

    def inner(v):
        out = np.empty(len(v))
        for i, vi in enumerate(v):
            u = m * float(vi) ** p
            if u == 0.0:
                out[i] = 0.0
                continue
            val, err = scalar(u)
            jac = m * p * float(vi) ** (p - 1)
            out[i] = val * jac
            tracked.vals.append(abs(val))
            tracked.errs.append(err)
        return out

    left, left_err, n_left = quadrature.adaptive(inner, 0.0, 1.0, abs_tol=0.0, rel_tol=tol / 8)
    right, right_err = _tail(tracked, m, tol, abs(left))
    value = left + right
    prop = tracked.relative_error() * (abs(left) + abs(right))
    err = left_err + right_err + prop + 4 * EPS * abs(value)
    return EvalResult(value, err, len(tracked.vals), "quadrature")


# ---------------------------------------------------------------- operations

def subordinate(kernel: KernelSpec, base, pt, tol: float = 1e-9) -> EvalResult:
    """``int_0^inf k(u) G_base(r, s(u, t)) du`` for a kernel/base pair.

    ``base`` is a :class:`BaseSolution` (checked for compatibility) or any
    callable ``(r, s) -> EvalResult``.
    """
    pt = _pt(pt)
    if isinstance(kernel, ExampleOnePdf):
        raise IncompatiblePair("the ExampleOnePdf density has no base solution")
    if isinstance(base, BaseSolution):
        target_params(kernel, base.params)
        call = lambda r, s: base(r, s, tol=min(tol, DEFAULT_TOL) / 10)
    else:
        call = base
    ktol = min(tol, DEFAULT_TOL) / 10

    def fn(u):
        # densities are O(1) in log u, so an absolute error of this size per
        # node stays below the tolerance share of every doubling panel
        k = _density_cached(kernel, u, ktol, 1e-3 * tol / max(u, 1.0))
        b = call(pt.r, kernel.time_map(u, pt.t))
        return k.value * b.value, abs(k.value) * b.abs_err + k.abs_err * abs(b.value)

    return _integrate(fn, kernel.endpoint_power, tol)


@functools.lru_cache(maxsize=4096)
def _density_cached(kernel: KernelSpec, u: float, tol: float, abs_tol: float) -> EvalResult:
    # the mode scan revisits the same log-grid nodes for every (r, t)
    return kernel.density(u, tol, abs_tol)


@dataclass(frozen=True)
class PdfReport:
    mass: float
    mass_err: float
    min_sampled: float


def _density_in_s(kernel: KernelSpec, t: float):
    """``(D(s), p)``: density of the time variable for the given ``t``."""
    if isinstance(kernel, (WrightRatio, TheoremPhi)):
        c = kernel.time_map(1.0, t)
        return (lambda s, tol: kernel.density(s / c, tol).scaled(1 / c)), kernel.endpoint_power
    return kernel.density, kernel.endpoint_power


def density_at(kernel: KernelSpec, s: float, t: float = 1.0, tol: float = DEFAULT_TOL) -> EvalResult:
    """Density of the kernel's integration variable at ``s`` for time ``t``.

    For the Wright-ratio and Phi_{alpha,beta} kernels this is the density of the
    time argument handed to the base solution; the other kernels do not
    depend on ``t``.
    """
    dens, _ = _density_in_s(kernel, t)
    return dens(float(s), tol)


def pdf_verify(kernel: KernelSpec, t: float = 1.0, tol: float = 1e-11) -> PdfReport:
    """Mass and sampled minimum of the kernel density at time ``t``."""
    dens, p = _density_in_s(kernel, t)

    def fn(s):
        r = dens(s, DEFAULT_TOL / 10)
        return r.value, r.abs_err

    res = _integrate(fn, p, tol)
    scale = kernel.time_map(1.0, t) if isinstance(kernel, (WrightRatio, TheoremPhi)) else 1.0
    grid = scale * np.logspace(-6, 6, 200)
    mins = min(dens(float(s), DEFAULT_TOL).value for s in grid)
    return PdfReport(res.value, res.abs_err, float(mins))


def laplace_verify(alpha: float, beta: float, lambdas: Sequence[float],
                   tol: float = 1e-11) -> float:
    """Max relative error of ``int Phi(tau) e^{-lam tau} dtau = E_beta(-lam^{alpha/2})``."""
    kern = TheoremPhi(alpha, beta)
    worst = 0.0
    for lam in lambdas:
        lam = float(lam)
        if not lam > 0:
            raise DomainError("lambda must be positive")

        def fn(u, lam=lam):
            k = kern.density(u, DEFAULT_TOL / 10)
            w = math.exp(-lam * u)
            return k.value * w, k.abs_err * w

        lhs = _integrate(fn, kern.endpoint_power, tol).value
        rhs = ml_eval(beta, -lam ** (alpha / 2), tol=1e-13).value
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst
