"""Fundamental solution G_{alpha,beta,n}(x, t) of the space-time-fractional
diffusion-wave equation, radial in x.

Routes: compiled residue series of the similarity-variable symbol, contour
quadrature of the same symbol, closed forms for special parameter sets, the
origin value, and a Hankel-integral oracle built from the Fourier symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mbquad, quadrature
from .errors import DomainError, NonConvergence, SingularAtOrigin
from .mellin import builtin
from .result import EvalResult
from .specfun import (GenWrightParams, bessel_j_array, gen_wright_eval, ml_eval)

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class FDWParams:
    """Orders (alpha in space, beta in time) and dimension n."""

    alpha: float
    beta: float
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not (0 < self.alpha <= 2):
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not (0 < self.beta <= 2):
            raise DomainError(f"beta must lie in (0, 2], got {self.beta}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class RadialPoint:
    r: float
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("t must be positive")
        if not self.r >= 0:
            raise DomainError("r must be non-negative")

    def z(self, p: FDWParams) -> float:
        """Similarity variable r / (2 t^{beta/alpha})."""
        return self.r / (2 * self.t ** (p.beta / p.alpha))


def _pt(pt) -> RadialPoint:
    return pt if isinstance(pt, RadialPoint) else RadialPoint(*pt)


def _params(p) -> FDWParams:
    return p if isinstance(p, FDWParams) else FDWParams(*p)


def g_gaussian(n: int, pt) -> EvalResult:
    """Heat kernel (4 pi t)^{-n/2} exp(-r^2 / (4 t))."""
    pt = _pt(pt)
    v = (4 * math.pi * pt.t) ** (-n / 2) * math.exp(-pt.r ** 2 / (4 * pt.t))
    return EvalResult(v, 4 * EPS * v * (1 + pt.r ** 2 / (4 * pt.t)), 0, "closed-form")


def _similarity_pref(a, b, n, t):
    return t ** (-b * n / a) / (a * (4 * math.pi) ** (n / 2))


def g_space_frac(alpha: float, n: int, pt, tol: float = DEFAULT_TOL) -> EvalResult:
    """beta = 1 case through the generalized Wright function 1Psi1.

    For alpha <= 1 the 1Psi1 series is not entire and the similarity symbol
    is inverted by the Mellin-Barnes dispatcher instead.
    """
    pt = _pt(pt)
    p = FDWParams(alpha, 1.0, n)
    if pt.r == 0:
        return g_origin(p, pt.t)
    a = p.alpha
    pref = (2 / a) * pt.t ** (-n / a) / (4 * math.pi) ** (n / 2)
    if a > 1:
        arg = -pt.r ** 2 / (4 * pt.t ** (2 / a))
        try:
            res = gen_wright_eval(GenWrightParams(((n / a, 2 / a),), ((n / 2, 1.0),)), arg, tol)
            return res.scaled(pref)
        except NonConvergence:
            pass
    sym = builtin("K1", alpha=a, n=n)
    res = mbquad.mellin_barnes(sym, pt.z(p), tol=tol)
    return res.scaled(_similarity_pref(a, 1.0, n, pt.t))


def g_2d_alpha(alpha: float, pt, tol: float = DEFAULT_TOL) -> EvalResult:
    """n = 2, beta = alpha/2: (1/(4 pi t)) z^{alpha-2} E_{alpha/2,alpha/2}(-z^alpha)."""
    pt = _pt(pt)
    if not 0 < alpha <= 2:
        raise DomainError("alpha must lie in (0, 2]")
    if pt.r == 0:
        raise DomainError("the two-dimensional solution is singular at r = 0")
    z = pt.r / (2 * math.sqrt(pt.t))
    ml = ml_eval((alpha / 2, alpha / 2), -z ** alpha, tol=tol)
    pref = z ** (alpha - 2) / (4 * math.pi * pt.t)
    return EvalResult(ml.value * pref, ml.abs_err * pref, ml.terms_used, ml.method)


def g_origin(p, t: float) -> EvalResult:
    """G(0, t) for n < alpha, from the Mellin transform of E_beta(-u) at s = n / alpha."""
    p = _params(p)
    a, b, n = p.alpha, p.beta, p.n
    if n >= a:
        raise SingularAtOrigin(f"G is unbounded at the origin for n = {n} >= alpha = {a}")
    if b == 2 and n / a >= 0.5:
        raise SingularAtOrigin("wave case: the origin integral diverges for n/alpha >= 1/2")
    if not t > 0:
        raise DomainError("t must be positive")
    sphere = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
    mel = builtin("ML", beta=b).evaluate(n / a).real
    v = sphere / (2 * math.pi) ** n / a * t ** (-b * n / a) * mel
    return EvalResult(v, 16 * EPS * abs(v), 0, "closed-form")


def fourier_symbol(p, k: float, t: float, tol: float = 1e-12) -> EvalResult:
    """E_beta(-|k|^alpha t^beta)."""
    p = _params(p)
    if k < 0 or not t > 0:
        raise DomainError("need k >= 0 and t > 0")
    return ml_eval(p.beta, -(k ** p.alpha) * t ** p.beta, tol=tol)


def g_eval(p, pt, tol: float = DEFAULT_TOL) -> EvalResult:
    """G_{alpha,beta,n}(r, t) by the cheapest reliable route.

    (2,1) closed Gaussian; beta = 1 through 1Psi1; n = 2 with beta = alpha/2
    through the Mittag-Leffler closed form; r = 0 through the origin value;
    otherwise the similarity-variable symbol is compiled into its residue
    series, falling back to contour quadrature.
    """
    p = _params(p)
    pt = _pt(pt)
    a, b, n = p.alpha, p.beta, p.n
    if pt.r == 0:
        return g_origin(p, pt.t)
    if a == 2 and b == 1:
        return g_gaussian(n, pt)
    if b == 1:
        return g_space_frac(a, n, pt, tol)
    if n == 2 and abs(b - a / 2) <= 1e-15:
        return g_2d_alpha(a, pt, tol)
    sym = builtin("K", alpha=a, beta=b, n=n)
    res = mbquad.mellin_barnes(sym, pt.z(p), tol=tol)
    return res.scaled(_similarity_pref(a, b, n, pt.t))


def g_quadrature(p, pt, tol: float = DEFAULT_TOL, form: str = "green_similarity",
                 gamma: float | None = None) -> EvalResult:
    """G by direct contour quadrature of one of the three Mellin-Barnes forms."""
    p = _params(p)
    pt = _pt(pt)
    sym = builtin(form, alpha=p.alpha, beta=p.beta, n=p.n, r=pt.r, t=pt.t)
    return mbquad.inverse_mellin(sym, 1.0, tol=tol, gamma=gamma)


def g_series(p, pt, tol: float = 1e-12) -> EvalResult:
    """G by the left residue series of the similarity symbol (no fallback)."""
    from .mellin import residue_series

    p = _params(p)
    pt = _pt(pt)
    rep = residue_series(builtin("K", alpha=p.alpha, beta=p.beta, n=p.n), "left")
    res = rep.evaluate(pt.z(p), tol)
    return res.scaled(_similarity_pref(p.alpha, p.beta, p.n, pt.t))


# ---------------------------------------------------------------- Hankel oracle

def _bessel_zeros(nu: float, count: int) -> np.ndarray:
    if nu == -0.5:
        return (np.arange(1, count + 1) - 0.5) * math.pi
    if nu == 0.5:
        return np.arange(1, count + 1) * math.pi
    m = np.arange(1, count + 1, dtype=float)
    b = (m + nu / 2 - 0.25) * math.pi
    mu4 = 4 * nu * nu
    x = b - (mu4 - 1) / (8 * b) - 4 * (mu4 - 1) * (7 * mu4 - 31) / (3 * (8 * b) ** 3)
    for _ in range(8):
        j = bessel_j_array(nu, x)
        dj = -bessel_j_array(nu + 1, x) + nu / x * j
        x = x - j / dj
    return x


def g_hankel_oracle(p, pt, tol: float = 1e-8, max_panels: int = 400) -> EvalResult:
    """G from the radial Fourier inversion of E_beta(-|k|^alpha t^beta).

    In u = k r the integrand is E_beta(-(u/r)^alpha t^beta) u^{n/2} J_{n/2-1}(u);
    it is integrated between consecutive Bessel zeros and the alternating
    sequence of partial sums is Euler-accelerated.
    """
    p = _params(p)
    pt = _pt(pt)
    a, b, n = p.alpha, p.beta, p.n
    if not n < 2 * a + 1:
        raise DomainError("the Hankel integral diverges unless n < 2 alpha + 1")
    if pt.r <= 0:
        raise DomainError("the Hankel oracle needs r > 0")
    r, t = pt.r, pt.t
    nu = n / 2 - 1
    c = t ** b / r ** a

    def ml_vec(u):
        if b == 1:
            return np.exp(-c * np.asarray(u) ** a)
        return np.array([ml_eval(b, -c * ui ** a, tol=1e-12).value for ui in np.atleast_1d(u)])

    def f(u):
        u = np.asarray(u, dtype=float)
        return ml_vec(u) * u ** (n / 2) * bessel_j_array(nu, u)

    zeros = np.concatenate([[0.0], _bessel_zeros(nu, max_panels)])
    # panels until the Mittag-Leffler factor is in its algebraic regime
    u_alg = (30.0 / c) ** (1 / a)
    partial = []
    errs = []
    total = 0.0
    small = 0
    for i in range(max_panels):
        v, e, _ = quadrature.adaptive(f, zeros[i], zeros[i + 1], abs_tol=1e-15, rel_tol=1e-11)
        total += v
        partial.append(total)
        errs.append(e)
        if abs(v) <= tol * 1e-3 * abs(total):
            small += 1
            if small >= 3:
                val = total
                acc_err = abs(v)
                break
        else:
            small = 0
        if zeros[i + 1] > u_alg and i >= 40 and len(partial) >= 30:
            val, acc_err = quadrature.euler_accelerate(partial[-26:], depth=12)
            prev, _ = quadrature.euler_accelerate(partial[-27:-1], depth=12)
            acc_err = max(acc_err, abs(val - prev))
            if acc_err <= tol * abs(val):
                break
    else:
        raise NonConvergence("Hankel panel sequence did not settle", best=None)
    pref = r ** (-n) / (2 * math.pi) ** (n / 2)
    err = (acc_err + sum(errs)) * pref
    return EvalResult(val * pref, err, len(partial), "quadrature")


# ---------------------------------------------------------------- integrals over x

def radial_mass(p, t: float, tol: float = 1e-9, evaluator=None):
    """(2 pi^{n/2} / Gamma(n/2)) int_0^inf G r^{n-1} dr, computed in x = log r.

    Returns ``(mass, abs_err)``.
    """
    p = _params(p)
    n = p.n
    g = evaluator or (lambda r: g_eval(p, (r, t), tol=1e-11).value)
    z0 = 2 * t ** (p.beta / p.alpha)

    def h(x):
        r = z0 * np.exp(np.asarray(x))
        return np.array([g(ri) for ri in r]) * r ** n

    sphere = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
    lo = _scan_edge(h, -1.0, tol)
    hi = _scan_edge(h, 1.0, tol)
    v, e, _ = quadrature.adaptive(h, lo, hi, abs_tol=tol * 1e-2, rel_tol=tol * 1e-2, max_panels=600)
    return sphere * v, sphere * e


def _scan_edge(h, direction: float, tol: float, step: float = 1.0, limit: float = 80.0) -> float:
    """First x (walking from 0 in ``direction``) beyond which |h| stays below tol * 1e-4 * peak."""
    peak = abs(float(h(np.array([0.0]))[0]))
    x = 0.0
    quiet = 0
    while abs(x) < limit:
        x += direction * step
        v = abs(float(h(np.array([x]))[0]))
        peak = max(peak, v)
        if v <= tol * 1e-4 * peak:
            quiet += 1
            if quiet >= 2:
                return x
        else:
            quiet = 0
    return x
