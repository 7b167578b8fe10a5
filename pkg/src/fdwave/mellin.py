"""Algebra of Mellin-domain gamma-quotient symbols.

A symbol is ``c * rho^{-s} * prod Gamma(a_i + A_i s) / prod Gamma(b_j + B_j s)``.
The module provides the operational rules of the Mellin transform, products
and quotients of symbols, the strip of analyticity, the Bernstein-type dual
``s -> Gamma(s) F(1-s)`` and compilation of a symbol into its residue series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _core
from ._series import MAX_TERMS, LinearGammaSeries, asymptotic_sum, rounding_error, sum_series
from .errors import DomainError, DoublePoleError, EmptyFamily, EmptyStrip
from .result import EvalResult

MATCH_TOL = 1e-12
SNAP_TOL = 1e-13
POLE_TOL = 1e-9
DEFAULT_BUDGET = 256
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class GammaTerm:
    """The factor Gamma(offset + slope * s)."""

    offset: float
    slope: float

    def __post_init__(self):
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "slope", float(self.slope))
        if self.slope == 0.0 or not math.isfinite(self.slope):
            raise DomainError("GammaTerm slope must be finite and non-zero")
        if not math.isfinite(self.offset):
            raise DomainError("GammaTerm offset must be finite")

    def matches(self, other: "GammaTerm", tol: float = MATCH_TOL) -> bool:
        return abs(self.offset - other.offset) <= tol and abs(self.slope - other.slope) <= tol

    def substitute(self, c0: float, c1: float) -> "GammaTerm":
        """Term after s -> c0 + c1 s."""
        return GammaTerm(self.offset + self.slope * c0, self.slope * c1)

    def __str__(self):
        return f"Γ({_fmt(self.offset)}{_fmt_signed(self.slope)} s)"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _fmt_signed(x: float) -> str:
    return f"+{x:.12g}" if x >= 0 else f"{x:.12g}"


def _sort_key(term: GammaTerm):
    return (term.slope, term.offset)


def _cancel(num: list, den: list):
    num = list(num)
    den = list(den)
    i = 0
    while i < len(num):
        for j, d in enumerate(den):
            if num[i].matches(d):
                del num[i]
                del den[j]
                break
        else:
            i += 1
    return num, den


@dataclass(frozen=True)
class AnalyticStrip:
    """Open vertical strip lo < Re s < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise EmptyStrip(f"empty strip ({self.lo}, {self.hi})")

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    def intersect(self, other: "AnalyticStrip") -> "AnalyticStrip":
        return AnalyticStrip(max(self.lo, other.lo), min(self.hi, other.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, eq=False)
class GammaQuotientSymbol:
    """``prefactor * scale_base^{-s} * prod Gamma(numerator) / prod Gamma(denominator)``.

    Terms are kept sorted by (slope, offset). Unless ``cancel=False`` is
    passed, numerator and denominator terms that match within 1e-12 cancel.
    Equality is numeric within the same tolerance.
    """

    prefactor: float = 1.0
    scale_base: float = 1.0
    numerator: tuple = ()
    denominator: tuple = ()
    cancel: bool = field(default=True, repr=False)

    def __post_init__(self):
        if not (self.scale_base > 0 and math.isfinite(self.scale_base)):
            raise DomainError(f"scale_base must be positive and finite, got {self.scale_base}")
        num = [t if isinstance(t, GammaTerm) else GammaTerm(*t) for t in self.numerator]
        den = [t if isinstance(t, GammaTerm) else GammaTerm(*t) for t in self.denominator]
        if self.cancel:
            num, den = _cancel(num, den)
        object.__setattr__(self, "prefactor", float(self.prefactor))
        object.__setattr__(self, "scale_base", float(self.scale_base))
        object.__setattr__(self, "numerator", tuple(sorted(num, key=_sort_key)))
        object.__setattr__(self, "denominator", tuple(sorted(den, key=_sort_key)))

    @classmethod
    def unit(cls) -> "GammaQuotientSymbol":
        return cls()

    def replace(self, **kw) -> "GammaQuotientSymbol":
        base = dict(prefactor=self.prefactor, scale_base=self.scale_base,
                    numerator=self.numerator, denominator=self.denominator, cancel=True)
        base.update(kw)
        return GammaQuotientSymbol(**base)

    # ---- identity
    def __eq__(self, other):
        if not isinstance(other, GammaQuotientSymbol):
            return NotImplemented
        if len(self.numerator) != len(other.numerator) or len(self.denominator) != len(other.denominator):
            return False
        if not math.isclose(self.prefactor, other.prefactor, rel_tol=MATCH_TOL, abs_tol=1e-300):
            return False
        if not math.isclose(self.scale_base, other.scale_base, rel_tol=MATCH_TOL):
            return False
        return all(a.matches(b) for a, b in zip(self.numerator, other.numerator)) and all(
            a.matches(b) for a, b in zip(self.denominator, other.denominator))

    def key(self):
        """Hashable rounded form, for caching."""
        r = lambda x: round(x, 10)  # noqa: E731
        return (r(self.prefactor), r(self.scale_base),
                tuple((r(t.offset), r(t.slope)) for t in self.numerator),
                tuple((r(t.offset), r(t.slope)) for t in self.denominator))

    def __hash__(self):
        return hash(self.key())

    def is_unit(self) -> bool:
        return self == GammaQuotientSymbol.unit()

    # ---- evaluation
    def log_eval(self, s) -> np.ndarray:
        """log of the symbol at ``s`` (array), imaginary part modulo 2 pi.

        Reciprocal-gamma zeros give ``-inf`` real part.
        """
        s = np.asarray(s, dtype=complex)
        out = np.full(s.shape, math.log(abs(self.prefactor)) if self.prefactor else -np.inf, dtype=complex)
        if self.prefactor < 0:
            out = out + 1j * math.pi
        out = out - s * math.log(self.scale_base)
        for t in self.numerator:
            arg = t.offset + t.slope * s
            if np.any(_at_pole(arg)):
                raise DomainError("symbol evaluated at a numerator pole")
            out = out + _core.loggamma_array(arg)
        for t in self.denominator:
            arg = t.offset + t.slope * s
            pole = _at_pole(arg)
            safe = np.where(pole, 0.5, arg)
            out = out - _core.loggamma_array(safe)
            out = np.where(pole, -np.inf + 0j, out)
        return out

    def evaluate(self, s):
        """Value of the symbol at complex ``s`` (scalar or array)."""
        scalar = np.isscalar(s)
        with np.errstate(over="ignore", under="ignore"):
            v = np.exp(self.log_eval(s))
        return complex(np.ravel(v)[0]) if scalar else v

    def __call__(self, s):
        return self.evaluate(s)

    # ---- analytic data
    def strip(self) -> AnalyticStrip:
        return strip(self)

    @property
    def decay_rate(self) -> float:
        """c in |F(g + iu)| ~ |u|^p exp(-c |u|)."""
        return 0.5 * math.pi * (sum(abs(t.slope) for t in self.numerator)
                                - sum(abs(t.slope) for t in self.denominator))

    def envelope_power(self, gamma: float) -> float:
        """p in |F(g + iu)| ~ |u|^p exp(-c |u|)."""
        p = sum(t.offset + t.slope * gamma - 0.5 for t in self.numerator)
        p -= sum(t.offset + t.slope * gamma - 0.5 for t in self.denominator)
        return p

    def envelope_const(self, gamma: float) -> float:
        """Leading constant C of the large-|u| envelope C |u|^p exp(-c|u|)."""
        lc = math.log(abs(self.prefactor)) if self.prefactor else -math.inf
        lc -= gamma * math.log(self.scale_base)
        half_log_2pi = 0.5 * math.log(2 * math.pi)
        for t in self.numerator:
            re = t.offset + t.slope * gamma
            lc += half_log_2pi + (re - 0.5) * math.log(abs(t.slope))
        for t in self.denominator:
            re = t.offset + t.slope * gamma
            lc -= half_log_2pi + (re - 0.5) * math.log(abs(t.slope))
        return math.exp(lc)

    def __str__(self):
        return pretty(self)


def _at_pole(arg):
    arg = np.asarray(arg)
    re = arg.real
    return (arg.imag == 0) & (re <= 0) & (np.abs(re - np.round(re)) <= 1e-14 * np.maximum(1.0, np.abs(re)))


def pretty(sym: GammaQuotientSymbol) -> str:
    """``c * r^{-s} * Γ(a+A s)···/ Γ(b+B s)···``"""
    num = "·".join(str(t) for t in sym.numerator) or "1"
    den = "·".join(str(t) for t in sym.denominator) or "1"
    return f"{_fmt(sym.prefactor)} * {_fmt(sym.scale_base)}^{{-s}} * {num} / {den}"


# ---------------------------------------------------------------- operational rules

def rule_scale(sym: GammaQuotientSymbol, a: float) -> GammaQuotientSymbol:
    """Symbol of f(a t): scale_base multiplied by ``a``."""
    if not a > 0:
        raise DomainError(f"scale factor must be positive, got {a}")
    return sym.replace(scale_base=sym.scale_base * a)


def rule_power_mul(sym: GammaQuotientSymbol, alpha: float) -> GammaQuotientSymbol:
    """Symbol of t^alpha f(t), i.e. F(s + alpha)."""
    return sym.replace(
        prefactor=sym.prefactor * sym.scale_base ** (-alpha),
        numerator=[t.substitute(alpha, 1.0) for t in sym.numerator],
        denominator=[t.substitute(alpha, 1.0) for t in sym.denominator])


def rule_power_arg(sym: GammaQuotientSymbol, alpha: float) -> GammaQuotientSymbol:
    """Symbol of f(t^alpha), i.e. F(s / alpha) / |alpha|."""
    if alpha == 0:
        raise DomainError("power exponent must be non-zero")
    return sym.replace(
        prefactor=sym.prefactor / abs(alpha),
        scale_base=sym.scale_base ** (1.0 / alpha),
        numerator=[t.substitute(0.0, 1.0 / alpha) for t in sym.numerator],
        denominator=[t.substitute(0.0, 1.0 / alpha) for t in sym.denominator])


def _reflect(sym: GammaQuotientSymbol, extra_num=(), extra_den=()) -> GammaQuotientSymbol:
    # s -> 1 - s
    return sym.replace(
        prefactor=sym.prefactor / sym.scale_base,
        scale_base=1.0 / sym.scale_base,
        numerator=[t.substitute(1.0, -1.0) for t in sym.numerator] + list(extra_num),
        denominator=[t.substitute(1.0, -1.0) for t in sym.denominator] + list(extra_den))


def cm_dual(sym: GammaQuotientSymbol) -> GammaQuotientSymbol:
    """Symbol of s -> Gamma(s) * sym(1 - s)."""
    return _reflect(sym, extra_num=[GammaTerm(0.0, 1.0)])


def cm_dual_inverse(sym: GammaQuotientSymbol) -> GammaQuotientSymbol:
    """Symbol of s -> sym(1 - s) / Gamma(1 - s)."""
    return _reflect(sym, extra_den=[GammaTerm(1.0, -1.0)])


def _raw_strip(sym: GammaQuotientSymbol):
    lo = max((-t.offset / t.slope for t in sym.numerator if t.slope > 0), default=-math.inf)
    hi = min((t.offset / -t.slope for t in sym.numerator if t.slope < 0), default=math.inf)
    return lo, hi


def strip(sym: GammaQuotientSymbol) -> AnalyticStrip:
    """Strip between the rightmost left-family pole and the leftmost right-family pole."""
    lo, hi = _raw_strip(sym)
    return AnalyticStrip(lo, hi)


def convolve(f1: GammaQuotientSymbol, f2: GammaQuotientSymbol) -> GammaQuotientSymbol:
    """Symbol of the Mellin convolution: the product f1 * f2."""
    s1, s2 = strip(f1), strip(f2)
    s1.intersect(s2)
    return GammaQuotientSymbol(
        f1.prefactor * f2.prefactor, f1.scale_base * f2.scale_base,
        list(f1.numerator) + list(f2.numerator), list(f1.denominator) + list(f2.denominator))


def factor_divide(target: GammaQuotientSymbol, base: GammaQuotientSymbol) -> GammaQuotientSymbol:
    """Symbol ``q`` with ``convolve(base, q) == target``."""
    return GammaQuotientSymbol(
        target.prefactor / base.prefactor, target.scale_base / base.scale_base,
        list(target.numerator) + list(base.denominator),
        list(target.denominator) + list(base.numerator))


# ---------------------------------------------------------------- residue series

@dataclass(frozen=True)
class SeriesFamily:
    """Residues at the poles of one numerator term, as a series in X = scale * tau."""

    pole_term: GammaTerm
    series: LinearGammaSeries

    def pole(self, k: int) -> float:
        return (-self.pole_term.offset - k) / self.pole_term.slope


@dataclass(frozen=True)
class SeriesRep:
    """Compiled residue series ``sum_k c_k tau^{e_k}`` of a symbol on one side.

    ``families`` hold the exact coefficient structure (one per opening
    numerator term); ``terms`` materializes the first ``budget`` terms merged
    in order of exponent. ``arg_power`` is the exponent step of the family
    with the finest step.
    """

    symbol: GammaQuotientSymbol
    side: str
    families: tuple
    budget: int = DEFAULT_BUDGET

    @property
    def arg_power(self) -> float:
        steps = [f.series.e1 for f in self.families]
        return min(steps, key=abs)

    @property
    def terms(self):
        """List of ``(coeff, exponent)`` pairs, exponents strictly monotone."""
        from ._series import _double_coeffs

        out = []
        log_scale = math.log(self.symbol.scale_base)
        for fam in self.families:
            logmag, sign, expo = _double_coeffs(fam.series, self.budget)
            for lm, sg, e in zip(logmag, sign, expo):
                lc = lm + e * log_scale
                if lc > 700:
                    break
                c = 0.0 if math.isinf(lm) else sg * math.exp(lc)
                out.append((float(c), float(e)))
        out.sort(key=lambda p: p[1], reverse=self.side == "right")
        return out[: self.budget]

    def classify(self, tau: float) -> str:
        """Worst convergence class over families at ``tau``."""
        order = ["entire", "inside", "outside", "divergent"]
        log_x = math.log(self.symbol.scale_base * tau)
        kinds = [f.series.classify(log_x) for f in self.families]
        return max(kinds, key=order.index)

    def evaluate(self, tau: float, tol: float = 1e-12) -> EvalResult:
        """Sum of the convergent series at ``tau > 0``."""
        x = self.symbol.scale_base * tau
        parts = [sum_series(f.series, x, tol) for f in self.families]
        value = math.fsum(p.value for p in parts)
        err = sum(p.abs_err for p in parts) + EPS * sum(abs(p.value) for p in parts)
        if len(parts) > 1:
            # families cancel each other near pole collisions, which exposes
            # the rounding of their derived parameters
            err += sum(rounding_error(f.series, x, p.terms_used)
                       for f, p in zip(self.families, parts))
        return EvalResult(value, err, sum(p.terms_used for p in parts), "series")

    def asymptotic(self, tau: float, max_terms: int = 64) -> EvalResult:
        """Optimally truncated sum when the series only holds asymptotically."""
        x = self.symbol.scale_base * tau
        parts = [asymptotic_sum(f.series, x, max_terms) for f in self.families]
        value = math.fsum(p.value for p in parts)
        err = sum(p.abs_err for p in parts)
        return EvalResult(value, err, sum(p.terms_used for p in parts), "asymptotic")


def _snap(x: float) -> float:
    # derived offsets that are integers up to rounding are made exact, so a
    # reciprocal gamma at a pole contributes an exact zero
    k = round(x)
    return float(k) if abs(x - k) <= SNAP_TOL * max(1.0, abs(x)) else x


def _family_series(sym: GammaQuotientSymbol, idx: int) -> LinearGammaSeries:
    pole = sym.numerator[idx]
    a, A = pole.offset, pole.slope
    # s_k = (-a - k)/A; Gamma(c + C s_k) = Gamma(c - C a / A - (C / A) k)
    num = tuple((_snap(t.offset - t.slope * a / A), -t.slope / A)
                for j, t in enumerate(sym.numerator) if j != idx)
    den = tuple((_snap(t.offset - t.slope * a / A), -t.slope / A) for t in sym.denominator)
    den = den + ((1.0, 1.0),)
    return LinearGammaSeries(num=num, den=den, const=sym.prefactor / abs(A),
                             alternating=True, e0=a / A, e1=1.0 / A)


def _check_collisions(sym: GammaQuotientSymbol, idxs, n_terms: int):
    k = np.arange(n_terms, dtype=float)
    for i in idxs:
        a, A = sym.numerator[i].offset, sym.numerator[i].slope
        poles = (-a - k) / A
        for j, t in enumerate(sym.numerator):
            if j == i:
                continue
            arg = t.offset + t.slope * poles
            hit = (arg <= POLE_TOL) & (np.abs(arg - np.round(arg)) <= POLE_TOL)
            if np.any(hit):
                kk = int(k[np.argmax(hit)])
                raise DoublePoleError(
                    f"poles of {sym.numerator[i]} and {t} coincide at s = {poles[kk]:.12g}")


def residue_series(sym: GammaQuotientSymbol, side: str = "left",
                   budget: int = DEFAULT_BUDGET) -> SeriesRep:
    """Compile ``sym`` into the residue series from the poles on ``side``.

    Left poles come from numerator terms with positive slope, right poles
    from negative slopes. Every pole found on the side must be simple.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    want = (lambda A: A > 0) if side == "left" else (lambda A: A < 0)
    idxs = [i for i, t in enumerate(sym.numerator) if want(t.slope)]
    if not idxs:
        raise EmptyFamily(f"no numerator gamma term has poles on the {side}")
    _check_collisions(sym, idxs, MAX_TERMS)
    fams = tuple(SeriesFamily(sym.numerator[i], _family_series(sym, i)) for i in idxs)
    return SeriesRep(sym, side, fams, budget)


# ---------------------------------------------------------------- catalog

def _require(cond: bool, msg: str):
    if not cond:
        raise DomainError(msg)


def builtin(name: str, **p) -> GammaQuotientSymbol:
    """Named symbols of the Mellin-Barnes catalog.

    ``K``: kernel of the fundamental solution in the similarity variable
    (``alpha, beta, n``); ``K1``: its beta=1 case (``alpha, n``); ``K3`` /
    ``gauss``: Gamma(s/2); ``K2d``: n=2, beta=alpha/2 case (``alpha``);
    ``Phi1``, ``Phi2``, ``Phi31``, ``Psi3``: subordination kernel factors;
    ``MelPhi``: the Phi_{alpha,beta} kernel (``alpha, beta``); ``ML`` (``beta`` or
    ``rho, mu``): E(-t); ``Wright`` (``a, mu``): W_{a,mu}(-t); ``exp``:
    e^{-t}; ``Bessel`` (``nu``): J_nu(2 sqrt(t)); ``green_x``,
    ``green_reflected``, ``green_similarity`` (``alpha, beta, n, r, t``):
    the three Mellin-Barnes forms of G, to be inverted at tau = 1.
    ``cancel=False`` keeps matching numerator/denominator terms.
    """
    T = GammaTerm
    cancel = bool(p.pop("cancel", True))

    def Q(*args):
        return GammaQuotientSymbol(*args, cancel=cancel)

    if name == "K":
        a, b, n = _akn(p)
        return Q(1.0, 1.0,
                                   [T(0, 0.5), T(n / a, -1 / a), T(1 - n / a, 1 / a)],
                                   [T(1 - b * n / a, b / a), T(n / 2, -0.5)])
    if name == "K1":
        a, n = float(p["alpha"]), int(p["n"])
        _check_alpha(a)
        return Q(1.0, 1.0, [T(0, 0.5), T(n / a, -1 / a)], [T(n / 2, -0.5)])
    if name in ("K3", "gauss"):
        return Q(1.0, 1.0, [T(0, 0.5)], [])
    if name == "K2d":
        a = float(p["alpha"])
        _check_alpha(a)
        return Q(1.0, 1.0, [T(2 / a, -1 / a), T(1 - 2 / a, 1 / a)], [T(1, -0.5)])
    if name == "Phi1":
        a, b, n = _akn(p)
        return Q(1.0, 1.0, [T(1 - n / a, 1 / a)], [T(1 - b * n / a, b / a)])
    if name == "Phi2":
        a, b = float(p["alpha"]), float(p["beta"])
        _check_alpha(a)
        _check_beta(b)
        return Q(1.0, 1.0, [T(0, 0.5)], [T(1 - 2 * b / a, b / a)])
    if name == "Phi31":
        a, b, n = _akn(p)
        d = float(p["delta"])
        _require(0 < d <= 2, "delta must lie in (0, 2]")
        return Q(1.0, 1.0, [T(1 - d * n / a, d / a)], [T(1 - b * n / a, b / a)])
    if name == "Psi3":
        a, b, n = _akn(p)
        return Q(1.0, 1.0, [T(n / a, -1 / a), T(1 - n / a, 1 / a)],
                                   [T(1 - b * n / a, b / a), T(n / 2, -0.5)])
    if name == "MelPhi":
        a, b = float(p["alpha"]), float(p["beta"])
        _check_alpha(a)
        _check_beta(b)
        return Q(2 / a, 1.0, [T(2 / a, -2 / a), T(1 - 2 / a, 2 / a)],
                                   [T(1 - 2 * b / a, 2 * b / a), T(1, -1)])
    if name == "ML":
        if "rho" in p:
            rho, mu = float(p["rho"]), float(p.get("mu", 1.0))
        else:
            rho, mu = float(p["beta"]), 1.0
        _require(rho > 0, "Mittag-Leffler index must be positive")
        return Q(1.0, 1.0, [T(0, 1), T(1, -1)], [T(mu, -rho)])
    if name == "Wright":
        a, mu = float(p["a"]), float(p["mu"])
        _require(mu > -1, "Wright index mu must exceed -1")
        return Q(1.0, 1.0, [T(0, 1)], [T(a, -mu)])
    if name == "exp":
        return Q(1.0, 1.0, [T(0, 1)], [])
    if name == "Bessel":
        nu = float(p["nu"])
        return Q(1.0, 1.0, [T(nu / 2, 1)], [T(nu / 2 + 1, -1)])
    if name in ("green_x", "green_reflected", "green_similarity"):
        a, b, n = _akn(p)
        r, t = float(p["r"]), float(p["t"])
        _require(r > 0 and t > 0, "r and t must be positive")
        w = 2 * t ** (b / a)
        if name == "green_similarity":
            base = builtin("K", alpha=a, beta=b, n=n, cancel=cancel)
            pref = t ** (-b * n / a) / (a * (4 * math.pi) ** (n / 2))
            return base.replace(prefactor=pref, scale_base=r / w)
        pref = r ** (-n) / (a * math.pi ** (n / 2))
        if name == "green_x":
            return Q(pref, w / r,
                                       [T(n / 2, -0.5), T(0, 1 / a), T(1, -1 / a)],
                                       [T(1, -b / a), T(0, 0.5)])
        return Q(pref, r / w,
                                   [T(n / 2, 0.5), T(0, -1 / a), T(1, 1 / a)],
                                   [T(1, b / a), T(0, -0.5)])
    raise DomainError(f"unknown builtin symbol {name!r}")


def _check_alpha(a):
    _require(0 < a <= 2, f"alpha must lie in (0, 2], got {a}")


def _check_beta(b):
    _require(0 < b <= 2, f"beta must lie in (0, 2], got {b}")


def _akn(p):
    a, b, n = float(p["alpha"]), float(p["beta"]), int(p["n"])
    _check_alpha(a)
    _check_beta(b)
    _require(n >= 1, "dimension n must be a positive integer")
    return a, b, n


BUILTIN_NAMES = ("K", "K1", "K3", "gauss", "K2d", "Phi1", "Phi2", "Phi31", "Psi3", "MelPhi",
                 "ML", "Wright", "exp", "Bessel", "green_x", "green_reflected", "green_similarity")
