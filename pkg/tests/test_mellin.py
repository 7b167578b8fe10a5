import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sp

from fdwave import mellin
from fdwave.errors import DomainError, DoublePoleError, EmptyFamily, EmptyStrip
from fdwave.mellin import GammaQuotientSymbol, GammaTerm, builtin

T = GammaTerm


# ---------------------------------------------------------------- random symbols

slopes = st.floats(0.2, 2.0).flatmap(lambda a: st.sampled_from([a, -a]))
terms = st.builds(T, st.floats(-1.0, 2.0), slopes)
# numerator terms with Re(arg) > 0 at s = 1/2, so every strip contains 1/2
num_terms = st.builds(lambda arg, A: T(arg - 0.5 * A, A), st.floats(0.1, 2.0), slopes)


@st.composite
def symbols(draw):
    num = draw(st.lists(num_terms, min_size=1, max_size=3))
    den = draw(st.lists(terms, max_size=3))
    return GammaQuotientSymbol(draw(st.floats(0.1, 5.0)), draw(st.floats(0.2, 5.0)), num, den)


@given(symbols(), st.floats(0.1, 10.0))
def test_scale_roundtrip(sym, a):
    assert mellin.rule_scale(mellin.rule_scale(sym, a), 1 / a) == sym


@given(symbols(), st.floats(-2.0, 2.0))
def test_power_mul_roundtrip(sym, a):
    assert mellin.rule_power_mul(mellin.rule_power_mul(sym, a), -a) == sym


@given(symbols(), st.floats(0.25, 4.0).flatmap(lambda a: st.sampled_from([a, -a])))
def test_power_arg_roundtrip(sym, a):
    assert mellin.rule_power_arg(mellin.rule_power_arg(sym, a), 1 / a) == sym


@given(symbols())
def test_cm_dual_roundtrip(sym):
    assert mellin.cm_dual_inverse(mellin.cm_dual(sym)) == sym


@given(symbols())
def test_convolve_with_unit(sym):
    assert mellin.convolve(sym, GammaQuotientSymbol.unit()) == sym


@given(symbols())
def test_divide_by_self_is_unit(sym):
    assert mellin.factor_divide(sym, sym).is_unit()


@given(symbols())
def test_terms_canonically_sorted(sym):
    for group in (sym.numerator, sym.denominator):
        keys = [(t.slope, t.offset) for t in group]
        assert keys == sorted(keys)


# ---------------------------------------------------------------- types

def test_zero_slope_rejected():
    with pytest.raises(DomainError):
        T(1.0, 0.0)


def test_nonpositive_scale_rejected():
    with pytest.raises(DomainError):
        GammaQuotientSymbol(1.0, 0.0, [T(0, 1)])


def test_auto_cancellation():
    sym = GammaQuotientSymbol(1.0, 1.0, [T(0, 1), T(1, 0.5)], [T(1, 0.5)])
    assert sym.numerator == (T(0, 1),) and sym.denominator == ()


def test_cancel_false_keeps_terms():
    sym = GammaQuotientSymbol(1.0, 1.0, [T(1, 0.5)], [T(1, 0.5)], cancel=False)
    assert len(sym.numerator) == 1 and len(sym.denominator) == 1


def test_empty_strip_rejected():
    with pytest.raises(EmptyStrip):
        mellin.strip(GammaQuotientSymbol(1.0, 1.0, [T(0, 1), T(-1, -1)]))


# ---------------------------------------------------------------- operational rules

def test_scale_by_one_identity():
    sym = builtin("ML", beta=0.6)
    assert mellin.rule_scale(sym, 1.0) == sym


def test_power_mul_shifts_gamma():
    shifted = mellin.rule_power_mul(builtin("exp"), 0.7)
    assert shifted.numerator == (T(0.7, 1.0),)


def test_power_mul_zero_identity():
    sym = builtin("Wright", a=0.5, mu=0.3)
    assert mellin.rule_power_mul(sym, 0.0) == sym


@pytest.mark.parametrize("a", [0.5, 2.0, -1.5])
def test_power_arg_of_exp(a):
    sym = mellin.rule_power_arg(builtin("exp"), a)
    assert sym.numerator == (T(0.0, 1 / a),)
    assert sym.prefactor == pytest.approx(1 / abs(a))


def test_power_arg_one_identity():
    sym = builtin("K", alpha=1.5, beta=0.6, n=2)
    assert mellin.rule_power_arg(sym, 1.0) == sym


def test_scale_rule_matches_values():
    # f(a t) has Mellin transform a^{-s} F(s)
    sym, a, s = builtin("exp"), 2.5, 1.3 + 0.4j
    assert mellin.rule_scale(sym, a)(s) == pytest.approx(a ** -s * sp.gamma(s), rel=1e-13)


def test_rule_power_arg_values():
    # f(t^a) -> F(s/a)/|a|
    sym, a, s = builtin("exp"), 0.5, 0.8 + 0.2j
    assert mellin.rule_power_arg(sym, a)(s) == pytest.approx(sp.gamma(s / a) / a, rel=1e-13)


# ---------------------------------------------------------------- builtins

def test_gaussian_kernel_cancels_to_half_gamma():
    assert builtin("K", alpha=2, beta=1, n=3) == GammaQuotientSymbol(1.0, 1.0, [T(0, 0.5)])


def test_ml_symbol():
    assert builtin("ML", beta=0.6) == GammaQuotientSymbol(1.0, 1.0, [T(0, 1), T(1, -1)], [T(1, -0.6)])


def test_wright_symbol():
    assert builtin("Wright", a=0.7, mu=0.4) == GammaQuotientSymbol(1.0, 1.0, [T(0, 1)], [T(0.7, -0.4)])


def test_unknown_builtin():
    with pytest.raises(DomainError):
        builtin("nope")


@pytest.mark.parametrize("kw", [dict(alpha=2.5, beta=0.5, n=1), dict(alpha=1.5, beta=0.0, n=1)])
def test_builtin_ranges(kw):
    with pytest.raises(DomainError):
        builtin("K", **kw)


def test_cm_dual_of_wright_is_ml_type():
    # Gamma(s) Gamma(1-s) / Gamma(a - mu (1-s))
    dual = mellin.cm_dual(builtin("Wright", a=1.0, mu=0.6))
    assert dual == GammaQuotientSymbol(1.0, 1.0, [T(0, 1), T(1, -1)], [T(0.4, 0.6)])


def test_cm_dual_of_melphi_factor():
    a, b = 1.5, 0.6
    # symbol Gamma(1 - 2s/a) / Gamma(1 - 2bs/a) reflected at s -> 1 - s, times Gamma(s)
    base = GammaQuotientSymbol(1.0, 1.0, [T(1 - 2 / a, 2 / a)], [T(1 - 2 * b / a, 2 * b / a)])
    base = mellin.rule_power_arg(mellin.cm_dual(base), 1.0)
    want = GammaQuotientSymbol(1.0, 1.0, [T(0, 1), T(1, -2 / a)], [T(1 - 2 * b / a + 2 * b / a, -2 * b / a)])
    assert base == want


# ---------------------------------------------------------------- strips

@pytest.mark.parametrize("sym, lo, hi", [
    (builtin("exp"), 0.0, math.inf),
    (builtin("K", alpha=1.5, beta=0.7, n=1), 0.0, 1.0),
    (builtin("K", alpha=1.2, beta=0.7, n=3), 1.8, 3.0),
    (builtin("ML", beta=0.6), 0.0, 1.0),
    # the computed strip of the Phi_{alpha,beta} symbol; see the ledger for the mismatch
    (builtin("MelPhi", alpha=1.5, beta=0.6), 1 - 1.5 / 2, 1.0),
])
def test_strip_examples(sym, lo, hi):
    st_ = mellin.strip(sym)
    assert st_.lo == pytest.approx(lo) and st_.hi == pytest.approx(hi)


def test_strip_contains_and_width():
    s = mellin.strip(builtin("ML", beta=0.6))
    assert s.contains(0.5) and not s.contains(1.0) and s.width == pytest.approx(1.0)


def test_convolve_checks_strips():
    left = GammaQuotientSymbol(1.0, 1.0, [T(-2, 1)])       # Re s > 2
    right = GammaQuotientSymbol(1.0, 1.0, [T(1, -1)])      # Re s < 1
    with pytest.raises(EmptyStrip):
        mellin.convolve(left, right)


# ---------------------------------------------------------------- factorizations

FACTORS = [
    ("K", dict(alpha=1.5, beta=0.6, n=2), dict(alpha=1.5, beta=1.0, n=2),
     ("Phi1", dict(alpha=1.5, beta=0.6, n=2))),
    ("K", dict(alpha=1.5, beta=0.5, n=2), dict(alpha=1.5, beta=0.75, n=2),
     ("Phi2", dict(alpha=1.5, beta=0.5))),
    ("K", dict(alpha=1.3, beta=0.4, n=3), None, ("Psi3", dict(alpha=1.3, beta=0.4, n=3))),
    ("K", dict(alpha=1.7, beta=0.6, n=1), dict(alpha=1.7, beta=0.9, n=1),
     ("Phi31", dict(alpha=1.7, beta=0.6, n=1, delta=0.9))),
]


@pytest.mark.parametrize("name, tp, bp, factor", FACTORS)
def test_factorizations(name, tp, bp, factor):
    target = builtin(name, **tp)
    base = builtin("K3") if bp is None else builtin(name, **bp)
    q = mellin.factor_divide(target, base)
    assert q == builtin(factor[0], **factor[1])
    assert mellin.convolve(base, q) == target


@pytest.mark.parametrize("name, tp, bp, factor", FACTORS)
@given(u=st.floats(-5.0, 5.0), frac=st.floats(0.05, 0.95))
def test_factor_values_multiply(name, tp, bp, factor, u, frac):
    target = builtin(name, **tp)
    base = builtin("K3") if bp is None else builtin(name, **bp)
    q = mellin.factor_divide(target, base)
    lo, hi = mellin.strip(target).lo, mellin.strip(target).hi
    s = lo + frac * (hi - lo) + 1j * u
    assert target(s) == pytest.approx(base(s) * q(s), rel=1e-12)


def test_gaussian_base_gives_unit_kernel():
    for n in (1, 2, 3):
        assert mellin.factor_divide(builtin("K", alpha=2, beta=1, n=n), builtin("K3")).is_unit()


# ---------------------------------------------------------------- residue series

@given(st.floats(0.0, 5.0))
def test_exp_series(tau):
    rep = mellin.residue_series(builtin("exp"), "left")
    assert abs(rep.evaluate(tau).value - math.exp(-tau)) <= 1e-12


def test_exp_series_terms():
    terms = mellin.residue_series(builtin("exp"), "left").terms[:6]
    for k, (c, e) in enumerate(terms):
        assert c == pytest.approx((-1) ** k / math.factorial(k), rel=1e-14) and e == k


@pytest.mark.parametrize("a, b, n", [(1.5, 0.6, 1), (1.2, 0.3, 2), (1.8, 0.85, 3)])
def test_phi1_series_coefficients(a, b, n):
    terms = mellin.residue_series(builtin("Phi1", alpha=a, beta=b, n=n), "left").terms[:10]
    for k, (c, e) in enumerate(terms):
        want = a * (-1) ** k * float(sp.rgamma(1 - b - b * k)) / math.factorial(k)
        assert c == pytest.approx(want, rel=1e-12, abs=1e-14)
        assert e == pytest.approx(a * (k + 1) - n, abs=1e-12)


def test_melphi_right_series_coefficients():
    # poles of Gamma(2/a - 2s/a) at s = 1 + a k / 2 give
    # (-1)^k tau^{-1-ak/2} / (Gamma(1 + bk) Gamma(-ak/2))
    a, b = 1.5, 0.6
    terms = mellin.residue_series(builtin("MelPhi", alpha=a, beta=b), "right").terms[:8]
    for k, (c, e) in enumerate(terms):
        want = (-1) ** k * float(sp.rgamma(1 + b * k) * sp.rgamma(-a * k / 2))
        assert c == pytest.approx(want, rel=1e-12, abs=1e-14)
        assert e == pytest.approx(-1 - a * k / 2)


def test_series_exponents_monotone():
    for side in ("left", "right"):
        rep = mellin.residue_series(builtin("K", alpha=math.sqrt(2), beta=0.7, n=1), side)
        ex = [e for _, e in rep.terms]
        d = np.diff(ex)
        assert np.all(d > 0) if side == "left" else np.all(d < 0)


def test_double_pole_uncancelled():
    with pytest.raises(DoublePoleError):
        mellin.residue_series(builtin("K", alpha=2, beta=1, n=2, cancel=False), "left")


def test_double_pole_rational_alpha():
    with pytest.raises(DoublePoleError):
        mellin.residue_series(builtin("K", alpha=1.5, beta=0.7, n=1), "left")


def test_empty_family():
    with pytest.raises(EmptyFamily):
        mellin.residue_series(builtin("exp"), "right")


def test_bad_side():
    with pytest.raises(ValueError):
        mellin.residue_series(builtin("exp"), "up")


def test_pretty_format():
    s = mellin.pretty(builtin("ML", beta=0.5))
    assert s == "1 * 1^{-s} * Γ(1-1 s)·Γ(0+1 s) / Γ(1-0.5 s)"
