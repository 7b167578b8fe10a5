"""Named invariant suites behind ``fdwave verify``.

Each check yields a :class:`Check` whose ``observed`` value is compared with
``bound`` (smaller is better). Functions under test are looked up on their
modules at call time, so a patched evaluator is what gets checked.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

import numpy as np
from scipy import special as sp

from . import greens, mbquad, mellin, specfun, subord
from .errors import DomainError, DoublePoleError, EmptyFamily, NonConvergence, SingularAtOrigin

SUITES = ("specfun", "mellin", "mbquad", "greens", "subord")


@dataclass(frozen=True)
class Check:
    suite: str
    check: str
    status: str
    observed: float
    bound: float

    def as_dict(self) -> dict:
        return asdict(self)


def _check(suite: str, name: str, observed: float, bound: float) -> Check:
    observed = float(observed)
    ok = math.isfinite(observed) and observed <= bound
    return Check(suite, name, "pass" if ok else "fail", observed, float(bound))


def _raises(fn: Callable[[], object], exc) -> float:
    """0 when ``fn`` raises ``exc``, 1 otherwise."""
    try:
        fn()
    except exc:
        return 0.0
    return 1.0


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------- specfun

def suite_specfun(tol: float) -> Iterator[Check]:
    s = "specfun"
    ml = lambda order, x: specfun.ml_eval(order, x).value
    xs = np.linspace(0, 20, 41)
    yield _check(s, "ml_exp", max(abs(ml(1.0, -x) - math.exp(-x)) for x in xs), 1e-12)
    xs = np.linspace(0, 50, 51)
    yield _check(s, "ml_cos", max(abs(ml(2.0, -x * x) - math.cos(x)) for x in xs), 1e-10)
    yield _check(s, "ml_half_erfc", _rel(ml(0.5, -1.0), float(sp.erfcx(1.0))), 1e-12)
    lo = specfun.ml_eval(0.6, -12.0 + 1e-9)
    hi = specfun.ml_eval(0.6, -12.0 - 1e-9)
    yield _check(s, "ml_switch_overlap", abs(lo.value - hi.value),
                 10 * (lo.abs_err + hi.abs_err) + 1e-9)
    yield _check(s, "wright_bessel_i0",
                 _rel(specfun.wright_eval((1.0, 1.0), 1.0).value, float(sp.i0(2.0))), 1e-13)
    zs = np.linspace(0, 8, 17)
    gauss = max(abs(specfun.wright_eval((0.5, -0.5), -z).value - math.exp(-z * z / 4) / math.sqrt(math.pi))
                for z in zs)
    yield _check(s, "wright_gaussian", gauss, 1e-12)
    worst = 0.0
    for a in (0.3, 0.5, 0.8):
        params, pref = specfun.cm7_params(a, 1 / a, -1 / a)
        for lam in np.linspace(0, 5, 11):
            lhs = pref * specfun.gen_wright_eval(params, -lam).value
            worst = max(worst, abs(lhs - specfun.ml_eval((a, a), -lam).value))
    yield _check(s, "cm8_reduction", worst, 1e-10)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        b, nu, z = rng.uniform(0.2, 2), rng.uniform(-0.6, 1.2), rng.uniform(-6, 3)
        f = specfun.four_param_wright_eval(specfun.FourParamOrder(1.0, 1.0, b, nu), z)
        w = specfun.wright_eval((b, nu), z)
        worst = max(worst, abs(f.value - w.value) / (f.abs_err + w.abs_err + 1e-15))
    yield _check(s, "four_param_reduction", worst, 1.0)
    order = specfun.FourParamOrder(1.0, 0.5, 0.0, -0.5)
    yield _check(s, "four_param_radius",
                 _raises(lambda: specfun.four_param_wright_eval(order, -1.0), DomainError), 0)
    yield _check(s, "bessel_j1_zero", abs(specfun.bessel_j(1.0, 3.8317059702).value), 1e-9)
    xs = np.linspace(0.1, 30, 40)
    yield _check(s, "bessel_vs_scipy",
                 max(abs(specfun.bessel_j(0.5 * k, x).value - sp.jv(0.5 * k, x))
                     for k in range(0, 4) for x in xs), 1e-11)
    grid = np.linspace(0.1, 10, 12)
    for b in (0.25, 0.5, 0.75, 1.0):
        rep = specfun.cm_difference_test(lambda x, b=b: specfun.ml_eval(b, -x), 8, grid, 0.1)
        yield _check(s, f"cm_ml_beta_{b:g}", len(rep.violations), 0)
    params, pref = specfun.cm7_params(0.5, 2.0, -2.0)
    rep = specfun.cm_difference_test(
        lambda x: pref * specfun.gen_wright_eval(params, -x).value, 8, grid, 0.1)
    yield _check(s, "cm_psi11", len(rep.violations), 0)
    rep = specfun.cm_difference_test(math.cos, 2, [0.5, 1.0], 0.1)
    yield _check(s, "cm_detects_cos", 0.0 if rep.violations else 1.0, 0)


# ---------------------------------------------------------------- mellin

def _factorizations():
    a, b, n = 1.5, 0.6, 2
    K = lambda **p: mellin.builtin("K", **p)
    yield "Pr_1", K(alpha=a, beta=b, n=n), K(alpha=a, beta=1.0, n=n), \
        mellin.builtin("Phi1", alpha=a, beta=b, n=n)
    yield "Pr_2", K(alpha=a, beta=0.5, n=2), K(alpha=a, beta=a / 2, n=2), \
        mellin.builtin("Phi2", alpha=a, beta=0.5)
    yield "Pr_3", K(alpha=a, beta=b, n=n), mellin.builtin("K3"), \
        mellin.builtin("Psi3", alpha=a, beta=b, n=n)
    yield "Pr_31", K(alpha=a, beta=b, n=n), K(alpha=a, beta=0.8, n=n), \
        mellin.builtin("Phi31", alpha=a, beta=b, n=n, delta=0.8)


def suite_mellin(tol: float) -> Iterator[Check]:
    s = "mellin"
    for name, target, base, factor in _factorizations():
        q = mellin.factor_divide(target, base)
        ok = q == factor and mellin.convolve(base, q) == target
        yield _check(s, f"factorization_{name}", 0.0 if ok else 1.0, 0)
        lo, hi = mellin.strip(target).lo, mellin.strip(target).hi
        sv = 0.5 * (lo + hi) + 0.3j
        yield _check(s, f"factor_values_{name}",
                     abs(target(sv) / (base(sv) * factor(sv)) - 1), 1e-12)
    u = mellin.factor_divide(mellin.builtin("K", alpha=2, beta=1, n=3), mellin.builtin("K3"))
    yield _check(s, "unit_kernel_2_1", 0.0 if u.is_unit() else 1.0, 0)
    raw = mellin.builtin("K", alpha=2, beta=1, n=2, cancel=False)
    yield _check(s, "raw_double_pole_detected",
                 _raises(lambda: mellin.residue_series(raw, "left"), DoublePoleError), 0)
    rep = mellin.residue_series(mellin.builtin("exp"), "left")
    yield _check(s, "exp_series", max(abs(rep.evaluate(t).value - math.exp(-t))
                                      for t in np.linspace(0.01, 5, 25)), 1e-12)
    a, b, n = 1.5, 0.6, 1
    terms = mellin.residue_series(mellin.builtin("Phi1", alpha=a, beta=b, n=n), "left").terms[:8]
    worst = 0.0
    for k, (c, e) in enumerate(terms):
        want = a * (-1) ** k * float(sp.rgamma(1 - b - b * k)) / math.factorial(k)
        worst = max(worst, abs(c - want) / max(abs(want), 1.0) + abs(e - (a * (k + 1) - n)))
    yield _check(s, "phi1_series_coefficients", worst, 1e-12)
    sym = mellin.builtin("Wright", a=0.7, mu=0.4)
    yield _check(s, "cm_dual_roundtrip",
                 0.0 if mellin.cm_dual_inverse(mellin.cm_dual(sym)) == sym else 1.0, 0)


# ---------------------------------------------------------------- mbquad

def _catalog():
    yield "Phi1", mellin.builtin("Phi1", alpha=1.5, beta=0.6, n=1)
    yield "Phi2", mellin.builtin("Phi2", alpha=1.6, beta=0.5)
    yield "MelPhi", mellin.builtin("MelPhi", alpha=1.5, beta=0.6)
    yield "ML", mellin.builtin("ML", beta=0.6)
    # irrational-looking alpha keeps the left pole families of K apart
    yield "K_1.4142_0.7_1", mellin.builtin("K", alpha=math.sqrt(2), beta=0.7, n=1)
    yield "K_1.7321_0.6_2", mellin.builtin("K", alpha=1.7321, beta=0.6, n=2)


def _series_value(sym, tau: float):
    for side in ("left", "right"):
        try:
            rep = mellin.residue_series(sym, side)
        except (DoublePoleError, EmptyFamily):
            continue
        if rep.classify(tau) in ("entire", "inside"):
            try:
                return rep.evaluate(tau, 1e-12)
            except NonConvergence:
                continue
    return None


def suite_mbquad(tol: float) -> Iterator[Check]:
    s = "mbquad"
    for name, sym in _catalog():
        worst = 0.0
        for tau in (0.25, 1.0, 4.0):
            ser = _series_value(sym, tau)
            if ser is None:
                continue
            q = mbquad.inverse_mellin(sym, tau, tol=1e-11)
            worst = max(worst, abs(q.value - ser.value) / (q.abs_err + ser.abs_err + 1e-14))
        yield _check(s, f"series_vs_quadrature_{name}", worst, 1.0)
    phi = mbquad.inverse_mellin(mellin.builtin("MelPhi", alpha=1.0, beta=0.5), 4.0)
    yield _check(s, "melphi_closed_tau_4", abs(phi.value - 1 / (10 * math.pi)), 1e-10)
    sym = mellin.builtin("K", alpha=1.5, beta=0.75, n=1)
    g = mbquad.auto_gamma(sym)
    vals = [mbquad.inverse_mellin(sym, 0.7, gamma=g + d, tol=1e-11).value for d in (-0.2, 0.0, 0.2)]
    yield _check(s, "contour_shift", max(vals) - min(vals), 1e-9)
    p, pt = (1.5, 0.75, 1), (0.8, 1.3)
    forms = [greens.g_quadrature(p, pt, tol=1e-11, form=f).value
             for f in ("green_x", "green_reflected", "green_similarity")]
    yield _check(s, "three_representations", max(forms) - min(forms), 1e-9)
    yield _check(s, "log_gamma_abs", abs(abs(np.exp(mbquad.log_gamma(0.5 + 10j))) ** 2
                                         / (math.pi / math.cosh(10 * math.pi)) - 1), 1e-12)


# ---------------------------------------------------------------- greens

def origin_extrapolation_gap(alpha: float, beta: float, r0: float = 1e-4) -> float:
    """|G(0, 1) - extrapolated G(r -> 0, 1)| in one dimension.

    Near the origin G(r) = G(0) - c r^{alpha - 1} + ..., so two samples at
    r0 and 2 r0 are extrapolated in that power.
    """
    p = (alpha, beta, 1)
    e = alpha - 1
    g1, g2 = (greens.g_eval(p, (r, 1.0)).value for r in (r0, 2 * r0))
    w1, w2 = r0 ** e, (2 * r0) ** e
    extrap = (g1 * w2 - g2 * w1) / (w2 - w1)
    return abs(greens.g_origin(p, 1.0).value - extrap)


def suite_greens(tol: float) -> Iterator[Check]:
    s = "greens"
    worst = 0.0
    for n in (1, 2, 3):
        for r in np.linspace(0.1, 5, 5):
            for t in np.linspace(0.1, 5, 5):
                v = greens.g_eval((2.0, 1.0, n), (r, t)).value
                ref = (4 * math.pi * t) ** (-n / 2) * math.exp(-r * r / (4 * t))
                worst = max(worst, _rel(v, ref))
    yield _check(s, "gaussian_limit", worst, 1e-8)
    for a, b in ((2.0, 0.5), (1.5, 0.75), (1.8, 1.0)):
        for n in (1, 2, 3):
            mass, err = greens.radial_mass((a, b, n), 1.0, tol=tol)
            yield _check(s, f"normalization_{a:g}_{b:g}_{n}", abs(mass - 1), max(tol, err))
    worst = 0.0
    for r in np.geomspace(1e-2, 10, 9):
        for t in np.geomspace(0.1, 10, 5):
            g = greens.g_eval((1.5, 0.75, 2), (r, t))
            worst = max(worst, -(g.value + g.abs_err))
    yield _check(s, "non_negative", worst, 0.0)
    yield _check(s, "origin_1d", origin_extrapolation_gap(1.5, 0.75), 1e-4)
    yield _check(s, "origin_singular",
                 _raises(lambda: greens.g_origin((1.5, 0.75, 2), 1.0), SingularAtOrigin), 0)
    worst = 0.0
    for p, pt in (((1.5, 0.75, 1), (1.0, 1.0)), ((1.8, 0.6, 2), (0.7, 1.5))):
        h = greens.g_hankel_oracle(p, pt, tol=1e-8).value
        q = greens.g_quadrature(p, pt, tol=1e-10).value
        e = greens.g_eval(p, pt).value
        worst = max(worst, max(h, q, e) - min(h, q, e))
    yield _check(s, "three_route_hankel", worst, 1e-4)


# ---------------------------------------------------------------- subord

def suite_subord(tol: float) -> Iterator[Check]:
    s = "subord"
    phi = lambda a, b, tau: subord.kernel_phi(a, b, tau).value
    closed = max(_rel(phi(1.0, 0.5, tau), 1 / (math.pi * math.sqrt(tau) * (1 + tau)))
                 for tau in (0.1, 0.5, 1.0, 2.0, 10.0))
    yield _check(s, "case3_closed_form", closed, 1e-10)
    yield _check(s, "case3_finite_at_tau_1",
                 0.0 if math.isfinite(phi(1.4, 0.7, 1.0)) else 1.0, 0)
    worst = 0.0
    for a in (0.8, 1.0, 1.4):
        for tau in (0.2, 0.6, 0.9, 1.1, 2.0, 6.0):
            v, bound = subord.phi_sine_series(a, tau)
            worst = max(worst, abs(phi(a, a / 2, tau) - v) / (bound + 1e-13))
    yield _check(s, "case3_sine_series", worst, 1.0)
    worst = 0.0
    for tau in (1.2, 2.0, 5.0, 20.0, 50.0):
        worst = max(worst, abs(phi(1.5, 0.9, tau) - subord.phi_shifted(1.5, 0.9, tau).value))
    yield _check(s, "shifted_series_equivalence", worst, 1e-10)
    for kern in (subord.TheoremPhi(1.5, 0.6), subord.WrightRatio(0.5),
                 subord.GeneralPhi(1.5, 0.5, 1.0, 2), subord.ExampleOnePdf(0.5, 1.0)):
        rep = subord.pdf_verify(kern)
        name = type(kern).__name__
        yield _check(s, f"mass_{name}", abs(rep.mass - 1), 1e-8)
        yield _check(s, f"min_{name}", -rep.min_sampled, 1e-10)
    yield _check(s, "laplace_1_0.5", subord.laplace_verify(1.0, 0.5, [0.1, 1.0, 5.0]), 1e-7)
    worst = 0.0
    for tau in (0.3, 1.0, 3.0):
        a2 = phi(2.0, 0.5, tau)
        ref = subord.kernel_wright(0.5, tau, 1.0).value
        worst = max(worst, _rel(a2, ref))
    yield _check(s, "alpha_2_reduction", worst, 1e-9)
    r, t = 0.8, 1.2
    sub = subord.subordinate(subord.TheoremPhi(1.5, 0.6), subord.gaussian_base(1), (r, t), tol=1e-7)
    ref = greens.g_eval((1.5, 0.6, 1), (r, t))
    yield _check(s, "phi_subordination_identity", abs(sub.value - ref.value),
                 max(1e-6, sub.abs_err + ref.abs_err))


RUNNERS = {
    "specfun": suite_specfun,
    "mellin": suite_mellin,
    "mbquad": suite_mbquad,
    "greens": suite_greens,
    "subord": suite_subord,
}


def run_suite(name: str, tol: float = 1e-7) -> Iterator[Check]:
    """Checks of one suite, or of every suite for ``all``."""
    if name == "all":
        for n in SUITES:
            yield from RUNNERS[n](tol)
        return
    if name not in RUNNERS:
        raise DomainError(f"unknown suite {name!r}")
    yield from RUNNERS[name](tol)
