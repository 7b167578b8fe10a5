"""The twelve primary acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import math

import numpy as np
import pytest

from fdwave import greens, mbquad, mellin, specfun, subord
from fdwave.errors import DoublePoleError, EmptyFamily, NonConvergence, SingularAtOrigin
from fdwave.result import EvalResult
from fdwave.subord import ExampleOnePdf, GeneralPhi, TheoremPhi, WrightRatio
from fdwave.verify import origin_extrapolation_gap

from oracles import mp_residue_sum

# subordination integrals run at a tenth of the 1e-6 criterion bound
SUB_TOL = 1e-7
builtin = mellin.builtin
GRID3 = [(r, t) for r in (0.5, 1.0, 2.0) for t in (0.5, 1.0, 2.0)]


@pytest.fixture
def record(request):
    def _record(cid, desc, ok, detail):
        request.config.fdwave_acceptance[cid] = (desc, bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'}  {cid:>2}  {desc}  ({detail})")
        assert ok, f"criterion {cid} failed: {detail}"
    return _record


def test_01_gaussian_limit(record):
    worst = 0.0
    for n in (1, 2, 3):
        for r in np.linspace(0.1, 5, 5):
            for t in np.linspace(0.1, 5, 5):
                v = greens.g_eval((2.0, 1.0, n), (r, t)).value
                ref = (4 * math.pi * t) ** (-n / 2) * math.exp(-r * r / (4 * t))
                worst = max(worst, abs(v - ref) / ref)
    record(1, "Gaussian limit", worst <= 1e-8, f"max rel err {worst:.2e} <= 1e-8")


def test_02_phi_subordination_identity(record):
    worst = 0.0
    for a, b in ((2.0, 0.5), (1.5, 0.6), (1.2, 0.5), (1.5, 0.9)):
        kern = TheoremPhi(a, b)
        for n in (1, 2, 3):
            base = subord.gaussian_base(n)
            for pt in GRID3:
                s = subord.subordinate(kern, base, pt, tol=SUB_TOL)
                g = greens.g_eval((a, b, n), pt)
                worst = max(worst, abs(s.value - g.value) / max(1e-6, s.abs_err + g.abs_err))
    record(2, "Phi subordination identity", worst <= 1.0,
           f"max |diff| / max(1e-6, err) = {worst:.3f} <= 1")


def test_03_time_fractional_subordination(record):
    worst = 0.0
    for a, b in ((2.0, 0.5), (1.5, 0.7)):
        for n in (1, 2):
            base = subord.space_frac_base(a, n)
            for pt in ((0.5, 1.0), (1.0, 0.5), (2.0, 2.0)):
                s = subord.subordinate(WrightRatio(b), base, pt, tol=SUB_TOL)
                g = greens.g_eval((a, b, n), pt)
                worst = max(worst, abs(s.value - g.value))
    record(3, "time-fractional subordination", worst <= 1e-6, f"max |diff| {worst:.2e} <= 1e-6")


def test_04_two_dimensional_closed_form(record):
    worst = 0.0
    for a, b in ((1.6, 0.5), (1.2, 0.4)):
        base = subord.two_d_base(a)
        kern = WrightRatio(2 * b / a)
        for pt in ((0.5, 1.0), (1.0, 0.5), (2.0, 2.0)):
            s = subord.subordinate(kern, base, pt, tol=SUB_TOL)
            g = greens.g_eval((a, b, 2), pt)
            worst = max(worst, abs(s.value - g.value))
    record(4, "2-D alpha-fractional base", worst <= 1e-6, f"max |diff| {worst:.2e} <= 1e-6")


def _kernel_draws():
    rng = np.random.default_rng(20261014)
    out = []
    for _ in range(6):
        out.append(WrightRatio(rng.uniform(0.2, 0.8)))
        a = rng.uniform(0.8, 2.0)
        out.append(TheoremPhi(a, rng.uniform(0.2, min(1.0, (4 - a) / 2 - 0.05))))
        d = rng.uniform(0.8, 2.0)
        out.append(GeneralPhi(rng.uniform(1.0, 2.0), rng.uniform(0.2, 0.9) * d, d,
                              int(rng.integers(1, 4))))
        a1 = rng.uniform(0.3, 0.8)
        out.append(ExampleOnePdf(a1, a1 + rng.uniform(0.0, 0.8)))
    out += [ExampleOnePdf(0.5, 0.5), ExampleOnePdf(0.5, 1.0), ExampleOnePdf(0.7, 1.2)]
    return out


def test_05_kernel_pdf_properties(record):
    mass_err, minimum = 0.0, math.inf
    for kern in _kernel_draws():
        rep = subord.pdf_verify(kern)
        mass_err = max(mass_err, abs(rep.mass - 1))
        minimum = min(minimum, rep.min_sampled)
    ok = mass_err <= 1e-8 and minimum >= -1e-10
    record(5, "kernel pdf mass and sign", ok,
           f"max |mass-1| {mass_err:.2e} <= 1e-8, min {minimum:.2e} >= -1e-10")


def test_06_case3_closed_form(record):
    closed = max(abs(subord.kernel_phi(1.0, 0.5, tau).value - 1 / (math.pi * math.sqrt(tau) * (1 + tau)))
                 for tau in (0.1, 0.5, 1.0, 2.0, 10.0))
    ratio = 0.0
    for tau in np.concatenate([np.linspace(0.02, 0.9, 15), np.linspace(1.1, 9.9, 15)]):
        series, bound = subord.phi_sine_series(1.0, tau, terms=400)
        v = subord.kernel_phi(1.0, 0.5, tau).value
        ratio = max(ratio, abs(series - v) / (bound + 4e-16 * abs(v)))
    ok = closed <= 1e-10 and ratio <= 1.0
    record(6, "case-(iii) closed form", ok,
           f"closed err {closed:.2e} <= 1e-10, series diff / truncation bound {ratio:.2f} <= 1")


def test_07_laplace_identity(record):
    lams = (0.1, 0.5, 1.0, 2.0, 5.0)
    worst = max(subord.laplace_verify(a, b, lams) for a, b in ((2.0, 0.5), (1.0, 0.5), (1.5, 0.75)))
    record(7, "Laplace identity", worst <= 1e-7, f"max rel err {worst:.2e} <= 1e-7")


def _catalog():
    yield builtin("Phi1", alpha=1.5, beta=0.6, n=1)
    yield builtin("Phi2", alpha=1.6, beta=0.5)
    yield builtin("MelPhi", alpha=1.5, beta=0.6)
    yield builtin("ML", beta=0.6)
    rng = np.random.default_rng(8)
    for _ in range(5):
        # irrational-looking alpha keeps the left pole families apart
        a = rng.uniform(1.05, 1.95)
        yield builtin("K", alpha=a, beta=rng.uniform(0.2, 1.0), n=int(rng.integers(1, 4)))


def _series(sym, tau):
    for side in ("left", "right"):
        try:
            rep = mellin.residue_series(sym, side)
        except (DoublePoleError, EmptyFamily):
            continue
        if rep.classify(tau) in ("entire", "inside"):
            try:
                return rep.evaluate(tau, 1e-12)
            except NonConvergence:
                # cancellation beyond the escalation cap: sum it in mpmath
                return EvalResult(mp_residue_sum(rep, tau), 1e-300, 0)
    raise AssertionError("no convergent residue series")


def test_08_series_quadrature_oracles(record):
    ratio = 0.0
    for sym in _catalog():
        for tau in (0.25, 1.0, 4.0):
            s = _series(sym, tau)
            q = mbquad.inverse_mellin(sym, tau, tol=1e-11)
            ratio = max(ratio, abs(s.value - q.value) / (s.abs_err + q.abs_err + 1e-300))
    sym = builtin("K", alpha=1.5, beta=0.75, n=1)
    g = mbquad.auto_gamma(sym)
    vals = [mbquad.inverse_mellin(sym, 0.7, gamma=g + d, tol=1e-11).value for d in (-0.2, 0.0, 0.2)]
    shift = max(vals) - min(vals)
    rep = 0.0
    for p, pt in (((1.5, 0.75, 1), (0.8, 1.3)), ((1.8, 0.6, 2), (1.2, 0.7)), ((1.3, 0.9, 3), (0.5, 2.0))):
        forms = [greens.g_quadrature(p, pt, tol=1e-11, form=f).value
                 for f in ("green_x", "green_reflected", "green_similarity")]
        rep = max(rep, max(forms) - min(forms))
    ok = ratio <= 1.0 and shift <= 1e-9 and rep <= 1e-9
    record(8, "series/quadrature oracles", ok,
           f"diff / combined err {ratio:.2f} <= 1, shift {shift:.1e} <= 1e-9, forms {rep:.1e} <= 1e-9")


def test_09_hankel_three_routes(record):
    draws = [((1.5, 0.75, 1), (1.0, 1.0)), ((1.8, 0.6, 2), (0.7, 1.5)), ((1.3, 0.5, 3), (1.2, 0.8)),
             ((1.9, 0.9, 1), (2.0, 2.0)), ((1.6, 0.4, 2), (0.5, 0.6))]
    worst = 0.0
    for p, pt in draws:
        assert p[2] < 2 * p[0] + 1
        vals = [greens.g_hankel_oracle(p, pt).value, greens.g_quadrature(p, pt, tol=1e-10).value,
                greens.g_eval(p, pt).value]
        worst = max(worst, max(vals) - min(vals))
    record(9, "Hankel three-route agreement", worst <= 1e-4, f"max spread {worst:.2e} <= 1e-4")


def test_10_complete_monotonicity(record):
    grid = np.linspace(0.1, 10, 12)
    bad = 0
    for b in (0.25, 0.5, 0.75, 1.0):
        bad += len(specfun.cm_difference_test(lambda x, b=b: specfun.ml_eval(b, -x), 8, grid, 0.1).violations)
    params, pref = specfun.cm7_params(0.5, 2.0, -2.0)
    bad += len(specfun.cm_difference_test(
        lambda x: pref * specfun.gen_wright_eval(params, -x).value, 8, grid, 0.1).violations)
    record(10, "complete monotonicity", bad == 0, f"{bad} violations")


def test_11_normalization_and_sign(record):
    mass_gap, neg = 0.0, 0.0
    for a, b in ((2.0, 0.5), (1.5, 0.75), (1.8, 1.0)):
        for n in (1, 2, 3):
            mass, err = greens.radial_mass((a, b, n), 1.0, tol=1e-8)
            mass_gap = max(mass_gap, abs(mass - 1) / max(1e-7, err))
            for r in np.geomspace(1e-2, 10, 7):
                for t in (0.1, 1.0, 10.0):
                    g = greens.g_eval((a, b, n), (r, t))
                    neg = max(neg, -(g.value + g.abs_err))
    ok = mass_gap <= 1.0 and neg <= 0.0
    record(11, "normalization and non-negativity", ok,
           f"|mass-1| / max(1e-7, err) {mass_gap:.2f} <= 1, worst negativity {neg:.1e}")


def test_12_origin_values(record):
    gap = origin_extrapolation_gap(1.5, 0.75, r0=1e-4)
    singular = 0
    for p in ((1.5, 0.75, 2), (1.5, 0.75, 3), (1.0, 0.5, 1)):
        try:
            greens.g_origin(p, 1.0)
        except SingularAtOrigin:
            singular += 1
    ok = gap <= 1e-4 and singular == 3
    record(12, "origin values", ok, f"extrapolation gap {gap:.1e} <= 1e-4, {singular}/3 singular raised")
