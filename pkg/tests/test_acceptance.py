"""Acceptance suite: one test per criterion, each against an independent oracle.

Every test records a ``criterion`` property; ``conftest.py`` turns those into
one PASS/FAIL line per criterion in the terminal summary.  Run alone with

    pytest tests/test_acceptance.py -v
"""

import json
import math
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import SX, nonzero_unipolys, small_rationals, to_sympy, unipolys
from polybif.algebraic import AlgebraicRoot
from polybif.continuation import continue_branch, newton_orbit
from polybif.detect import bubble_closed_form, detect
from polybif.diagram import orbit_diagram
from polybif.families import QUADRATIC_NORMAL, builtin
from polybif.period import count_period_points, dynatomic, square_certificate, tangent_parameters
from polybif.poly import (
    ParamPoly,
    UniPoly,
    compose,
    descartes_changes,
    perfect_square_decompose,
    poly_divmod,
    resultant,
    resultant_x,
    sturm_count,
)

GOLDEN = Path(__file__).parent / "golden"
AL = sympy.Symbol("alpha")
mpmath.mp.dps = 40


def sq(v):
    return sympy.Rational(v.numerator, v.denominator)


def sympy_h3(rule):
    """(f^3(x) - x) / (f(x) - x) expanded by sympy, independent of our composition code."""
    f = sympy.Lambda(SX, rule)
    num = sympy.expand(f(f(f(SX))) - SX)
    q, r = sympy.div(num, sympy.expand(f(SX) - SX), SX)
    assert r == 0
    return sympy.expand(q)


H_ALPHA = sympy_h3(1 - AL * SX**2)


def distinct_real(expr):
    return len(set(sympy.Poly(expr, SX).real_roots()))


def bands(xs, diameter=1e-3):
    """Cluster the sorted samples at gaps >= diameter; None if any cluster is too wide."""
    xs = np.sort(np.asarray(xs))
    if xs.size == 0:
        return 0
    cuts = np.flatnonzero(np.diff(xs) >= diameter)
    groups = np.split(xs, cuts + 1)
    return None if any(g[-1] - g[0] >= diameter for g in groups) else len(groups)


def closed_pair(a, alpha):
    a = mpmath.mpf(a.numerator) / a.denominator
    half = mpmath.sqrt(a * a - 4 * alpha) / 2
    return float(a / 2 - half), float(a / 2 + half)


# 1 -----------------------------------------------------------------------------------

def test_criterion_01_coefficients(record_property):
    record_property("criterion", "01 exact coefficients of h(alpha, x)")
    a, x = AL, SX
    stated = (a**6 * x**6 - a**5 * x**5 + (-3 * a**5 + a**4) * x**4 + (2 * a**4 - a**3) * x**3
              + (3 * a**4 - 3 * a**3 + a**2) * x**2 + (-a**3 + 2 * a**2 - a) * x - a**3 + 2 * a**2 - a + 1)
    assert sympy.expand(stated - H_ALPHA) == 0
    phi = dynatomic(QUADRATIC_NORMAL, 3).phi
    oracle = sympy.Poly(H_ALPHA, SX, AL)
    ours = {(i, j): c for i, cx in enumerate(phi.coeffs) for j, c in enumerate(cx.coeffs) if c}
    theirs = {m: Fraction(int(c.p), int(c.q)) for m, c in zip(oracle.monoms(), oracle.coeffs())}
    assert ours == theirs


# 2 -----------------------------------------------------------------------------------

@pytest.mark.parametrize("alpha, want", [
    (Fraction(1, 2), 0), (Fraction(1), 0), (Fraction(3, 2), 0), (Fraction(174, 100), 0),
    (Fraction(7, 4), 3), (Fraction(18, 10), 6), (Fraction(2), 6), (Fraction(3), 6),
])
def test_criterion_02_threshold_counts(record_property, alpha, want):
    record_property("criterion", f"02 period-3 count at alpha = {alpha} is {want}")
    assert distinct_real(H_ALPHA.subs(AL, sq(alpha))) == want
    assert count_period_points(QUADRATIC_NORMAL, 3, alpha).count == want


# 3 -----------------------------------------------------------------------------------

@pytest.mark.parametrize("n, star", [(3, Fraction(7, 4)), (2, Fraction(3, 4))])
def test_criterion_03_tangent_locus(record_property, n, star):
    record_property("criterion", f"03 tangent locus for n = {n} is {{{star}}}")
    loc = tangent_parameters(QUADRATIC_NORMAL, n)
    assert len(loc.params) == 1
    root = loc.params[0]
    assert root.defining(star) == 0
    iso = root.refine(Fraction(1, 10**12)).isolator
    assert iso.width <= Fraction(1, 10**12) and iso.contains(star)
    # oracle: the x-discriminant of the sympy dynatomic vanishes at star, and its
    # positive real roots are exactly the ones where h has a real double root
    h = H_ALPHA if n == 3 else sympy.expand(sympy.div(sympy.expand((1 - AL * (1 - AL * SX**2)**2) - SX),
                                                      sympy.expand(1 - AL * SX**2 - SX), SX)[0])
    disc = sympy.discriminant(h, SX)
    assert disc.subs(AL, sq(star)) == 0
    real_double = []
    for r in set(sympy.Poly(disc, AL).real_roots()):
        if r > 0:
            hr = sympy.Poly(h.subs(AL, r), SX)
            g = sympy.gcd(hr, hr.diff(SX))
            if g.degree() > 0 and g.count_roots() > 0:
                real_double.append(r)
    assert real_double == [sq(star)]


# 4 -----------------------------------------------------------------------------------

def test_criterion_04_perfect_square(record_property):
    record_property("criterion", "04 h(7/4, x) = (343/64 x^3 - 49/32 x^2 - 63/16 x + 1/8)^2")
    want = (Fraction(343, 64), Fraction(-49, 32), Fraction(-63, 16), Fraction(1, 8))
    q = square_certificate(QUADRATIC_NORMAL, 3, Fraction(7, 4))
    assert tuple(reversed(q.coeffs)) == want
    quoted = sympy.Rational(1, 64) ** 2 * (343 * SX**3 - 98 * SX**2 - 252 * SX + 8) ** 2
    assert sympy.expand(quoted - H_ALPHA.subs(AL, sympy.Rational(7, 4))) == 0
    assert sympy.expand(sum(sq(c) * SX**(3 - i) for i, c in enumerate(want)) ** 2
                        - H_ALPHA.subs(AL, sympy.Rational(7, 4))) == 0


# 5 -----------------------------------------------------------------------------------

def test_criterion_05_descartes(record_property):
    record_property("criterion", "05 h(2, x): 3 sign changes, 6 real roots")
    h2 = dynatomic(QUADRATIC_NORMAL, 3).phi.specialize(2)
    coeffs = [c for c in sympy.Poly(H_ALPHA.subs(AL, 2), SX).all_coeffs() if c != 0]
    changes = sum(1 for u, v in zip(coeffs, coeffs[1:]) if u * v < 0)
    assert descartes_changes(h2) == changes == 3
    assert sturm_count(h2) == distinct_real(H_ALPHA.subs(AL, 2)) == 6


# 6 -----------------------------------------------------------------------------------

@pytest.mark.parametrize("c, want", [(Fraction(1, 2), 0), (Fraction(7, 8), 3), (Fraction(1), 6)])
def test_criterion_06_s_family(record_property, c, want):
    record_property("criterion", f"06 S_(2,c) period-3 count at c = {c} is {want}")
    h = sympy_h3(2 - sq(c) * SX**2)
    assert distinct_real(h) == want
    assert count_period_points(builtin("S-fixed-a", [2]), 3, c).count == want


# 7 -----------------------------------------------------------------------------------

def test_criterion_07_period3_bubble(record_property):
    record_property("criterion", "07 a = 2.658: bubble endpoints within 1e-9 of a/2 -+ sqrt(a^2-7)/2")
    a = Fraction(2658, 1000)
    want = closed_pair(a, mpmath.mpf(7) / 4)
    assert want == pytest.approx((1.201560, 1.456440), abs=1e-6)
    rep = detect(builtin("T-fixed-a", [a]), 3)
    assert rep.kind == "bubble" and rep.method == "scan"
    assert max(abs(u - v) for u, v in zip(rep.interval, want)) <= 1e-9
    cf = bubble_closed_form(a, 3)
    assert max(abs(u - v) for u, v in zip(cf.interval, want)) <= 1e-9
    assert max(abs(u - v) for u, v in zip(rep.interval, cf.interval)) <= 1e-9


# 8 -----------------------------------------------------------------------------------

def test_criterion_08_point_bifurcation(record_property):
    record_property("criterion", "08 a = sqrt(7): point bifurcation at sqrt(7)/2, width <= 1e-9, zero flanks")
    rep = detect(builtin("T-fixed-a", [AlgebraicRoot.sqrt(7)]), 3)
    assert rep.kind == "point"
    iso = rep.exact[0].isolator
    target = mpmath.sqrt(7) / 2
    assert iso.width <= Fraction(1, 10**9)
    assert mpmath.mpf(iso.lo.numerator) / iso.lo.denominator <= target
    assert target <= mpmath.mpf(iso.hi.numerator) / iso.hi.denominator
    flanks = rep.certificates["flank_counts"]
    assert set(flanks) >= {"-1/1000", "+1/1000", "-1/1000000", "+1/1000000"}
    assert all(v == 0 for v in flanks.values())
    # oracle: alpha = (a - c) c stays below 7/4 off the midpoint, and h has no real
    # zeros there (sympy count at a rational alpha just above the flank value)
    for d in (mpmath.mpf("1e-3"), mpmath.mpf("1e-6")):
        for c in (target - d, target + d):
            alpha = (mpmath.sqrt(7) - c) * c
            assert alpha < mpmath.mpf(7) / 4
            upper = Fraction(str(mpmath.nstr(alpha + d * d / 2, 30)))
            assert upper < Fraction(7, 4)
            assert distinct_real(H_ALPHA.subs(AL, sq(upper))) == 0


# 9 -----------------------------------------------------------------------------------

def test_criterion_09_period2_bubble(record_property):
    record_property("criterion", "09 a = 2.35: period-2 bubble within 1e-9 of a/2 -+ sqrt(a^2-3)/2")
    a = Fraction(235, 100)
    want = closed_pair(a, mpmath.mpf(3) / 4)
    assert want == pytest.approx((0.380881, 1.969119), abs=1e-6)
    rep = detect(builtin("T-fixed-a", [a]), 2)
    assert rep.kind == "bubble"
    assert max(abs(u - v) for u, v in zip(rep.interval, want)) <= 1e-9


# 10 ----------------------------------------------------------------------------------

def test_criterion_10_logistic(record_property):
    record_property("criterion", "10 mu = 1 + 2 sqrt(2) gives alpha = 7/4; logistic fold within 1e-6")
    mu = 1 + 2 * sympy.sqrt(2)
    assert sympy.simplify((mu**2 - 2 * mu) / 4) == sympy.Rational(7, 4)
    F = builtin("logistic")
    assert F.effective_alpha(AlgebraicRoot.sqrt(8).shift(1)) == Fraction(7, 4)
    # seed at mu = 4 from sympy's real roots of the logistic period-3 polynomial
    seed = float(sympy.Poly(sympy_h3(4 * SX * (1 - SX)), SX).real_roots()[0])
    br = continue_branch(F, 3, newton_orbit(F, 3, 4.0, seed), (3.8, 4.0), direction=-1)
    folds = [e.param for e in br.events if e.kind == "fold"]
    assert folds and abs(folds[0] - float(mu)) <= 1e-6


# 11 ----------------------------------------------------------------------------------

def _direct_residual(t, x):
    y = x
    for _ in range(3):
        y = 1 - t * y * y
    return abs(y - x)


def test_criterion_11_continuation(record_property):
    record_property("criterion", "11 six roots continue to alpha = 3 (residual <= 1e-12); fold at 1.75; lambda -> 1")
    roots = [float(r) for r in sympy.Poly(H_ALPHA.subs(AL, 2), SX).real_roots()]
    assert len(roots) == 6
    for x in roots:
        start = newton_orbit(QUADRATIC_NORMAL, 3, 2.0, x)
        br = continue_branch(QUADRATIC_NORMAL, 3, start, (2.0, 3.0), direction=1)
        assert br.points[-1].param == pytest.approx(3.0, abs=1e-12)
        assert max(p.residual for p in br.points) <= 1e-12
        assert max(_direct_residual(p.param, p.x0) for p in br.points) <= 1e-12
    down = continue_branch(QUADRATIC_NORMAL, 3, newton_orbit(QUADRATIC_NORMAL, 3, 2.0, roots[0]),
                           (1.5, 2.0), direction=-1)
    folds = [e.param for e in down.events if e.kind == "fold"]
    assert folds and abs(folds[0] - 1.75) <= 1e-6
    t = 1.75 + 1e-9
    double = float(sympy.Poly(343 * SX**3 - 98 * SX**2 - 252 * SX + 8, SX).real_roots()[0])
    p = newton_orbit(QUADRATIC_NORMAL, 3, t, double)
    xs = [p.x0]
    for _ in range(2):
        xs.append(1 - t * xs[-1] ** 2)
    lam = math.prod(-2 * t * v for v in xs)
    assert abs(lam - 1) <= 1e-3 and abs(p.multiplier - lam) <= 1e-10


# 12 ----------------------------------------------------------------------------------

def test_criterion_12_cubic_pair(record_property):
    record_property("criterion", "12 cubic x^3 - 2x + c: certified point pair at +-c*, golden value")
    golden = json.loads((GOLDEN / "cubic_cstar.json").read_text())
    rep = detect(builtin("cubic-exercise"), 3, (Fraction(-2), Fraction(2)))
    pts = rep.points
    assert len(pts) == 2
    vals = sorted(float(p.exact[0]) for p in pts)
    assert abs(vals[0] + vals[1]) <= 1e-9
    assert abs(vals[1] - golden["c_star"]) <= 1e-9
    for p in pts:
        cert = p.certificate
        assert cert["resultant_root"]
        assert cert["gcd_degree"] >= 1 and cert["real_multiple_roots"] >= 1
        assert cert["locus_flank_counts"] == [0, 0]
        assert all(v == 0 for v in cert["flank_counts"].values())
    # oracle: at c = 1/sqrt(3) the sympy period-3 quotient has a repeated real root
    c = 1 / sympy.sqrt(3)
    f = sympy.Lambda(SX, SX**3 - 2 * SX + c)
    num = sympy.Poly(sympy.expand(f(f(f(SX))) - SX), SX, extension=sympy.sqrt(3))
    h = num.exquo(sympy.Poly(sympy.expand(f(SX) - SX), SX, extension=sympy.sqrt(3)))
    g = sympy.gcd(h, h.diff(SX))
    assert g.degree() == golden["certificate"]["gcd_degree"]
    assert len(sympy.Poly(g.as_expr(), SX, extension=sympy.sqrt(3)).nroots()) == 3
    assert all(abs(sympy.im(r)) < 1e-20 for r in g.nroots(n=30))


# 13 ----------------------------------------------------------------------------------

def test_criterion_13_figure1_bands(record_property):
    record_property("criterion", "13a Figure-1 settings: 3 bands on >= 90% of the bubble's middle 90%")
    a = Fraction(2658, 1000)
    lo, hi = detect(builtin("T-fixed-a", [a]), 3).interval
    d = orbit_diagram(builtin("T-fixed-a", [a]), (0.9, 1.75), 800, 500, 120)
    m = 0.05 * (hi - lo)
    inner = [s for t, s in zip(d.params, d.samples) if lo + m <= t <= hi - m]
    assert len(inner) > 100
    assert sum(bands(s) == 3 for s in inner) >= 0.9 * len(inner)


def test_criterion_13_figure2_bands(record_property):
    record_property("criterion", "13b Figure-2 settings: 2 bands where the period-2 cycle attracts")
    a = Fraction(235, 100)
    lo, hi = detect(builtin("T-fixed-a", [a]), 2).interval
    d = orbit_diagram(builtin("T-fixed-a", [a]), (0.38, 1.97), 800, 500, 120)
    m = 0.05 * (hi - lo)
    inner = []
    for t, s in zip(d.params, d.samples):
        if not (lo + m <= t <= hi - m) or len(s) < 3:
            continue
        # chain-rule multiplier of the recorded 2-cycle: f'(x) = -2 c x
        x1, x2 = s[-1], s[-2]
        if abs(x1 - s[-3]) < 1e-9 and abs(x1 - x2) > 1e-6 and abs(4 * t * t * x1 * x2) < 1:
            inner.append(s)
    assert len(inner) > 100
    assert sum(bands(s) == 2 for s in inner) >= 0.9 * len(inner)


# 14 ----------------------------------------------------------------------------------

PROPS = settings(max_examples=200, deadline=None,
                 suppress_health_check=[HealthCheck.function_scoped_fixture])


@PROPS
@given(unipolys(max_degree=6), nonzero_unipolys(min_degree=0, max_degree=6))
def test_criterion_14_division(record_property, a, b):
    record_property("criterion", "14a division identity, 200 cases, degree <= 6")
    q, r = poly_divmod(a, b)
    assert q * b + r == a and r.degree < b.degree


@PROPS
@given(unipolys(max_degree=6), unipolys(max_degree=6), small_rationals)
def test_criterion_14_composition(record_property, p, q, x):
    record_property("criterion", "14b composition evaluates pointwise, 200 cases, degree <= 6")
    assert compose(p, q)(x) == p(q(x))


def _isolated_count(p, lo, hi):
    """Distinct real roots in [lo, hi] from sympy's continued-fraction isolation."""
    sqf = sympy.Poly(sympy.sqf_part(to_sympy(p).as_expr()), SX)
    return len(sqf.intervals(inf=sq(lo), sup=sq(hi)))


@PROPS
@given(nonzero_unipolys(min_degree=1, max_degree=6))
def test_criterion_14_sturm(record_property, p):
    record_property("criterion", "14c Sturm counts vs independent isolation, 200 cases, degree <= 6")
    # every root of p is bounded by Cauchy's bound, so this window holds them all
    bound = 1 + max(abs(c / p.lc) for c in p.coeffs)
    assert sturm_count(p) == _isolated_count(p, -bound, bound)


@PROPS
@given(nonzero_unipolys(min_degree=0, max_degree=3))
def test_criterion_14_square(record_property, q):
    record_property("criterion", "14d perfect-square round-trip, 200 cases, degree <= 6")
    root = perfect_square_decompose(q * q)
    assert root is not None and root * root == q * q


coeff = st.lists(small_rationals, min_size=1, max_size=3).map(UniPoly)
param_polys = st.lists(coeff, min_size=2, max_size=4).map(ParamPoly).filter(lambda f: f.degree >= 1)


@PROPS
@given(param_polys, param_polys, st.integers(min_value=-5, max_value=5))
def test_criterion_14_resultant_specialization(record_property, f, g, t):
    record_property("criterion", "14e resultant commutes with specialization, 200 cases")
    if f.lc(t) == 0 or g.lc(t) == 0:
        return
    fs, gs = f.specialize(t), g.specialize(t)
    assert resultant_x(f, g)(t) == resultant(fs, gs)
    # sympy agrees with the Sylvester convention when the first argument has the larger degree
    big, small = (fs, gs) if fs.degree >= gs.degree else (gs, fs)
    want = sympy.resultant(to_sympy(big).as_expr(), to_sympy(small).as_expr(), SX)
    assert resultant(big, small) == Fraction(int(sympy.fraction(want)[0]), int(sympy.fraction(want)[1]))
