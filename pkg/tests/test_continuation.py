import math
import random
from fractions import Fraction

import pytest

from polybif.algebraic import isolate_real_roots
from polybif.continuation import (
    DerivativeNearZero,
    NoConvergence,
    OrbitPoint,
    StartNotConverged,
    attach_exact,
    classify_stability,
    continue_branch,
    group_cycles,
    newton_orbit,
    orbit_jet,
    seed_points,
)
from polybif.families import QUADRATIC_NORMAL, builtin
from polybif.period import count_period_points, square_certificate, tangent_parameters

Q = QUADRATIC_NORMAL


def _chain_rule(f, t, cycle):
    d = f.rule.derivative_x()
    out = 1.0
    for x in cycle:
        out *= sum(float(c.eval_float(t)) * x**k for k, c in enumerate(d.coeffs))
    return out


def test_fixed_point_example():
    p = newton_orbit(Q, 1, 2.0, 0.4)
    assert p.x0 == pytest.approx(0.5, abs=1e-14)
    assert p.multiplier == pytest.approx(-2.0, abs=1e-12)
    assert classify_stability(p) == "repelling"


def test_six_period_three_points_form_two_cycles():
    pts = seed_points(Q, 3, 2)
    assert len(pts) == 6
    assert all(p.residual < 1e-12 for p in pts)
    assert len(group_cycles(pts)) == 2


def test_multiplier_near_one_just_past_tangency():
    q = square_certificate(Q, 3, Fraction(7, 4))
    for r in isolate_real_roots(q):
        p = newton_orbit(Q, 3, 1.75 + 1e-9, float(r))
        assert abs(p.multiplier - 1.0) <= 1e-3


def test_newton_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        newton_orbit(Q, 1, 2.0, 0.4, newton_tol=0)


def test_newton_reports_escape_as_no_convergence():
    with pytest.raises(NoConvergence):
        newton_orbit(Q, 3, 1.0, 1e200)


def test_derivative_near_zero_is_a_no_convergence():
    assert issubclass(DerivativeNearZero, NoConvergence)


def test_classify_examples():
    assert classify_stability(OrbitPoint(0.0, (0.0,), -2.0, 0.0)) == "repelling"
    assert classify_stability(OrbitPoint(0.0, (0.0,), 0.0, 0.0)) == "attracting"
    assert classify_stability(OrbitPoint(0.0, (0.0,), 1.0, 0.0)) == "neutral"


def test_figure_one_midpoint_has_one_attracting_cycle():
    T = builtin("T-fixed-a", [Fraction(2658, 1000)])
    cycles = group_cycles(seed_points(T, 3, Fraction(1329, 1000)))
    kinds = sorted(classify_stability(p) for p in cycles)
    assert kinds == ["attracting", "repelling"]


def test_fold_found_going_down():
    start = seed_points(Q, 3, 2)[0]
    br = continue_branch(Q, 3, start, (1.5, 2.0), direction=-1)
    folds = [e for e in br.events if e.kind == "fold"]
    assert folds and abs(folds[0].param - 1.75) <= 1e-6


def test_fold_inside_exact_isolator():
    start = seed_points(Q, 3, 2)[0]
    br = continue_branch(Q, 3, start, (1.5, 2.0), direction=-1)
    attach_exact(br, tangent_parameters(Q, 3))
    fold = next(e for e in br.events if e.kind == "fold")
    assert fold.exact.width <= Fraction(1, 10**8)
    assert abs(fold.param - float(fold.exact.mid)) <= 1e-8


def test_flip_of_fixed_point():
    start = newton_orbit(Q, 1, 0.5, 0.5)
    br = continue_branch(Q, 1, start, (0.5, 1.0), direction=1)
    flips = [e for e in br.events if e.kind == "flip"]
    assert flips and abs(flips[0].param - 0.75) <= 1e-6


def test_zero_length_range():
    start = newton_orbit(Q, 1, 0.5, 0.5)
    br = continue_branch(Q, 1, start, (0.5, 0.5))
    assert br.points == [start] and br.events == []


def test_start_must_be_converged():
    bad = OrbitPoint(2.0, (0.3,), 0.0, 1.0)
    with pytest.raises(StartNotConverged):
        continue_branch(Q, 1, bad, (2.0, 3.0))


def test_branch_params_monotone_and_csv():
    start = seed_points(Q, 3, 2)[0]
    br = continue_branch(Q, 3, start, (2.0, 2.2), direction=1)
    ps = br.params
    assert all(b > a for a, b in zip(ps, ps[1:]))
    lines = br.to_csv().splitlines()
    assert lines[0] == "param,multiplier,residual,x0,x1,x2"
    assert len(lines) == len(br.points) + 1


def test_logistic_fold():
    F = builtin("logistic")
    br = continue_branch(F, 3, seed_points(F, 3, 4)[0], (3.8, 4.0), direction=-1)
    folds = [e for e in br.events if e.kind == "fold"]
    assert folds and abs(folds[0].param - (1 + 2 * math.sqrt(2))) <= 1e-6


def test_multiplier_consistency_at_random_points():
    rng = random.Random(7)
    pts = []
    for start in seed_points(Q, 3, 2):
        pts += continue_branch(Q, 3, start, (2.0, 2.5), step0=0.01, direction=1).points
    sample = rng.sample(pts, 50)
    for p in sample:
        chain = _chain_rule(Q, p.param, p.cycle)
        assert abs(p.multiplier - chain) <= 1e-10 * max(1.0, abs(chain))
        h = 1e-6
        fp = orbit_jet(Q, 3, p.param, p.x0 + h)[0]
        fm = orbit_jet(Q, 3, p.param, p.x0 - h)[0]
        fd = (fp - fm) / (2 * h)
        assert abs(fd - p.multiplier) <= 1e-4 * max(1.0, abs(p.multiplier))


@pytest.mark.parametrize("t", [Fraction(17, 10), Fraction(9, 5), Fraction(2), Fraction(5, 2)])
def test_seeding_matches_exact_counts(t):
    assert len(seed_points(Q, 3, t)) == count_period_points(Q, 3, t).count
