"""Shared strategies and independent oracles for the test suite."""

from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polybif.poly import UniPoly

settings.register_profile(
    "repo", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

SX = sympy.Symbol("x")

small_rationals = st.builds(
    Fraction, st.integers(min_value=-12, max_value=12), st.integers(min_value=1, max_value=6)
)


def unipolys(min_degree=0, max_degree=6):
    return st.lists(small_rationals, min_size=min_degree + 1, max_size=max_degree + 1).map(UniPoly)


def nonzero_unipolys(min_degree=0, max_degree=6):
    return unipolys(min_degree, max_degree).filter(lambda p: p.degree >= min_degree)


def to_sympy(p: UniPoly) -> sympy.Poly:
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0]
    return sympy.Poly(coeffs, SX, domain="QQ")


def from_sympy(p: sympy.Poly) -> UniPoly:
    return UniPoly(Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs()))


def bareiss_det(m: list[list]) -> Fraction:
    """Fraction-free determinant (Bareiss), used as a resultant oracle."""
    a = [[Fraction(v) for v in row] for row in m]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[-1][-1]


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, collapsed over parametrized cases."""
    verdict = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", "") or rep.when != "call" and outcome != "error":
                continue
            props = dict(getattr(rep, "user_properties", []))
            label = props.get("criterion", rep.nodeid.split("::")[-1])
            verdict[label] = verdict.get(label, True) and outcome == "passed"
    if not verdict:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(verdict):
        terminalreporter.write_line(f"{'PASS' if verdict[label] else 'FAIL'}  {label}")
