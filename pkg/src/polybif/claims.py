"""Replayable checks behind ``polybif verify-paper``.

Every claim recomputes its value from scratch and compares it with an
expectation from ``EXPECTED``.  Callers may override expectations (the test
suite injects a wrong threshold to make sure a claim can fail).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebraic import AlgebraicRoot, isolate_real_roots
from .continuation import continue_branch, newton_orbit, seed_points
from .detect import bubble_closed_form, detect
from .diagram import count_bands, orbit_diagram
from .families import QUADRATIC_NORMAL, builtin
from .period import count_period_points, dynatomic, square_certificate, tangent_parameters
from .poly import ParamPoly, UniPoly, compose, descartes_changes, resultant, resultant_x, sturm_count

SQRT7 = math.sqrt(7)
CUBIC_CSTAR = 0.5773502691896258

EXPECTED = {
    "threshold_3": Fraction(7, 4),
    "threshold_2": Fraction(3, 4),
    "h_alpha_x": {
        (6, 6): 1, (5, 5): -1, (4, 5): -3, (4, 4): 1, (3, 4): 2, (3, 3): -1,
        (2, 4): 3, (2, 3): -3, (2, 2): 1, (1, 3): -1, (1, 2): 2, (1, 1): -1,
        (0, 3): -1, (0, 2): 2, (0, 1): -1, (0, 0): 1,
    },
    "square_root_coeffs": (Fraction(343, 64), Fraction(-49, 32), Fraction(-63, 16), Fraction(1, 8)),
    "descartes_at_2": 3,
    "sturm_at_2": 6,
    "s_family_counts": {Fraction(1, 2): 0, Fraction(7, 8): 3, Fraction(1): 6},
    "bubble_a": Fraction(2658, 1000),
    "bubble2_a": Fraction(235, 100),
    "logistic_fold": 1 + 2 * math.sqrt(2),
    "cubic_cstar": CUBIC_CSTAR,
    "figure1_bands": 3,
    "figure2_bands": 2,
}


@dataclass
class ClaimResult:
    key: str
    section: str
    statement: str
    passed: bool
    computed: str
    expected: str
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return dict(self.__dict__)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  [{self.section}] {self.statement}: computed {self.computed}; expected {self.expected}"


@dataclass
class Claim:
    key: str
    section: str
    statement: str
    check: Callable[[dict], tuple[bool, str, str]]


# -- individual checks ----------------------------------------------------------

def _coefficients(E):
    phi = dynatomic(QUADRATIC_NORMAL, 3).phi
    want = ParamPoly.from_terms(E["h_alpha_x"])
    return phi == want, phi.to_str("x", "alpha"), want.to_str("x", "alpha")


def _threshold_counts(E):
    star = E["threshold_3"]
    probe = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(174, 100), Fraction(7, 4),
             Fraction(18, 10), Fraction(2), Fraction(3)]
    got = {t: count_period_points(QUADRATIC_NORMAL, 3, t).count for t in probe}
    want = {t: 0 if t < star else (3 if t == star else 6) for t in probe}
    fmt = lambda d: ", ".join(f"{k}:{v}" for k, v in d.items())  # noqa: E731
    return got == want, fmt(got), fmt(want)


def _tangent_locus(E):
    ok = True
    got, want = [], []
    for n, key in ((3, "threshold_3"), (2, "threshold_2")):
        loc = tangent_parameters(QUADRATIC_NORMAL, n)
        star = E[key]
        ok &= len(loc.params) == 1 and loc.params[0].is_root_of(UniPoly((-star, 1)))
        if loc.params:
            iso = loc.params[0].refine(Fraction(1, 10**12)).isolator
            ok &= iso.contains(star)
        got.append(f"n={n}: {[p.pretty('alpha') for p in loc.params]}")
        want.append(f"n={n}: [{star}]")
    return ok, "; ".join(got), "; ".join(want)


def _perfect_square(E):
    q = square_certificate(QUADRATIC_NORMAL, 3, E["threshold_3"])
    got = None if q is None else tuple(reversed(q.coeffs))
    return got == E["square_root_coeffs"], str(got and tuple(map(str, got))), str(tuple(map(str, E["square_root_coeffs"])))


def _descartes(E):
    h2 = dynatomic(QUADRATIC_NORMAL, 3).phi.specialize(2)
    got = (descartes_changes(h2), sturm_count(h2))
    want = (E["descartes_at_2"], E["sturm_at_2"])
    return got == want, f"changes={got[0]}, real roots={got[1]}", f"changes={want[0]}, real roots={want[1]}"


def _s_family(E):
    S = builtin("S-fixed-a", [2])
    got = {c: count_period_points(S, 3, c).count for c in E["s_family_counts"]}
    return got == E["s_family_counts"], str({str(k): v for k, v in got.items()}), \
        str({str(k): v for k, v in E["s_family_counts"].items()})


def _closed_pair(a: Fraction, alpha: float):
    af = float(a)
    half = math.sqrt(af * af - 4 * alpha) / 2
    return af / 2 - half, af / 2 + half


def _t_bubble(E, n, key):
    a = E[key]
    star = float(E["threshold_3" if n == 3 else "threshold_2"])
    rep = detect(builtin("T-fixed-a", [a]), n)
    want = _closed_pair(a, star)
    cf = bubble_closed_form(a, n)
    ok = rep.kind == "bubble" and cf.kind == "bubble"
    if ok:
        err = max(abs(rep.interval[0] - want[0]), abs(rep.interval[1] - want[1]),
                  abs(cf.interval[0] - want[0]), abs(cf.interval[1] - want[1]))
        ok = err <= 1e-9
    got = rep.interval and f"[{rep.interval[0]:.9f}, {rep.interval[1]:.9f}]"
    return ok, f"{rep.kind} {got}", f"bubble [{want[0]:.9f}, {want[1]:.9f}]"


def _point(E):
    rep = detect(builtin("T-fixed-a", [AlgebraicRoot.sqrt(7)]), 3)
    ok = rep.kind == "point"
    if ok:
        c = rep.exact[0]
        iso = c.isolator
        ok = iso.width <= Fraction(1, 10**9) and float(iso.lo) <= SQRT7 / 2 <= float(iso.hi)
        ok &= c.square().compare(Fraction(7, 4)) == 0
        ok &= all(v == 0 for v in rep.certificates["flank_counts"].values())
    return ok, f"{rep.kind} at {rep.interval}", f"point at sqrt(7)/2 = {SQRT7 / 2:.10f}"


def _logistic(E):
    mu = AlgebraicRoot.sqrt(8).shift(1)  # 1 + 2*sqrt(2)
    F = builtin("logistic")
    alpha = F.effective_alpha(mu)
    ok = alpha == Fraction(7, 4)
    seeds = seed_points(F, 3, 4)
    br = continue_branch(F, 3, seeds[0], (3.8, 4.0), direction=-1)
    folds = [e.param for e in br.events if e.kind == "fold"]
    ok &= bool(folds) and abs(folds[0] - E["logistic_fold"]) <= 1e-6
    return ok, f"alpha={alpha}, fold at {folds[0] if folds else None}", \
        f"alpha=7/4, fold at {E['logistic_fold']:.10f}"


def _continuation(E):
    seeds = seed_points(QUADRATIC_NORMAL, 3, 2)
    ok = len(seeds) == 6
    worst = 0.0
    for p in seeds:
        up = continue_branch(QUADRATIC_NORMAL, 3, p, (2.0, 3.0), direction=1)
        ok &= abs(up.points[-1].param - 3.0) < 1e-12
        worst = max(worst, max(q.residual for q in up.points))
    ok &= worst <= 1e-12
    down = continue_branch(QUADRATIC_NORMAL, 3, seeds[0], (1.5, 2.0), direction=-1)
    folds = [e.param for e in down.events if e.kind == "fold"]
    star = float(E["threshold_3"])
    ok &= bool(folds) and abs(folds[0] - star) <= 1e-6
    q = square_certificate(QUADRATIC_NORMAL, 3, Fraction(7, 4))
    r = isolate_real_roots(q)[0]
    p = newton_orbit(QUADRATIC_NORMAL, 3, 1.75 + 1e-9, float(r))
    ok &= abs(p.multiplier - 1.0) <= 1e-3
    return ok, f"max residual {worst:.2e}, fold at {folds[0] if folds else None}, lambda {p.multiplier:.6f}", \
        f"residual <= 1e-12, fold at {star}, lambda within 1e-3 of 1"


def _cubic(E):
    rep = detect(builtin("cubic-exercise"), 3)
    pts = rep.points
    ok = len(pts) == 2
    if ok:
        lo, hi = (float(p.exact[0]) for p in pts)
        ok = abs(lo + hi) <= 1e-9 and abs(hi - E["cubic_cstar"]) <= 1e-9
        for p in pts:
            c = p.certificate
            ok &= c["gcd_degree"] >= 1 and c["real_multiple_roots"] >= 1
            ok &= all(v == 0 for v in c["flank_counts"].values())
    got = ", ".join(f"{float(p.exact[0]):.12f}" for p in pts)
    return ok, f"points at {got}", f"points at +-{E['cubic_cstar']:.12f}"


def _figures(E):
    ok = True
    notes = []
    for key, a, n, rng in (("figure1_bands", Fraction(2658, 1000), 3, (0.9, 1.75)),
                           ("figure2_bands", Fraction(235, 100), 2, (0.38, 1.97))):
        lo, hi = bubble_closed_form(a, n).interval
        d = orbit_diagram(builtin("T-fixed-a", [a]), rng, 800, 500, 120)
        m = 0.05 * (hi - lo)
        inner = [(t, s) for t, s in zip(d.params, d.samples) if lo + m < t < hi - m]
        if n == 2:
            # two bands only while the 2-cycle attracts; beyond that period doubling takes over
            inner = [(t, s) for t, s in inner if _attracting(builtin("T-fixed-a", [a]), n, t, s)]
        hits = sum(count_bands(s) == E[key] for _, s in inner)
        frac = hits / len(inner) if inner else 0.0
        ok &= frac >= 0.9
        notes.append(f"{frac:.0%} of {len(inner)}")
    return ok, "; ".join(notes), ">= 90% with 3 bands (fig 1) and 2 bands (fig 2)"


def _attracting(f, n, t, samples) -> bool:
    """Is there an attracting cycle of exact period ``n`` through the last sample?"""
    if not len(samples):
        return False
    try:
        p = newton_orbit(f, n, float(t), float(samples[-1]))
    except ArithmeticError:
        return False
    distinct = min(abs(p.cycle[i] - p.cycle[j]) for i in range(n) for j in range(i)) > 1e-6
    return distinct and abs(p.multiplier) < 1


def _identities(E, cases: int = 200, seed: int = 20240601):
    rng = random.Random(seed)

    def rp(deg):
        return UniPoly([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(deg + 1)])

    bad = 0
    for _ in range(cases):
        a, b = rp(rng.randint(0, 6)), rp(rng.randint(1, 6))
        if not b:
            continue
        q, r = divmod(a, b)
        bad += not (q * b + r == a and r.degree < b.degree)
        c = rp(rng.randint(0, 3))
        x = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        bad += compose(a, c)(x) != a(c(x))
        t = Fraction(rng.randint(-4, 4))
        P = ParamPoly([UniPoly((v, w)) for v, w in zip(a.coeffs, rp(a.degree).coeffs)])
        Q = ParamPoly([UniPoly((v, w)) for v, w in zip(b.coeffs, rp(b.degree).coeffs)])
        if P.degree >= 1 and Q.degree >= 1 and P.lc(t) != 0 and Q.lc(t) != 0:
            bad += resultant_x(P, Q)(t) != resultant(P.specialize(t), Q.specialize(t))
    return bad == 0, f"{bad} failures in {cases} cases", "0 failures"


CLAIMS = [
    Claim("coefficients", "period-3 polynomial", "h(alpha, x) expands to the stated coefficients", _coefficients),
    Claim("threshold", "period-3 threshold", "0 / 3 / 6 period-3 points below / at / above alpha = 7/4", _threshold_counts),
    Claim("tangent", "period-3 threshold", "tangent locus is {7/4} for n=3 and {3/4} for n=2", _tangent_locus),
    Claim("square", "period-3 threshold", "h(7/4, x) is the square of a cubic", _perfect_square),
    Claim("descartes", "period-3 threshold", "h(2, x): 3 sign changes and 6 real roots", _descartes),
    Claim("s-family", "S-family transfer", "S_{2,c}: 0 / 3 / 6 at c = 1/2, 7/8, 1", _s_family),
    Claim("bubble-3", "T-family bubble", "a = 2.658: period-3 bubble at a/2 -+ sqrt(a^2-7)/2",
          lambda E: _t_bubble(E, 3, "bubble_a")),
    Claim("point", "point bifurcation", "a = sqrt(7): period-3 point bifurcation at c = sqrt(7)/2", _point),
    Claim("bubble-2", "period-2 bubble", "a = 2.35: period-2 bubble at a/2 -+ sqrt(a^2-3)/2",
          lambda E: _t_bubble(E, 2, "bubble2_a")),
    Claim("logistic", "logistic transfer", "mu = 1 + 2 sqrt(2) maps to alpha = 7/4; fold found numerically", _logistic),
    Claim("continuation", "orbit continuation", "6 roots continue to alpha = 3; fold at 7/4; lambda -> 1", _continuation),
    Claim("cubic", "cubic point pair", "x^3 - 2x + c has period-3 point bifurcations at +-c*", _cubic),
    Claim("figures", "bifurcation diagrams", "attractor bands inside the bubbles", _figures),
    Claim("identities", "polynomial identities", "random division / composition / resultant identities", _identities),
]


def run_claims(overrides: dict | None = None, only: list[str] | None = None) -> list[ClaimResult]:
    E = dict(EXPECTED)
    E.update(overrides or {})
    results = []
    for c in CLAIMS:
        if only and c.key not in only:
            continue
        start = time.perf_counter()
        try:
            ok, got, want = c.check(E)
        except Exception as exc:  # a crash is a failed claim, reported as such
            ok, got, want = False, f"error: {type(exc).__name__}: {exc}", "no error"
        results.append(ClaimResult(c.key, c.section, c.statement, bool(ok), got, want,
                                   time.perf_counter() - start))
    return results
