"""Numerical continuation of period-n orbits in the parameter.

Natural-parameter stepping with a tangent predictor ``dx/dt = -F_t / F_x``
(``F(t, x) = f_t^n(x) - x``) and a Newton corrector.  A failed step is
halved; once the step falls below ``min_step`` the branch ends and, if the
multiplier is near +1 there, the fold is pinned by solving ``F = 0``,
``F_x = 0`` together.  Multiplier crossings of +1 and -1 between accepted
points are refined by bisection.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .algebraic import Interval, isolate_real_roots
from .families import MapFamily
from .period import dynatomic

NEWTON_TOL = 1e-12
EVENT_TOL = 1e-8
STEP0 = 1e-3
MAX_ITER = 64
MIN_STEP = 1e-9
DERIVATIVE_FLOOR = 1e-13


class NoConvergence(ArithmeticError):
    pass


class DerivativeNearZero(NoConvergence):
    """``d/dx (f^n - id)`` vanished: the orbit is at (or very near) a tangency."""


class StartNotConverged(ValueError):
    pass


@dataclass(frozen=True)
class OrbitPoint:
    param: float
    cycle: tuple
    multiplier: float
    residual: float

    @property
    def x0(self) -> float:
        return self.cycle[0]


@dataclass
class BifurcationEvent:
    kind: str  # fold, flip, bubble-open, bubble-close, point
    param: float
    period: int
    exact: Interval | None = None
    note: str = ""


@dataclass
class OrbitBranch:
    family: MapFamily
    period: int
    points: list = field(default_factory=list)
    events: list = field(default_factory=list)

    @property
    def params(self) -> np.ndarray:
        return np.array([p.param for p in self.points])

    @property
    def multipliers(self) -> np.ndarray:
        return np.array([p.multiplier for p in self.points])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "multiplier", "residual"] + [f"x{i}" for i in range(self.period)])
        for p in self.points:
            w.writerow([f"{p.param:.17g}", f"{p.multiplier:.17g}", f"{p.residual:.17g}"]
                       + [f"{x:.17g}" for x in p.cycle])
        return buf.getvalue()


class _Rule:
    """Float coefficient arrays of ``f_t`` and ``d f_t / dt`` at a parameter."""

    def __init__(self, f: MapFamily):
        rule = f.require_rule()
        self.coeffs = rule.coeffs
        self.dcoeffs = rule.derivative_t().coeffs

    def at(self, t: float):
        a = np.array([c.eval_float(t) for c in self.coeffs], dtype=float)
        da = np.array([c.eval_float(t) for c in self.dcoeffs] or [0.0], dtype=float)
        return a, da


_RULES: dict = {}


def _rule(f: MapFamily) -> _Rule:
    r = _RULES.get(f)
    if r is None:
        r = _RULES[f] = _Rule(f)
    return r


def orbit_jet(f: MapFamily, n: int, t: float, x: float):
    """``(f^n(x), d f^n/dx, d f^n/dt, cycle)`` at float ``(t, x)``."""
    a, da = _rule(f).at(t)
    cycle = np.empty(n)
    xn, dx, dt = kernels.orbit_jet(a, da, float(x), n, cycle)
    return xn, dx, dt, cycle


def _make_point(f, n, t, x) -> OrbitPoint:
    xn, dx, _, cycle = orbit_jet(f, n, t, x)
    return OrbitPoint(float(t), tuple(float(c) for c in cycle), float(dx), abs(xn - x))


def _closing(f, n, t, x) -> float:
    return orbit_jet(f, n, t, x)[0] - x


def newton_orbit(f: MapFamily, n: int, t: float, guess: float,
                 newton_tol: float = NEWTON_TOL, max_iter: int = MAX_ITER) -> OrbitPoint:
    """Converge a period-n orbit of ``f_t`` from ``guess``."""
    if newton_tol <= 0:
        raise ValueError("newton_tol must be positive")
    x = float(guess)
    for _ in range(max_iter):
        xn, dx, _, _ = orbit_jet(f, n, t, x)
        F = xn - x
        dF = dx - 1.0
        if not math.isfinite(F):
            raise NoConvergence(f"iterate overflowed at t={t}")
        if abs(F) <= newton_tol and abs(F / dF if dF else 0.0) <= newton_tol * max(1.0, abs(x)):
            break
        if abs(dF) < DERIVATIVE_FLOOR:
            raise DerivativeNearZero(f"|d(f^n - id)/dx| < {DERIVATIVE_FLOOR} at t={t}, x={x}")
        x -= F / dF
    else:
        raise NoConvergence(f"no convergence in {max_iter} iterations at t={t}")
    p = _make_point(f, n, t, x)
    # polish: a couple of extra steps usually reach rounding level
    for _ in range(2):
        if p.residual == 0.0 or abs(p.multiplier - 1.0) < DERIVATIVE_FLOOR:
            break
        q = _make_point(f, n, t, p.x0 - _closing(f, n, t, p.x0) / (p.multiplier - 1.0))
        if q.residual >= p.residual:
            break
        p = q
    if p.residual > newton_tol:
        raise NoConvergence(f"residual {p.residual:.3g} above {newton_tol:.3g}")
    return p


def classify_stability(p: OrbitPoint, event_tol: float = EVENT_TOL) -> str:
    m = abs(p.multiplier)
    if m < 1 - event_tol:
        return "attracting"
    if m > 1 + event_tol:
        return "repelling"
    return "neutral"


def seed_points(f: MapFamily, n: int, t, newton_tol: float = NEWTON_TOL) -> list[OrbitPoint]:
    """One converged OrbitPoint per distinct real root of ``phi_n`` at rational ``t``.

    Roots come from exact isolation, so no basin-of-attraction luck is involved.
    """
    t = Fraction(t)
    spec = dynatomic(f, n).phi.specialize(t)
    pts = []
    for r in isolate_real_roots(spec):
        guess = float(r.refine(Fraction(1, 2**60)).isolator.mid)
        try:
            pts.append(newton_orbit(f, n, float(t), guess, newton_tol))
        except NoConvergence:
            # double root at a tangency: the exact root is as good as it gets
            pts.append(_make_point(f, n, float(t), guess))
    return pts


def group_cycles(points: list[OrbitPoint], tol: float = 1e-9) -> list[OrbitPoint]:
    """Keep one representative per distinct cycle."""
    reps: list[OrbitPoint] = []
    for p in points:
        if not any(min(abs(p.x0 - c) for c in q.cycle) <= tol for q in reps):
            reps.append(p)
    return reps


def _cycles_match(old: OrbitPoint, new: OrbitPoint) -> bool:
    # nearest-point assignment must map every new point back to its own index
    oc = old.cycle
    for i, x in enumerate(new.cycle):
        j = min(range(len(oc)), key=lambda k: abs(oc[k] - x))
        if j != i and abs(oc[j] - x) < abs(oc[i] - x):
            return False
    return True


def _slope(f, n, t, x) -> float:
    _, dx, dt, _ = orbit_jet(f, n, t, x)
    dF = dx - 1.0
    return -dt / dF if dF else math.inf


def _solve_multiplier(f, n, t, x, target, tol=1e-14, max_iter=MAX_ITER):
    """Newton on ``(f^n(x) - x, d f^n/dx - target)`` in ``(x, t)``.

    Second derivatives by central differences of the exact first derivatives.
    """
    for _ in range(max_iter):
        xn, dx, dt, _ = orbit_jet(f, n, t, x)
        g1, g2 = xn - x, dx - target
        if abs(g1) < tol and abs(g2) < 1e-12:
            return t, x
        hx = 1e-7 * max(1.0, abs(x))
        ht = 1e-7 * max(1.0, abs(t))
        dxx = (orbit_jet(f, n, t, x + hx)[1] - orbit_jet(f, n, t, x - hx)[1]) / (2 * hx)
        dxt = (orbit_jet(f, n, t + ht, x)[1] - orbit_jet(f, n, t - ht, x)[1]) / (2 * ht)
        J = np.array([[dx - 1.0, dt], [dxx, dxt]])
        try:
            step = np.linalg.solve(J, [g1, g2])
        except np.linalg.LinAlgError:
            return None
        x -= step[0]
        t -= step[1]
        if not (math.isfinite(x) and math.isfinite(t)):
            return None
    return None


def _bisect_crossing(f, n, p0: OrbitPoint, p1: OrbitPoint, target: float, event_tol: float, newton_tol):
    lo, hi = p0, p1
    s_lo = np.sign(lo.multiplier - target)
    while abs(hi.param - lo.param) > event_tol:
        tm = 0.5 * (lo.param + hi.param)
        w = (tm - lo.param) / (hi.param - lo.param)
        guess = lo.x0 + w * (hi.x0 - lo.x0)
        try:
            pm = newton_orbit(f, n, tm, guess, newton_tol)
        except NoConvergence:
            break
        if np.sign(pm.multiplier - target) == s_lo:
            lo = pm
        else:
            hi = pm
    return 0.5 * (lo.param + hi.param)


def continue_branch(f: MapFamily, n: int, start: OrbitPoint, t_range, step0: float = STEP0, *,
                    direction: int | None = None, newton_tol: float = NEWTON_TOL,
                    event_tol: float = EVENT_TOL, min_step: float = MIN_STEP) -> OrbitBranch:
    """Track ``start`` across ``t_range`` toward its farther endpoint (or ``direction``)."""
    if step0 <= 0:
        raise ValueError("step0 must be positive")
    if start.residual > newton_tol:
        raise StartNotConverged(f"start residual {start.residual:.3g} exceeds {newton_tol:.3g}")
    lo, hi = (float(v) for v in t_range)
    t0 = start.param
    if direction is None:
        direction = 1 if hi - t0 >= t0 - lo else -1
    target = hi if direction > 0 else lo
    branch = OrbitBranch(family=f, period=n, points=[start])
    h = step0
    while True:
        cur = branch.points[-1]
        remaining = (target - cur.param) * direction
        if remaining <= 1e-15:
            break
        step = min(h, remaining)
        t_new = cur.param + direction * step
        slope = _slope(f, n, cur.param, cur.x0)
        pred = cur.x0 + direction * step * slope if math.isfinite(slope) else cur.x0
        cont_tol = 10 * step * max(1.0, abs(slope) if math.isfinite(slope) else 1.0)
        new = None
        try:
            cand = newton_orbit(f, n, t_new, pred, newton_tol)
            if abs(cand.x0 - pred) <= cont_tol and _cycles_match(cur, cand):
                new = cand
        except NoConvergence:
            pass
        if new is None:
            h = step / 2
            if h < min_step:
                branch.events.append(_terminal_event(f, n, branch, direction))
                break
            continue
        for target_m, kind in ((1.0, "fold"), (-1.0, "flip")):
            if (cur.multiplier - target_m) * (new.multiplier - target_m) < 0:
                tc = _bisect_crossing(f, n, cur, new, target_m, event_tol, newton_tol)
                branch.events.append(BifurcationEvent(kind, tc, n, note=f"multiplier crosses {target_m:+g}"))
        branch.points.append(new)
        h = min(step0, 2 * step)
    return branch


def _terminal_event(f, n, branch: OrbitBranch, direction: int) -> BifurcationEvent:
    last = branch.points[-1]
    if abs(last.multiplier - 1.0) < 0.1:
        sol = _solve_multiplier(f, n, last.param, last.x0, 1.0)
        if sol is not None and abs(sol[0] - last.param) < 1e-4:
            return BifurcationEvent("fold", float(sol[0]), n, note="branch ends at tangency")
        if len(branch.points) >= 2:
            p1, p2 = branch.points[-2], branch.points[-1]
            s1, s2 = (p1.multiplier - 1) ** 2, (p2.multiplier - 1) ** 2
            if s2 != s1:
                est = p2.param - s2 * (p2.param - p1.param) / (s2 - s1)
                return BifurcationEvent("fold", est, n, note="branch ends at tangency (extrapolated)")
        return BifurcationEvent("fold", last.param, n, note="branch ends at tangency")
    return BifurcationEvent("fold", last.param, n, note="fold-suspected: step floor reached away from multiplier +1")


def attach_exact(branch: OrbitBranch, locus, width=Fraction(1, 10**8)) -> None:
    """Hand fold events off to the exact tangent locus: record the isolator of the
    nearest exact tangent parameter, refined to ``width``."""
    for ev in branch.events:
        if ev.kind != "fold" or not locus.params:
            continue
        nearest = min(locus.params, key=lambda r: abs(float(r) - ev.param))
        ev.exact = nearest.refine(width).isolator
