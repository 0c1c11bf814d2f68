"""Bubble and point-bifurcation detection.

Two routes lead to a :class:`BubbleReport`:

* ``bubble_closed_form`` for the T family, where the conjugacy to
  ``1 - alpha*x^2`` turns the question into ``(a - c)*c = alpha*``;
* ``detect``, which scans exact period counts over a rational grid, adds
  the exact tangent locus as extra candidates, bisects every count change
  and classifies what it finds.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from ._version import __version__
from .algebraic import AlgebraicRoot, Interval, isolate_real_roots
from .families import QUADRATIC_NORMAL, MapFamily
from .period import LeadingCoefficientVanishes, count_period_points, tangent_parameters
from .poly import ParamPoly, UniPoly, as_fraction, resultant_x, square_free_part

POINT_TOL = Fraction(1, 10**9)
FLANK_OFFSETS = (Fraction(1, 10**3), Fraction(1, 10**6))
DETECT_GRID = 200

# normal-form thresholds: period-2 orbits appear at alpha = 3/4, period-3 at 7/4
THRESHOLDS = {2: Fraction(3, 4), 3: Fraction(7, 4)}


class CountsEqualAtEndpoints(ValueError):
    pass


@dataclass
class CountGrid:
    params: list[Fraction]
    counts: list[int]
    lower_period: list[bool]
    degree_dropped: list[bool]

    def transitions(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(len(self.counts) - 1) if self.counts[i] != self.counts[i + 1]]

    def to_csv(self) -> str:
        rows = ["param,count,lower_period,degree_dropped"]
        for p, c, lo, dr in zip(self.params, self.counts, self.lower_period, self.degree_dropped):
            rows.append(f"{float(p):.17g},{c},{int(lo)},{int(dr)}")
        return "\n".join(rows) + "\n"


@dataclass
class Feature:
    """One bubble, point or one-sided transition found in a range."""

    kind: str  # bubble, point, birth, death
    lo: float
    hi: float
    exact: list = field(default_factory=list)  # Interval or AlgebraicRoot per endpoint
    counts: tuple = ()  # (left, inside, right)
    certificate: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lo": self.lo,
            "hi": self.hi,
            "exact": [_exact_str(e) for e in self.exact],
            "counts": list(self.counts),
            "certificate": self.certificate,
        }


@dataclass
class BubbleReport:
    family: str
    period: int
    kind: str  # bubble, point, none
    interval: tuple[float, float] | None
    method: str  # closed-form, scan
    exact: list = field(default_factory=list)
    witness: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    features: list[Feature] = field(default_factory=list)

    @property
    def interval_lo(self):
        return None if self.interval is None else self.interval[0]

    @property
    def interval_hi(self):
        return None if self.interval is None else self.interval[1]

    @property
    def points(self) -> list[Feature]:
        return [f for f in self.features if f.kind == "point"]

    def as_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "family": self.family,
            "period": self.period,
            "kind": self.kind,
            "interval_lo": self.interval_lo,
            "interval_hi": self.interval_hi,
            "method": self.method,
            "exact": [_exact_str(e) for e in self.exact],
            "certificates": self.certificates,
            "features": [f.as_dict() for f in self.features],
            "witness": self.witness,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, default=_json_default)

    def to_text(self) -> str:
        head = f"{self.family} n={self.period}: {self.kind} ({self.method})"
        lines = [head]
        for f in self.features:
            lines.append(f"  {f.kind:6s} [{f.lo:.12g}, {f.hi:.12g}] counts={list(f.counts)}")
        return "\n".join(lines)


def _exact_str(e) -> str:
    if isinstance(e, AlgebraicRoot):
        return e.pretty("c")
    return str(e)


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (Interval, AlgebraicRoot)):
        return _exact_str(o)
    raise TypeError(type(o).__name__)


# -- closed form ----------------------------------------------------------------

def _threshold(n: int) -> Fraction:
    if n not in THRESHOLDS:
        raise ValueError(f"closed form covers periods 2 and 3, not {n}")
    return THRESHOLDS[n]


def _normal_count(n: int, alpha) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LeadingCoefficientVanishes)
        return count_period_points(QUADRATIC_NORMAL, n, alpha).count


def _quadratic_endpoints(a: Fraction, star: Fraction) -> list[AlgebraicRoot]:
    # roots of c^2 - a c + alpha*
    return isolate_real_roots(UniPoly((star, -a, 1)))


def _algebraic_endpoints(a: AlgebraicRoot, star: Fraction, approx: list[float]) -> list[AlgebraicRoot]:
    # eliminate a from c^2 - a c + alpha* using its defining polynomial
    p1 = ParamPoly(UniPoly((c,)) for c in a.defining.coeffs)
    p2 = ParamPoly([UniPoly((star, 0, 1)), UniPoly((0, -1))])
    cands = isolate_real_roots(square_free_part(resultant_x(p1, p2)))
    out = []
    for target in approx:
        pool = cands
        while True:
            near = [c for c in pool if c.isolator.lo - 1e-9 <= target <= c.isolator.hi + 1e-9]
            if len(near) == 1:
                out.append(near[0])
                break
            if not near:
                near = [min(pool, key=lambda c: abs(float(c) - target))]
                out.append(near[0])
                break
            pool = [c.refine(c.isolator.width / 4) for c in near]
    return out


def _alpha_at(a, c, shift: Fraction):
    """Exact ``(a - c') * c'`` with ``c' = c + shift``; rational or AlgebraicRoot."""
    if isinstance(a, Fraction):
        poly = UniPoly((a - shift, -1)) * UniPoly((shift, 1))
        if isinstance(c, AlgebraicRoot):
            return c.image(poly).value_or_root()
        return poly(c)
    # irrational a, c = a/2: alpha = a^2/4 - shift^2
    sq = a.square().value_or_root()
    if isinstance(sq, Fraction):
        return sq / 4 - shift * shift
    return sq.scale(Fraction(1, 4)).shift(-shift * shift).value_or_root()


def _flank_counts(n, a, c) -> dict:
    out = {}
    for d in FLANK_OFFSETS:
        out[f"-{d}"] = _normal_count(n, _alpha_at(a, c, -d))
        out[f"+{d}"] = _normal_count(n, _alpha_at(a, c, d))
    return out


def _coerce_a(a):
    if isinstance(a, AlgebraicRoot):
        r = a.as_fraction()
        return a if r is None else r
    if isinstance(a, float):
        return a
    return as_fraction(a)


def bubble_closed_form(a, n: int, point_tol=POINT_TOL) -> BubbleReport:
    """Bubble of period ``n`` for the T family from ``(a - c)*c = alpha*``.

    ``a`` may be rational, float or an :class:`AlgebraicRoot`; only the float
    case decides ``a**2`` against ``4*alpha*`` inexactly.
    """
    star = _threshold(n)
    a = _coerce_a(a)
    name = f"T-fixed-a(a={_exact_str(a) if isinstance(a, AlgebraicRoot) else a})"
    if isinstance(a, float):
        return _closed_form_float(a, n, star, name)
    if isinstance(a, AlgebraicRoot):
        disc = a.square().compare(4 * star) if a.square().as_fraction() is None else _sgn(
            a.square().as_fraction() - 4 * star)
    else:
        if a <= 0:
            raise ValueError("a must be positive")
        disc = _sgn(a * a - 4 * star)
    certs = {"alpha_star": str(star), "relation": "(a - c)*c = alpha*"}
    if disc < 0:
        return BubbleReport(name, n, "none", None, "closed-form", certificates=certs)
    if disc == 0:
        c = a / 2 if isinstance(a, Fraction) else a.scale(Fraction(1, 2))
        if isinstance(c, AlgebraicRoot):
            c = c.refine(as_fraction(point_tol))
            iso = c.isolator
        else:
            iso = Interval(c, c)
            c = AlgebraicRoot.rational(c)
        certs["flank_counts"] = _flank_counts(n, a, c.value_or_root())
        certs["count_at"] = _normal_count(n, star)
        feat = Feature("point", float(iso.lo), float(iso.hi), [c], (0, certs["count_at"], 0), dict(certs))
        return BubbleReport(name, n, "point", (float(iso.lo), float(iso.hi)), "closed-form",
                            exact=[c], certificates=certs, features=[feat])
    if isinstance(a, Fraction):
        ends = _quadratic_endpoints(a, star)
    else:
        af = float(a)
        half = (af * af - 4 * float(star)) ** 0.5 / 2
        ends = _algebraic_endpoints(a, star, [af / 2 - half, af / 2 + half])
    c1, c2 = ends
    lo, hi = float(c1), float(c2)
    if isinstance(a, Fraction):
        certs["flank_counts"] = {"c1": _flank_counts(n, a, c1), "c2": _flank_counts(n, a, c2)}
        certs["symmetric"] = c1.compare_root(c2.image(UniPoly((a, -1)))) == 0
    inside = _normal_count(n, (a * a / 4) if isinstance(a, Fraction) else star + 1)
    feat = Feature("bubble", lo, hi, [c1, c2], (0, inside, 0), dict(certs))
    return BubbleReport(name, n, "bubble", (lo, hi), "closed-form", exact=[c1, c2],
                        certificates=certs, features=[feat])


def _closed_form_float(a: float, n: int, star: Fraction, name: str) -> BubbleReport:
    if a <= 0:
        raise ValueError("a must be positive")
    d = a * a - 4 * float(star)
    certs = {"alpha_star": str(star), "relation": "(a - c)*c = alpha*", "arithmetic": "float"}
    if d < 0:
        return BubbleReport(name, n, "none", None, "closed-form", certificates=certs)
    half = d ** 0.5 / 2
    lo, hi = a / 2 - half, a / 2 + half
    kind = "point" if d == 0 else "bubble"
    return BubbleReport(name, n, kind, (lo, hi), "closed-form", certificates=certs,
                        features=[Feature(kind, lo, hi)])


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


# -- scan and refine ------------------------------------------------------------

def _count(f: MapFamily, n: int, t):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LeadingCoefficientVanishes)
        return count_period_points(f, n, t)


def scan_counts(f: MapFamily, n: int, t_range, grid: int) -> CountGrid:
    """Exact period-n counts on ``grid`` equally spaced rational parameters."""
    lo, hi = (as_fraction(v) for v in t_range)
    if grid < 2:
        raise ValueError("grid must be at least 2")
    if lo == hi:
        params = [lo]
    else:
        params = [lo + (hi - lo) * i / (grid - 1) for i in range(grid)]
    counts, lower, dropped = [], [], []
    for t in params:
        pc = _count(f, n, t)
        counts.append(pc.count)
        lower.append(pc.lower_period)
        dropped.append(pc.degree_dropped)
    return CountGrid(params, counts, lower, dropped)


def refine_transition(f: MapFamily, n: int, bracket, width_tol) -> Interval:
    """Bisect ``bracket`` on the exact count until its width is at most ``width_tol``."""
    lo, hi = (as_fraction(v) for v in bracket)
    width_tol = as_fraction(width_tol)
    c_lo, c_hi = _count(f, n, lo).count, _count(f, n, hi).count
    if c_lo == c_hi:
        raise CountsEqualAtEndpoints(f"count {c_lo} at both {lo} and {hi}")
    while hi - lo > width_tol:
        mid = (lo + hi) / 2
        if _count(f, n, mid).count == c_lo:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


def default_range(f: MapFamily) -> tuple[Fraction, Fraction]:
    if f.name == "T-fixed-a":
        a = f.fixed_value("a")
        return Fraction(0), as_fraction(a) if not isinstance(a, AlgebraicRoot) else Fraction(int(float(a)) + 1)
    if f.name == "S-fixed-a":
        return Fraction(0), 4 / as_fraction(f.fixed_value("a"))
    if f.name == "logistic":
        return Fraction(1), Fraction(4)
    if f.name == "cubic-exercise":
        return Fraction(-2), Fraction(2)
    return Fraction(0), Fraction(3)


@dataclass
class _Transition:
    interval: Interval
    left: int
    right: int
    source: str


def _merge(transitions: list[_Transition], gap: Fraction) -> list[_Transition]:
    transitions.sort(key=lambda tr: tr.interval.lo)
    out: list[_Transition] = []
    for tr in transitions:
        if out and tr.interval.lo <= out[-1].interval.hi + gap:
            prev = out[-1]
            if prev.interval.width <= tr.interval.width:
                prev.source += "+" + tr.source
                continue
            tr.source = prev.source + "+" + tr.source
            out[-1] = tr
            continue
        out.append(tr)
    return out


def _point_certificate(f, n, cert) -> dict:
    rho = cert.param
    mid = rho.refine(Fraction(1, 10**15)).isolator.mid
    flanks = {}
    for d in FLANK_OFFSETS:
        flanks[f"-{d}"] = _count(f, n, mid - d).count
        flanks[f"+{d}"] = _count(f, n, mid + d).count
    return {
        "resultant_root": _exact_str(rho),
        "gcd_degree": cert.gcd_degree,
        "real_multiple_roots": cert.real_multiple_roots,
        "count_at": cert.count_at,
        "locus_flank_counts": list(cert.flank_counts),
        "flank_counts": flanks,
    }


def detect(f: MapFamily, n: int, t_range=None, point_tol=POINT_TOL, grid: int = DETECT_GRID,
           use_locus: bool = True) -> BubbleReport:
    """Scan, refine and classify period-n bubbles and point bifurcations of ``f``.

    A family without a rational rule (``a`` irrational) goes to the closed form.
    """
    if f.rule is None:
        if f.name != "T-fixed-a":
            raise ValueError(f"{f.descriptor} needs rational parameters for a scan")
        return bubble_closed_form(f.fixed_value("a"), n, point_tol)
    point_tol = as_fraction(point_tol)
    lo, hi = default_range(f) if t_range is None else tuple(as_fraction(v) for v in t_range)
    width_tol = point_tol / 10
    scan = scan_counts(f, n, (lo, hi), grid)
    transitions = []
    for i, j in scan.transitions():
        iv = refine_transition(f, n, (scan.params[i], scan.params[j]), width_tol)
        transitions.append(_Transition(iv, scan.counts[i], scan.counts[j], "scan"))

    points: list[Feature] = []
    locus_info = []
    if use_locus:
        locus = tangent_parameters(f, n, positive_only=False)
        for cert in locus.details:
            rho = cert.param
            if rho.compare(lo) < 0 or rho.compare(hi) > 0:
                continue
            locus_info.append(_exact_str(rho))
            left, right = cert.flank_counts
            if left == right:
                # a point bifurcation needs an empty punctured neighbourhood
                if left == 0 and cert.count_at > 0:
                    iso = rho.refine(point_tol).isolator
                    c = _point_certificate(f, n, cert)
                    points.append(Feature("point", float(iso.lo), float(iso.hi), [rho],
                                          (left, cert.count_at, right), c))
                continue
            fl, fr = cert.flank_points
            fl, fr = max(fl, lo), min(fr, hi)
            if _count(f, n, fl).count != _count(f, n, fr).count:
                iv = refine_transition(f, n, (fl, fr), width_tol)
                transitions.append(_Transition(iv, left, right, "locus"))

    transitions = _merge(transitions, 4 * width_tol)
    features = points + _classify(transitions, scan, point_tol)
    features.sort(key=lambda ft: ft.lo)

    witness = {
        "grid": len(scan.params),
        "range": [str(lo), str(hi)],
        "counts": _run_length(scan.counts),
        "degree_dropped_at": [str(p) for p, d in zip(scan.params, scan.degree_dropped) if d],
        "locus_params": locus_info,
    }
    bubbles = [ft for ft in features if ft.kind == "bubble"]
    pts = [ft for ft in features if ft.kind == "point"]
    if bubbles:
        kind, main = "bubble", bubbles[0]
    elif pts:
        kind, main = "point", pts[0]
    else:
        kind, main = "none", None
    certs = {"transitions": len(transitions)}
    if f.name == "T-fixed-a" and n in THRESHOLDS:
        cf = bubble_closed_form(f.fixed_value("a"), n, point_tol)
        certs["closed_form"] = {"kind": cf.kind, "interval": cf.interval}
        if cf.kind == "bubble" and bubbles:
            certs["closed_form"]["max_endpoint_error"] = max(
                abs(bubbles[0].lo - cf.interval[0]), abs(bubbles[0].hi - cf.interval[1]))
    return BubbleReport(
        family=f.descriptor,
        period=n,
        kind=kind,
        interval=None if main is None else (main.lo, main.hi),
        method="scan",
        exact=[] if main is None else main.exact,
        witness=witness,
        certificates=certs,
        features=features,
    )


def _run_length(counts: list[int]) -> list[list[int]]:
    out: list[list[int]] = []
    for c in counts:
        if out and out[-1][0] == c:
            out[-1][1] += 1
        else:
            out.append([c, 1])
    return out


def _classify(transitions: list[_Transition], scan: CountGrid, point_tol: Fraction) -> list[Feature]:
    """Pair up count changes into bubbles; unmatched ones are one-sided."""
    feats = []
    i = 0
    while i < len(transitions):
        tr = transitions[i]
        base = tr.left
        if tr.right > base:
            # look for the first later transition that returns to the base count
            j = i + 1
            inside = [tr.right]
            while j < len(transitions) and transitions[j].right != base:
                inside.append(transitions[j].right)
                j += 1
            if j < len(transitions) and min(inside) > base:
                close = transitions[j]
                c1 = float(tr.interval.mid)
                c2 = float(close.interval.mid)
                kind = "bubble"
                if close.interval.hi - tr.interval.lo < point_tol:
                    kind = "point"
                feats.append(Feature(kind, c1, c2, [tr.interval, close.interval], (base, max(inside), base),
                                     {"open": tr.source, "close": close.source}))
                i = j + 1
                continue
        kind = "birth" if tr.right > tr.left else "death"
        m = float(tr.interval.mid)
        feats.append(Feature(kind, m, m, [tr.interval], (tr.left, tr.right),
                             {"source": tr.source, "note": "one-sided transition"}))
        i += 1
    return feats

