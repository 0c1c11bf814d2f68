"""Period-n divisor polynomials and exact bifurcation parameters.

``dynatomic(f, n)`` divides ``f_t^n(x) - x`` by the divisor polynomials of
every proper divisor of ``n``; the quotient's real roots at a parameter are
the candidate period-n points.  Tangent parameters are the real roots of
``Res_x(phi, d phi/dx)`` at which ``phi`` really has a real multiple root,
which is decided exactly in Q(rho) rather than read off the resultant.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .algebraic import AlgebraicRoot, Interval, RootField, isolate_real_roots
from .families import MapFamily, iterate_symbolic
from .poly import (
    ParamPoly,
    UniPoly,
    as_fraction,
    gcd,
    perfect_square_decompose,
    resultant_x,
    square_free_decomposition,
    square_free_part,
    sturm_count,
)

PERIOD_CAP = 6


class PeriodCapExceeded(ValueError):
    pass


class LeadingCoefficientVanishes(UserWarning):
    """The specialization at this parameter has lower degree than the family."""


@dataclass(frozen=True)
class DynatomicResult:
    n: int
    phi: ParamPoly
    factor_checked: bool
    divisors: dict = field(default_factory=dict, compare=False, hash=False)


class PeriodCount(NamedTuple):
    count: int
    lower_period: bool
    degree_dropped: bool = False

    def __int__(self) -> int:
        return self.count


def _check_n(n: int):
    if not 1 <= n <= PERIOD_CAP:
        raise PeriodCapExceeded(f"period {n} outside 1..{PERIOD_CAP}")


@lru_cache(maxsize=64)
def dynatomic(f: MapFamily, n: int) -> DynatomicResult:
    """Period-n divisor polynomial of ``f`` with exact-division verification."""
    _check_n(n)
    x = ParamPoly([0, 1])
    full = iterate_symbolic(f, n) - x
    divisors = {}
    phi = full
    for d in range(1, n):
        if n % d == 0:
            sub = dynatomic(f, d)
            divisors[d] = sub.phi
            phi = phi.divide_exact(sub.phi)
    return DynatomicResult(n=n, phi=phi, factor_checked=True, divisors=divisors)


def _proper_divisors(n: int) -> list[int]:
    return [d for d in range(1, n) if n % d == 0]


def count_period_points(f: MapFamily, n: int, t) -> PeriodCount:
    """Distinct real roots of ``phi_n(t, .)`` with the lower-period flag.

    ``t`` may be rational or an :class:`AlgebraicRoot`.
    """
    res = dynatomic(f, n)
    if isinstance(t, AlgebraicRoot):
        r = t.as_fraction()
        if r is None:
            return _count_algebraic(f, n, res, t)
        t = r
    t = as_fraction(t)
    spec = res.phi.specialize(t)
    dropped = spec.degree < res.phi.degree
    if dropped:
        warnings.warn(
            f"{f.descriptor}: leading coefficient of phi_{n} vanishes at {t}",
            LeadingCoefficientVanishes,
            stacklevel=2,
        )
    if spec.degree < 1:
        return PeriodCount(0, False, dropped)
    count = sturm_count(spec)
    lower = False
    for d in _proper_divisors(n):
        low = dynatomic(f, d).phi.specialize(t)
        if low and gcd(spec, low).degree >= 1:
            lower = True
            break
    return PeriodCount(count, lower, dropped)


def _count_algebraic(f, n, res, t: AlgebraicRoot) -> PeriodCount:
    field_ = RootField(t)
    spec = field_.specialize(res.phi)
    dropped = len(spec) - 1 < res.phi.degree
    if dropped:
        warnings.warn(
            f"{f.descriptor}: leading coefficient of phi_{n} vanishes at {t!r}",
            LeadingCoefficientVanishes,
            stacklevel=3,
        )
    if len(spec) < 2:
        return PeriodCount(0, False, dropped)
    count = field_.sturm_count(spec)
    lower = False
    for d in _proper_divisors(n):
        low = field_.specialize(dynatomic(f, d).phi)
        if low and len(field_.gcd(spec, low)) > 1:
            lower = True
            break
    return PeriodCount(count, lower, dropped)


def square_certificate(f: MapFamily, n: int, t0) -> UniPoly | None:
    """Square root of ``phi_n(t0, .)`` when it is a perfect square over Q."""
    spec = dynatomic(f, n).phi.specialize(as_fraction(t0))
    if not spec:
        return None
    return perfect_square_decompose(spec)


@dataclass
class TangentCertificate:
    """How one tangent parameter was confirmed."""

    param: AlgebraicRoot
    gcd_degree: int
    real_multiple_roots: int
    flank_counts: tuple[int, int]
    count_at: int
    flank_points: tuple[Fraction, Fraction]

    @property
    def kind(self) -> str:
        left, right = self.flank_counts
        return "point" if left == right else "tangent"


@dataclass
class TangentLocus:
    n: int
    params: list[AlgebraicRoot]
    certificate: UniPoly
    details: list[TangentCertificate] = field(default_factory=list)
    rejected: list[AlgebraicRoot] = field(default_factory=list)


@lru_cache(maxsize=32)
def discriminant_locus(f: MapFamily, n: int) -> UniPoly:
    """``Res_x(phi_n, d phi_n / dx)`` as a polynomial in the parameter."""
    phi = dynatomic(f, n).phi
    return resultant_x(phi, phi.derivative_x())


def _separated_flanks(root: AlgebraicRoot, all_roots: list[AlgebraicRoot]) -> tuple[Fraction, Fraction]:
    """Rational points left and right of ``root`` with no other locus root
    between them and ``root``.

    ``all_roots`` come from one isolation of the square-free locus, so a
    non-degenerate isolator already excludes every other root.
    """
    lo, hi = root.isolator.lo, root.isolator.hi
    if lo < hi:
        return lo, hi
    gap = Fraction(1, 1024)
    for o in all_roots:
        if o.isolator.hi < lo:
            gap = min(gap, (lo - o.isolator.hi) / 2)
        elif o.isolator.lo > hi:
            gap = min(gap, (o.isolator.lo - hi) / 2)
    return lo - gap, hi + gap


def tangent_parameters(f: MapFamily, n: int, positive_only: bool = True) -> TangentLocus:
    """Parameters where ``phi_n(t, .)`` has a real multiple root.

    Each real root ``rho`` of the discriminant locus is checked in Q(rho):
    the leading coefficient must not vanish, ``gcd(phi, phi')`` must be
    nontrivial, and that gcd must have a real root (Sturm over Q(rho)).
    Rational parameters on either flank, closer than any other locus root,
    give the flank counts recorded in the certificate.
    """
    _check_n(n)
    phi = dynatomic(f, n).phi
    res = discriminant_locus(f, n)
    if not res:
        raise ArithmeticError("discriminant locus vanishes identically")
    locus = square_free_part(res * phi.lc)
    all_roots = isolate_real_roots(locus)
    roots = all_roots
    if positive_only:
        roots = [r for r in roots if r.compare(0) > 0]
    # separate roots by multiplicity so each RootField starts from a small modulus
    pieces = [a for a, _ in square_free_decomposition(res * phi.lc)]
    accepted, details, rejected = [], [], []
    for rho in roots:
        piece = next((a for a in pieces if rho.is_root_of(a)), locus)
        fld = RootField(AlgebraicRoot(piece, rho.isolator) if rho.as_fraction() is None else rho)
        if fld.is_zero(phi.lc):
            rejected.append(rho)
            continue
        P = fld.specialize(phi)
        G = fld.gcd(P, fld.derivative(P))
        k = len(G) - 1
        if k < 1:
            rejected.append(rho)
            continue
        real = fld.sturm_count(G)
        if real == 0:
            rejected.append(rho)
            continue
        lo, hi = _separated_flanks(rho, all_roots)
        with warnings.catch_warnings():
            # a flank can land where the leading coefficient vanishes; the count is still right
            warnings.simplefilter("ignore", LeadingCoefficientVanishes)
            flanks = (
                count_period_points(f, n, lo).count,
                count_period_points(f, n, hi).count,
            )
        count_at = fld.sturm_count(P)
        rho_out = fld.root.simplify()
        accepted.append(rho_out)
        details.append(TangentCertificate(rho_out, k, real, flanks, count_at, (lo, hi)))
    return TangentLocus(n=n, params=accepted, certificate=res, details=details, rejected=rejected)
