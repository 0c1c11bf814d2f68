"""Real algebraic numbers: isolation, refinement, sign determination.

An :class:`AlgebraicRoot` is a square-free defining polynomial together with a
rational isolating interval holding exactly one of its real roots.  A
non-degenerate isolator never has a root of the defining polynomial at an
endpoint, so the polynomial changes sign across it.

:class:`RootField` does exact arithmetic in ``Q(rho)`` without factoring the
defining polynomial: whenever a zero test finds a nontrivial common factor,
the modulus is replaced by whichever part still vanishes at ``rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .poly import (
    ONE,
    X,
    ZERO,
    _rational_sqrt,
    ParamPoly,
    UniPoly,
    as_fraction,
    descartes_changes,
    gcd,
    poly_divmod,
    resultant_x,
    square_free_part,
    sturm_count,
)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        if isinstance(value, float):
            return float(self.lo) <= value <= float(self.hi)
        return self.lo <= value <= self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __str__(self) -> str:
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def interval_eval(p: UniPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner evaluation."""
    a = b = Fraction(0)
    for c in reversed(p.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


class AlgebraicRoot:
    """A real root of a square-free rational polynomial, pinned by an isolator."""

    __slots__ = ("defining", "isolator")

    def __init__(self, defining: UniPoly, isolator: Interval):
        self.defining = defining
        self.isolator = isolator

    @classmethod
    def rational(cls, r) -> "AlgebraicRoot":
        r = as_fraction(r)
        return cls(UniPoly((-r, 1)), Interval(r, r))

    @classmethod
    def sqrt(cls, r) -> "AlgebraicRoot":
        """Positive square root of a positive rational."""
        r = as_fraction(r)
        if r <= 0:
            raise ValueError("sqrt of a non-positive rational")
        exact = _rational_sqrt(r)
        if exact is not None:
            return cls.rational(exact)
        p = UniPoly((-r, 0, 1))
        hi = max(r, Fraction(1)) + 1
        root = cls(p, Interval(0, hi))
        return root._settle()

    def _settle(self) -> "AlgebraicRoot":
        # collapse a rational root sitting at an endpoint or inside a linear factor
        lo, hi = self.isolator.lo, self.isolator.hi
        if self.defining(lo) == 0:
            return AlgebraicRoot.rational(lo)
        if self.defining(hi) == 0:
            return AlgebraicRoot.rational(hi)
        return self

    # -- basic queries -----------------------------------------------
    @property
    def is_exact_rational(self) -> bool:
        return self.isolator.lo == self.isolator.hi or self.defining.degree == 1

    def as_fraction(self) -> Fraction | None:
        if self.isolator.lo == self.isolator.hi:
            return self.isolator.lo
        if self.defining.degree == 1:
            c0, c1 = self.defining.coeffs
            return -c0 / c1
        return None

    def __float__(self) -> float:
        r = self.as_fraction()
        if r is not None:
            return float(r)
        return float(self.refine(Fraction(1, 2**60)).isolator.mid)

    def __repr__(self) -> str:
        r = self.as_fraction()
        if r is not None:
            return f"AlgebraicRoot({r})"
        return f"AlgebraicRoot({self.defining}, {self.isolator})"

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicRoot):
            if self.defining == other.defining:
                return self.isolator == other.isolator or self.compare_root(other) == 0
            return self.compare_root(other) == 0
        if isinstance(other, (int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash(round(float(self), 9))

    def pretty(self, var: str = "x") -> str:
        """``p/q``, ``sqrt(r)``/``-sqrt(r)`` when that is exact, else the root description."""
        r = self.as_fraction()
        if r is not None:
            return str(r)
        d = self.defining.monic()
        if d.degree == 2 and d.coeffs[1] == 0 and d.coeffs[0] < 0:
            return ("-" if self.compare(0) < 0 else "") + f"sqrt({-d.coeffs[0]})"
        return f"root of {self.defining.to_str(var)} in {self.isolator}"

    # -- refinement ---------------------------------------------------
    def refine(self, width) -> "AlgebraicRoot":
        """Return an equal root whose isolator width is at most ``width``."""
        width = as_fraction(width)
        if width <= 0:
            raise ValueError("refinement width must be positive")
        lo, hi = self.isolator.lo, self.isolator.hi
        if hi - lo <= width:
            return self
        p = self.defining
        s_lo = _sign(p(lo))
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = _sign(p(mid))
            if s == 0:
                return AlgebraicRoot.rational(mid)
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        return AlgebraicRoot(p, Interval(lo, hi))

    def contains(self, value) -> bool:
        return self.isolator.contains(value)

    def simplify(self) -> "AlgebraicRoot":
        """Collapse to an exact rational when a small-denominator candidate is a root."""
        if self.as_fraction() is not None:
            return AlgebraicRoot.rational(self.as_fraction())
        r = self.refine(Fraction(1, 2**64))
        if r.as_fraction() is not None:
            return r
        guess = r.isolator.mid.limit_denominator(2**24)
        if r.isolator.contains(guess) and self.defining(guess) == 0:
            return AlgebraicRoot.rational(guess)
        return self

    # -- signs and comparison -----------------------------------------
    def _root_in(self, g: UniPoly, lo: Fraction, hi: Fraction) -> bool:
        if g.degree < 1:
            return False
        if lo == hi:
            return g(lo) == 0
        return sturm_count(g, (lo, hi)) > 0

    def is_root_of(self, q: UniPoly) -> bool:
        """Exact test ``q(rho) == 0``."""
        if not q:
            return True
        r = self.as_fraction()
        if r is not None:
            return q(r) == 0
        g = gcd(self.defining, q)
        return self._root_in(g, self.isolator.lo, self.isolator.hi)

    def sign_of(self, q: UniPoly) -> int:
        """Sign of ``q(rho)``, decided exactly."""
        r = self.as_fraction()
        if r is not None:
            return _sign(q(r))
        if self.is_root_of(q):
            return 0
        root = self
        while True:
            lo, hi = root.isolator.lo, root.isolator.hi
            a, b = interval_eval(q, lo, hi)
            if a > 0:
                return 1
            if b < 0:
                return -1
            if sturm_count(q, (lo, hi)) == 0:
                return _sign(q(root.isolator.mid))
            root = root.refine(root.isolator.width / 4)
            r = root.as_fraction()
            if r is not None:
                return _sign(q(r))

    def compare(self, value) -> int:
        """Sign of ``rho - value`` for a rational ``value``."""
        value = as_fraction(value)
        return self.sign_of(UniPoly((-value, 1)))

    def compare_root(self, other: "AlgebraicRoot") -> int:
        """Sign of ``self - other``."""
        r = other.as_fraction()
        if r is not None:
            return self.compare(r)
        a, b = self, other
        g = gcd(self.defining, other.defining)
        if g.degree >= 1 and a._root_in(g, *a.isolator) and b._root_in(g, *b.isolator):
            gs = square_free_part(g)
            while True:
                ia, ib = a.isolator, b.isolator
                if ia.hi < ib.lo:
                    return -1
                if ib.hi < ia.lo:
                    return 1
                if sturm_count(gs, (min(ia.lo, ib.lo), max(ia.hi, ib.hi))) == 1:
                    return 0
                a, b = a.refine(ia.width / 2), b.refine(ib.width / 2)
        while True:
            ia, ib = a.isolator, b.isolator
            if ia.hi < ib.lo:
                return -1
            if ib.hi < ia.lo:
                return 1
            a, b = a.refine(ia.width / 2), b.refine(ib.width / 2)

    # -- derived algebraic numbers -------------------------------------
    def image(self, r: UniPoly) -> "AlgebraicRoot":
        """The algebraic number ``r(rho)`` for a rational polynomial ``r``."""
        q = self.as_fraction()
        if q is not None:
            return AlgebraicRoot.rational(r(q))
        if r.degree < 1:
            return AlgebraicRoot.rational(r(Fraction(0)))
        # Res_x(D(x), y - r(x)) vanishes at y = r(rho_i) for every root rho_i of D
        p1 = ParamPoly(UniPoly((c,)) for c in self.defining.coeffs)
        coeffs = [UniPoly((-r.coeffs[0], 1))] + [UniPoly((-c,)) for c in r.coeffs[1:]]
        p2 = ParamPoly(coeffs)
        target = square_free_part(resultant_x(p1, p2))
        candidates = isolate_real_roots(target)
        root = self
        while True:
            a, b = interval_eval(r, *root.isolator)
            hits = [c for c in candidates if not (c.isolator.hi < a or c.isolator.lo > b)]
            if len(hits) == 1:
                return hits[0]
            root = root.refine(root.isolator.width / 4)
            if root.as_fraction() is not None:
                return AlgebraicRoot.rational(r(root.as_fraction()))
            candidates = [c.refine(c.isolator.width / 2) if c.isolator.width else c for c in candidates]

    def value_or_root(self):
        r = self.as_fraction()
        return r if r is not None else self

    def scale(self, k) -> "AlgebraicRoot":
        k = as_fraction(k)
        return self.image(UniPoly((0, k)))

    def shift(self, h) -> "AlgebraicRoot":
        h = as_fraction(h)
        return self.image(UniPoly((h, 1)))

    def square(self) -> "AlgebraicRoot":
        return self.image(UniPoly((0, 0, 1)))


# -- isolation ----------------------------------------------------------------

def _cauchy_bound(p: UniPoly) -> Fraction:
    lc = abs(p.lc)
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    bound = 1 + m / lc
    return Fraction(2) ** max(1, math.ceil(math.log2(bound)) + 1)


def _descartes_on(p: UniPoly, a: Fraction, b: Fraction) -> int:
    # sign variations of (1+x)^d p((a + b x)/(1 + x)); bounds roots in (a, b)
    q = p.shift(a).scale_var(b - a)
    return descartes_changes(q.reverse().shift(1))


def isolate_real_roots(p: UniPoly) -> list[AlgebraicRoot]:
    """Disjoint isolators, one per distinct real root, sorted ascending.

    Descartes' rule on Moebius-transformed subintervals decides whether to
    accept (one sign variation), discard (none) or bisect.
    """
    if not p:
        raise ValueError("isolate_real_roots of the zero polynomial")
    if p.degree < 1:
        return []
    s = square_free_part(p)
    roots: list[AlgebraicRoot] = []
    work = s
    if s(0) == 0:
        roots.append(AlgebraicRoot.rational(0))
        work = poly_divmod(s, X)[0]
        if work.degree < 1:
            return roots
    bound = _cauchy_bound(work)
    for sign in (1, -1):
        w = work if sign == 1 else work.negate_var()
        stack = [(Fraction(0), bound)]
        while stack:
            a, b = stack.pop()
            v = _descartes_on(w, a, b)
            if v == 0:
                continue
            if v == 1:
                lo, hi = (a, b) if sign == 1 else (-b, -a)
                roots.append(AlgebraicRoot(work, Interval(lo, hi)))
                continue
            m = (a + b) / 2
            if w(m) == 0:
                roots.append(AlgebraicRoot.rational(sign * m))
            stack.append((a, m))
            stack.append((m, b))
    roots.sort(key=lambda r: r.isolator.lo)
    return roots


def real_roots_in(p: UniPoly, lo=None, hi=None) -> list[AlgebraicRoot]:
    out = []
    for r in isolate_real_roots(p):
        if lo is not None and r.compare(lo) < 0:
            continue
        if hi is not None and r.compare(hi) > 0:
            continue
        out.append(r)
    return out


# -- arithmetic in Q(rho) -------------------------------------------------------

def _xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Return ``(g, s)`` with ``s*a = g (mod b)`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    lc = r0.lc
    return r0 * (1 / lc), s0 * (1 / lc)


class RootField:
    """Exact arithmetic in Q(rho) by dynamic evaluation.

    Elements are ``UniPoly`` values in the parameter, reduced modulo a
    square-free polynomial that vanishes at ``rho``.  Polynomials over the
    field are ascending lists of elements.
    """

    def __init__(self, root: AlgebraicRoot):
        self.modulus = root.defining.monic()
        self.root = root
        r = root.as_fraction()
        if r is not None:
            self.modulus = UniPoly((-r, 1))

    def reduce(self, e: UniPoly) -> UniPoly:
        return poly_divmod(e, self.modulus)[1] if e.degree >= self.modulus.degree else e

    def _update(self, modulus: UniPoly):
        self.modulus = modulus.monic()
        self.root = AlgebraicRoot(self.modulus, self.root.isolator)
        if self.modulus.degree == 1:
            self.root = AlgebraicRoot.rational(-self.modulus.coeffs[0])

    def is_zero(self, e: UniPoly) -> bool:
        e = self.reduce(e)
        if not e:
            return True
        if e.degree == 0:
            return False
        g = gcd(self.modulus, e)
        if g.degree < 1:
            return False
        if self.root._root_in(g, *self.root.isolator):
            self._update(g)
            return True
        self._update(poly_divmod(self.modulus, g)[0])
        return False

    def sign(self, e: UniPoly) -> int:
        e = self.reduce(e)
        if self.is_zero(e):
            return 0
        s = self.root.sign_of(e)
        return s

    def mul(self, a: UniPoly, b: UniPoly) -> UniPoly:
        return self.reduce(a * b)

    def inverse(self, e: UniPoly) -> UniPoly:
        if self.is_zero(e):
            raise ZeroDivisionError("element vanishes at the root")
        g, s = _xgcd(self.reduce(e), self.modulus)
        if g.degree != 0:
            raise ArithmeticError("element not invertible modulo the current modulus")
        return self.reduce(s)

    # -- polynomials over the field -----------------------------------
    def specialize(self, p: ParamPoly) -> list[UniPoly]:
        return self.normalize([self.reduce(c) for c in p.coeffs])

    def normalize(self, P: list[UniPoly]) -> list[UniPoly]:
        P = list(P)
        while P and self.is_zero(P[-1]):
            P.pop()
        return [self.reduce(c) for c in P]

    def derivative(self, P: list[UniPoly]) -> list[UniPoly]:
        return self.normalize([c * k for k, c in enumerate(P) if k])

    def rem(self, A: list[UniPoly], B: list[UniPoly]) -> list[UniPoly]:
        B = self.normalize(B)
        if not B:
            raise ZeroDivisionError("division by the zero polynomial")
        inv = self.inverse(B[-1])
        r = self.normalize(A)
        db = len(B) - 1
        while len(r) - 1 >= db:
            c = self.mul(r[-1], inv)
            shift = len(r) - 1 - db
            for j in range(db):
                r[shift + j] = self.reduce(r[shift + j] - c * B[j])
            r.pop()
            r = self.normalize(r)
        return r

    def gcd(self, A: list[UniPoly], B: list[UniPoly]) -> list[UniPoly]:
        A, B = self.normalize(A), self.normalize(B)
        while B:
            A, B = B, self.rem(A, B)
        return A

    def eval_at(self, P: list[UniPoly], x: Fraction) -> UniPoly:
        acc = ZERO
        for c in reversed(P):
            acc = acc * x + c
        return self.reduce(acc)

    def sturm_count(self, P: list[UniPoly], interval=None) -> int:
        """Distinct real roots of ``P`` (over the real closure at rho).

        Uses the full Sturm sequence ``P, P', -rem, ...`` which counts distinct
        roots without first taking the square-free part.
        """
        P = self.normalize(P)
        if not P:
            raise ValueError("sturm_count of the zero polynomial")
        if len(P) == 1:
            return 0
        seq = [P, self.derivative(P)]
        while True:
            r = self.rem(seq[-2], seq[-1])
            if not r:
                break
            seq.append([-c for c in r])

        def var_inf(sign):
            vals = [self.sign(q[-1]) * (sign ** ((len(q) - 1) % 2)) for q in seq]
            return _count_variations(vals)

        def var_at(x):
            return _count_variations([self.sign(self.eval_at(q, x)) for q in seq])

        if interval is None:
            return var_inf(-1) - var_inf(1)
        lo, hi = interval
        lo, hi = as_fraction(lo), as_fraction(hi)
        count = var_at(lo) - var_at(hi)
        if self.is_zero(self.eval_at(P, lo)):
            count += 1
        return count


def _count_variations(signs) -> int:
    prev = 0
    n = 0
    for s in signs:
        if s:
            if prev and s != prev:
                n += 1
            prev = s
    return n
