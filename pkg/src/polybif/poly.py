"""Exact univariate and one-parameter polynomial arithmetic over the rationals.

Two polynomial types live here:

``UniPoly``
    a polynomial in one variable with :class:`fractions.Fraction`
    coefficients, stored in ascending degree order.  The zero polynomial has
    an empty coefficient tuple and degree ``-1``.
``ParamPoly``
    a polynomial in ``x`` whose coefficients are ``UniPoly`` objects in a
    parameter ``t``.  Dynamical-system rules ``x -> f_t(x)`` are stored this
    way.

Both types are immutable.  Resultants follow the Sylvester-matrix sign
convention: ``Res(p, q) = lc(p)**deg(q) * prod(q(r) for r in roots(p))``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Callable, Iterable, Sequence


class NonzeroRemainder(ArithmeticError):
    """Raised when a division that was claimed to be exact leaves a remainder."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class UniPoly:
    """Polynomial with rational coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([as_fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "UniPoly":
        # coeffs already Fractions and stripped
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-as_fraction(r), 1))
        return p

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([Fraction(other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("UniPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly((other,))

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            k = as_fraction(other)
            if not k:
                return UniPoly._raw(())
            return UniPoly._raw(tuple(c * k for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return UniPoly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative power")
        result = UniPoly._raw((Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "UniPoly"):
        return poly_divmod(self, other)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return poly_divmod(self, self._coerce(other))[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return poly_divmod(self, self._coerce(other))[1]

    # -- evaluation and transforms ------------------------------------
    def __call__(self, x):
        if isinstance(x, UniPoly):
            return compose(self, x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if self.coeffs else Fraction(0)

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly._raw(tuple(k * c for k, c in enumerate(self.coeffs) if k)) if self.degree > 0 else UniPoly._raw(())

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly._raw(tuple(c / lc for c in self.coeffs))

    def negate_var(self) -> "UniPoly":
        """p(-x)."""
        return UniPoly._raw(tuple(-c if k % 2 else c for k, c in enumerate(self.coeffs)))

    def scale_var(self, k) -> "UniPoly":
        """p(k*x)."""
        k = as_fraction(k)
        return UniPoly([c * k**i for i, c in enumerate(self.coeffs)])

    def shift(self, h) -> "UniPoly":
        """p(x + h), by repeated synthetic division (Taylor shift)."""
        h = as_fraction(h)
        a = list(self.coeffs)
        n = len(a)
        if not h or n < 2:
            return self
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] += h * a[j + 1]
        return UniPoly._raw(_strip(a))

    def reverse(self) -> "UniPoly":
        """x**deg * p(1/x)."""
        return UniPoly(reversed(self.coeffs))

    def primitive_int(self) -> list[int]:
        """Integer coefficient list of a positive multiple of ``self`` with content 1."""
        if not self.coeffs:
            return []
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return [v // g for v in ints]


ZERO = UniPoly._raw(())
ONE = UniPoly._raw((Fraction(1),))
X = UniPoly._raw((Fraction(0), Fraction(1)))


def poly_divmod(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly]:
    if not b.coeffs:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a.coeffs)
    db = b.degree
    if len(r) - 1 < db:
        return ZERO, a
    inv = 1 / b.coeffs[-1]
    bc = b.coeffs
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv
        q[k] = c
        if c:
            for j in range(db):
                r[k + j] -= c * bc[j]
        r[k + db] = Fraction(0)
    return UniPoly._raw(_strip(q)), UniPoly._raw(_strip(r[:db]))


def compose(outer: UniPoly, inner: UniPoly) -> UniPoly:
    """Return ``outer(inner(x))``."""
    acc = ZERO
    for c in reversed(outer.coeffs):
        acc = acc * inner + c
    return acc


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    while b.coeffs:
        a, b = b, poly_divmod(a, b)[1].monic()
    return a.monic()


def square_free_part(p: UniPoly) -> UniPoly:
    """Monic ``p / gcd(p, p')``: same distinct roots, all simple."""
    if p.degree < 1:
        return p.monic()
    g = gcd(p, p.derivative())
    return poly_divmod(p, g)[0].monic()


def square_free_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: monic square-free, pairwise coprime ``(a_i, i)`` with
    ``p = lc * prod(a_i ** i)``; trivial factors are omitted."""
    if p.degree < 1:
        return []
    out = []
    dp = p.derivative()
    a = gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = c - b.derivative()
    i = 1
    while b.degree >= 1:
        a = gcd(b, d)
        if a.degree >= 1:
            out.append((a.monic(), i))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = c - b.derivative()
        i += 1
    return out


def divide_exact(dividend, divisor):
    """Quotient of an exact division of ``UniPoly`` or ``ParamPoly`` values.

    The remainder is computed and checked; a nonzero remainder raises
    :class:`NonzeroRemainder`.
    """
    if isinstance(dividend, ParamPoly) or isinstance(divisor, ParamPoly):
        return ParamPoly.coerce(dividend).divide_exact(ParamPoly.coerce(divisor))
    q, r = poly_divmod(dividend, divisor)
    if r:
        raise NonzeroRemainder(f"remainder {r} is not zero")
    return q


# -- real-root counting ----------------------------------------------------

def descartes_changes(p: UniPoly) -> int:
    """Number of sign changes in the nonzero coefficient sequence."""
    signs = [c > 0 for c in p.coeffs if c]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    """Sturm sequence of the square-free part of ``p``.

    Members are rescaled by positive constants, which leaves every sign
    unchanged.
    """
    p0 = square_free_part(p)
    if p0.degree < 1:
        return [p0]
    chain = [p0, p0.derivative().monic()]
    while True:
        r = poly_divmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append(-(r * (1 / abs(r.lc))))
    return chain


def _variations(values: Iterable) -> int:
    prev = 0
    n = 0
    for v in values:
        if v:
            s = 1 if v > 0 else -1
            if prev and s != prev:
                n += 1
            prev = s
    return n


def _var_at(chain: Sequence[UniPoly], x) -> int:
    return _variations(q(x) for q in chain)


def _var_at_inf(chain: Sequence[UniPoly], sign: int) -> int:
    return _variations(q.lc * (sign ** (q.degree % 2)) for q in chain)


def sturm_count(p: UniPoly, interval=None) -> int:
    """Number of distinct real roots of ``p`` on the whole line or in ``[lo, hi]``.

    ``interval`` may be ``None`` or any object with ``lo``/``hi`` attributes or a
    ``(lo, hi)`` pair; ``None`` bounds are taken as infinite.
    """
    if not p.coeffs:
        raise ValueError("sturm_count of the zero polynomial")
    chain = sturm_chain(p)
    if chain[0].degree < 1:
        return 0
    lo, hi = _interval_bounds(interval)
    v_lo = _var_at_inf(chain, -1) if lo is None else _var_at(chain, lo)
    v_hi = _var_at_inf(chain, 1) if hi is None else _var_at(chain, hi)
    count = v_lo - v_hi
    if lo is not None and not chain[0](lo):
        count += 1
    return count


def _interval_bounds(interval):
    if interval is None:
        return None, None
    if hasattr(interval, "lo"):
        return interval.lo, interval.hi
    lo, hi = interval
    return lo, hi


# -- perfect squares --------------------------------------------------------

def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def perfect_square_decompose(p: UniPoly) -> UniPoly | None:
    """Return ``q`` with ``q*q == p`` and positive leading coefficient, or None."""
    if not p.coeffs:
        raise ValueError("perfect_square_decompose of the zero polynomial")
    d = p.degree
    if d % 2:
        return None
    top = _rational_sqrt(p.lc)
    if top is None:
        return None
    m = d // 2
    q = [Fraction(0)] * (m + 1)
    q[m] = top
    for k in range(1, m + 1):
        acc = p.coeffs[d - k]
        for i in range(1, k):
            acc -= q[m - i] * q[m - k + i]
        q[m - k] = acc / (2 * top)
    root = UniPoly._raw(_strip(q))
    return root if root * root == p else None


# -- resultants ---------------------------------------------------------------

def _prem(f: list, g: list, zero, mul_scalar) -> list:
    """Pseudo-remainder of ascending coefficient lists over an integral domain."""
    df, dg = len(f) - 1, len(g) - 1
    r = list(f)
    lc = g[-1]
    for _ in range(df - dg + 1):
        if len(r) - 1 < dg:
            # keep the multiplier lc**(df-dg+1) exact
            r = [lc * c for c in r]
            continue
        top = r[-1]
        shift = len(r) - 1 - dg
        r = [lc * c for c in r]
        for j in range(dg + 1):
            r[shift + j] = r[shift + j] - top * g[j]
        while r and not r[-1]:
            r.pop()
    return r


def subresultant_prs(f: list, g: list, zero, one, quo: Callable) -> tuple[list, list]:
    """Subresultant polynomial remainder sequence (Brown's algorithm).

    ``f`` and ``g`` are ascending coefficient lists over an integral domain in
    which ``quo(a, b)`` is exact division; ``deg f >= deg g`` is required.
    Returns ``(R, S)``: the remainder sequence and the scalar subresultants,
    with ``S[-1]`` the resultant when ``R[-1]`` is a constant.
    """
    n, m = len(f) - 1, len(g) - 1
    assert n >= m
    if not g:
        return [f], [one]
    R = [f, g]
    d = n - m
    b = one if (d + 1) % 2 == 0 else -one
    h = [b * c for c in _prem(f, g, zero, None)]
    lc = g[-1]
    c = lc**d if d else one
    S = [one, c]
    c = -c
    while h:
        k = len(h) - 1
        R.append(h)
        f, g, m, d = g, h, k, m - k
        b = -lc * (c**d if d else one)
        h = [quo(x, b) for x in _prem(f, g, zero, None)]
        lc = g[-1]
        if d > 1:
            q = c ** (d - 1)
            c = quo((-lc) ** d, q)
        else:
            c = -lc
        S.append(-c)
    return R, S


def _resultant_generic(f: list, g: list, zero, one, quo):
    if not f or not g:
        return zero
    n, m = len(f) - 1, len(g) - 1
    sign = one
    if n < m:
        f, g = g, f
        if (n * m) % 2:
            sign = -one
    R, S = subresultant_prs(f, g, zero, one, quo)
    if len(R[-1]) - 1 > 0:
        return zero
    return sign * S[-1]


def resultant(p: UniPoly, q: UniPoly) -> Fraction:
    """Resultant of two univariate rational polynomials (Sylvester sign)."""
    return _resultant_generic(list(p.coeffs), list(q.coeffs), Fraction(0), Fraction(1), lambda a, b: a / b)


def _uni_quo(a: UniPoly, b: UniPoly) -> UniPoly:
    return divide_exact(a, b)


# -- parameterized polynomials ------------------------------------------------

class ParamPoly:
    """Polynomial in ``x`` whose coefficients are ``UniPoly`` values in ``t``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, UniPoly) else UniPoly((c,)) for c in coeffs]
        self.coeffs = _strip(cs)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "ParamPoly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def coerce(cls, value) -> "ParamPoly":
        if isinstance(value, ParamPoly):
            return value
        if isinstance(value, UniPoly):
            # univariate polynomial in x with constant coefficients
            return cls(UniPoly((c,)) for c in value.coeffs)
        return cls((value,))

    @classmethod
    def from_terms(cls, terms: dict) -> "ParamPoly":
        """Build from ``{(x_power, t_power): coefficient}``."""
        nx = max((i for i, _ in terms), default=-1) + 1
        rows = [[] for _ in range(nx)]
        for (i, j), c in terms.items():
            row = rows[i]
            if len(row) <= j:
                row.extend([0] * (j + 1 - len(row)))
            row[j] += as_fraction(c)
        return cls(UniPoly(r) for r in rows)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def t_degree(self) -> int:
        return max((c.degree for c in self.coeffs), default=-1)

    @property
    def lc(self) -> UniPoly:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("ParamPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"ParamPoly({self.to_str()})"

    def to_str(self, var: str = "x", param: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(f"({c.to_str(param)})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __add__(self, other) -> "ParamPoly":
        other = ParamPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return ParamPoly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "ParamPoly":
        return self + (-ParamPoly.coerce(other))

    def __rsub__(self, other) -> "ParamPoly":
        return ParamPoly.coerce(other) - self

    def __mul__(self, other) -> "ParamPoly":
        if isinstance(other, (int, Fraction)):
            return ParamPoly._raw(_strip([c * other for c in self.coeffs]))
        a, b = self.coeffs, ParamPoly.coerce(other).coeffs
        if not a or not b:
            return ParamPoly._raw(())
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = out[i + j] + ai * bj
        return ParamPoly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ParamPoly":
        result = ParamPoly._raw((ONE,))
        for _ in range(k):
            result = result * self
        return result

    def scale_t(self, u: UniPoly) -> "ParamPoly":
        """Multiply every coefficient by the parameter polynomial ``u``."""
        return ParamPoly._raw(_strip([c * u for c in self.coeffs]))

    def compose(self, inner: "ParamPoly") -> "ParamPoly":
        """``self(t, inner(t, x))``."""
        acc = ParamPoly._raw(())
        for c in reversed(self.coeffs):
            acc = acc * inner + ParamPoly._raw((c,) if c else ())
        return acc

    def derivative_x(self) -> "ParamPoly":
        return ParamPoly._raw(_strip([c * k for k, c in enumerate(self.coeffs) if k]))

    def derivative_t(self) -> "ParamPoly":
        return ParamPoly._raw(_strip([c.derivative() for c in self.coeffs]))

    def specialize(self, t) -> UniPoly:
        """Evaluate every coefficient at the rational ``t``."""
        t = as_fraction(t)
        return UniPoly(c(t) for c in self.coeffs)

    def float_coeffs(self, t: float) -> list[float]:
        return [c.eval_float(t) for c in self.coeffs]

    def swap(self) -> "ParamPoly":
        """Exchange the roles of ``x`` and ``t``."""
        terms = {}
        for i, c in enumerate(self.coeffs):
            for j, v in enumerate(c.coeffs):
                if v:
                    terms[(j, i)] = v
        return ParamPoly.from_terms(terms)

    def divmod(self, divisor: "ParamPoly") -> tuple["ParamPoly", "ParamPoly"]:
        """Division in Q[t][x]; each leading-coefficient quotient must be exact in Q[t]."""
        if not divisor.coeffs:
            raise ZeroDivisionError("ParamPoly division by zero")
        r = list(self.coeffs)
        db = divisor.degree
        dc = divisor.coeffs
        lc = dc[-1]
        if len(r) - 1 < db:
            return ParamPoly._raw(()), self
        q = [ZERO] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            top = r[k + db]
            if not top:
                continue
            c = divide_exact(top, lc)
            q[k] = c
            for j in range(db):
                if dc[j]:
                    r[k + j] = r[k + j] - c * dc[j]
            r[k + db] = ZERO
        return ParamPoly._raw(_strip(q)), ParamPoly._raw(_strip(r[:db]))

    def divide_exact(self, divisor: "ParamPoly") -> "ParamPoly":
        q, r = self.divmod(divisor)
        if r:
            raise NonzeroRemainder("ParamPoly division leaves a nonzero remainder")
        return q


def resultant_x(p: ParamPoly, q: ParamPoly) -> UniPoly:
    """Resultant with respect to ``x``, a polynomial in the parameter ``t``.

    Computed by the subresultant PRS over Q[t].  Sign follows the Sylvester
    determinant with the rows of ``p`` on top.
    """
    p, q = ParamPoly.coerce(p), ParamPoly.coerce(q)
    if not p or not q:
        raise ValueError("resultant_x of a zero polynomial")
    return _resultant_generic(list(p.coeffs), list(q.coeffs), ZERO, ONE, _uni_quo)


def sylvester_matrix(p: Sequence, q: Sequence) -> list[list]:
    """Sylvester matrix of ascending coefficient sequences (rows of ``p`` first)."""
    n, m = len(p) - 1, len(q) - 1
    size = n + m
    zero = p[0] * 0
    rows = []
    pd = list(reversed(p))
    qd = list(reversed(q))
    for i in range(m):
        rows.append([zero] * i + pd + [zero] * (size - i - n - 1))
    for i in range(n):
        rows.append([zero] * i + qd + [zero] * (size - i - m - 1))
    return rows
