"""Registry of one-parameter polynomial map families.

Each family is a rule ``x -> rule(t, x)`` stored as a :class:`ParamPoly`.
Families that reduce to the quadratic normal form ``f_alpha(x) = 1 - alpha*x**2``
carry the reduction ``t -> alpha(t)`` and an affine conjugacy ``h`` with
``F_t o h = h o f_alpha(t)``.

Built-in names:

================  ===========================  ============================
name              rule                         reduction
================  ===========================  ============================
quadratic-normal  1 - alpha*x^2                alpha
S-fixed-a         a - c*x^2                    a*c
T-fixed-a         a - c*(1 + x^2)              (a - c)*c
logistic          mu*x*(1 - x)                 (mu^2 - 2*mu)/4
cubic-exercise    x^3 - 2*x + c                none
================  ===========================  ============================

The general ``a - c*(b + x^2)`` family is the S family with ``a`` replaced by
``a - b*c``; only ``b = 1`` is built in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebraic import AlgebraicRoot
from .poly import ParamPoly, UniPoly, as_fraction, compose


class UnknownFamily(KeyError):
    pass


class MissingFixedParam(ValueError):
    pass


class DegenerateConjugacy(ValueError):
    """The affine conjugacy collapses to a constant map at this parameter."""


class ExactParameterRequired(TypeError):
    """An operation needs rational fixed parameters but got an algebraic one."""


@dataclass(frozen=True)
class Conjugacy:
    """Affine ``h(x) = offset + scale*x`` with ``F_s o h = h o G_u`` claimed."""

    offset: Fraction
    scale: Fraction
    source: "MapFamily"
    source_param: Fraction
    target: "MapFamily"
    target_param: Fraction

    @property
    def h(self) -> UniPoly:
        return UniPoly((self.offset, self.scale))


@dataclass(frozen=True)
class MapFamily:
    name: str
    rule: ParamPoly | None
    param_name: str
    reduction: UniPoly | None = None
    fixed: tuple = ()
    _conjugacy: Callable | None = field(default=None, compare=False, repr=False)

    def __hash__(self) -> int:
        return hash((self.name, self.rule, self.fixed))

    @property
    def descriptor(self) -> str:
        if not self.fixed:
            return self.name
        inner = ",".join(f"{k}={_fmt(v)}" for k, v in self.fixed)
        return f"{self.name}({inner})"

    def fixed_value(self, key: str):
        for k, v in self.fixed:
            if k == key:
                return v
        raise KeyError(key)

    @property
    def is_exact(self) -> bool:
        return self.rule is not None

    def require_rule(self) -> ParamPoly:
        if self.rule is None:
            raise ExactParameterRequired(
                f"{self.descriptor}: operation needs rational fixed parameters"
            )
        return self.rule

    def at(self, t) -> UniPoly:
        """The map ``x -> rule(t, x)`` at a rational parameter."""
        return self.require_rule().specialize(t)

    def effective_alpha(self, t):
        """Normal-form parameter for ``t`` (rational, or AlgebraicRoot when exact)."""
        if self.reduction is None:
            raise ValueError(f"{self.name} has no normal-form reduction")
        if isinstance(t, AlgebraicRoot):
            return t.image(self.reduction).value_or_root()
        return self.reduction(as_fraction(t))

    def conjugacy(self, t) -> Conjugacy:
        if self._conjugacy is None:
            raise ValueError(f"{self.name} carries no conjugacy")
        return self._conjugacy(self, as_fraction(t))

    def critical_points(self, t: float) -> list[float]:
        """Real critical points of the map at a float parameter."""
        import numpy as np

        d = self.require_rule().derivative_x().float_coeffs(t)
        while d and d[-1] == 0.0:
            d.pop()
        if len(d) <= 1:
            return [0.0]
        roots = np.roots(d[::-1])
        return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, AlgebraicRoot):
        return v.pretty()
    return repr(v)


def _const(c) -> UniPoly:
    return UniPoly((c,))


_T = UniPoly((0, 1))


def _normal_conjugacy(fam, t):
    return Conjugacy(Fraction(0), Fraction(1), fam, t, QUADRATIC_NORMAL, t)


def _s_conjugacy(fam, c):
    a = fam.fixed_value("a")
    if a == 0:
        raise DegenerateConjugacy("a = 0 makes R_a constant")
    return Conjugacy(Fraction(0), a, fam, c, QUADRATIC_NORMAL, a * c)


def _t_conjugacy(fam, c):
    a = fam.fixed_value("a")
    scale = a - c
    if scale == 0:
        raise DegenerateConjugacy("c = a makes the conjugacy constant")
    return Conjugacy(Fraction(0), scale, fam, c, QUADRATIC_NORMAL, scale * c)


def _logistic_conjugacy(fam, mu):
    scale = mu / 4 - Fraction(1, 2)
    if scale == 0:
        raise DegenerateConjugacy("mu = 2 makes h_mu constant")
    return Conjugacy(Fraction(1, 2), scale, fam, mu, QUADRATIC_NORMAL, (mu * mu - 2 * mu) / 4)


QUADRATIC_NORMAL = MapFamily(
    name="quadratic-normal",
    rule=ParamPoly([_const(1), _const(0), UniPoly((0, -1))]),
    param_name="alpha",
    reduction=_T,
    _conjugacy=_normal_conjugacy,
)

BUILTIN_NAMES = ("quadratic-normal", "S-fixed-a", "T-fixed-a", "logistic", "cubic-exercise")


def builtin(name: str, fixed_params=()) -> MapFamily:
    """Construct one of the built-in families.

    ``fixed_params`` holds ``[a]`` for the S and T families.  ``a`` may be an
    :class:`AlgebraicRoot`; the resulting family then has no rational rule
    and supports only the closed-form (interval) operations.
    """
    fixed_params = list(fixed_params)
    if name == "quadratic-normal":
        return QUADRATIC_NORMAL
    if name == "logistic":
        return MapFamily(
            name="logistic",
            rule=ParamPoly([_const(0), _T, UniPoly((0, -1))]),
            param_name="mu",
            reduction=UniPoly((0, Fraction(-1, 2), Fraction(1, 4))),
            _conjugacy=_logistic_conjugacy,
        )
    if name == "cubic-exercise":
        return MapFamily(
            name="cubic-exercise",
            rule=ParamPoly([_T, _const(-2), _const(0), _const(1)]),
            param_name="c",
        )
    if name in ("S-fixed-a", "T-fixed-a"):
        if not fixed_params:
            raise MissingFixedParam(f"{name} needs a fixed parameter a")
        a = fixed_params[0]
        if isinstance(a, AlgebraicRoot):
            exact = a.as_fraction()
            if exact is None:
                return MapFamily(name=name, rule=None, param_name="c", fixed=(("a", a),))
            a = exact
        a = as_fraction(a)
        if name == "S-fixed-a":
            rule = ParamPoly([_const(a), _const(0), UniPoly((0, -1))])
            red = UniPoly((0, a))
            conj = _s_conjugacy
        else:
            rule = ParamPoly([UniPoly((a, -1)), _const(0), UniPoly((0, -1))])
            red = UniPoly((0, a, -1))
            conj = _t_conjugacy
        return MapFamily(name=name, rule=rule, param_name="c", reduction=red,
                         fixed=(("a", a),), _conjugacy=conj)
    raise UnknownFamily(name)


def verify_conjugacy(c: Conjugacy) -> bool:
    """Exact check of ``F o h == h o G`` as polynomials."""
    F = c.source.at(c.source_param)
    G = c.target.at(c.target_param)
    h = c.h
    return compose(F, h) == compose(h, G)


def eval_map(f: MapFamily, t, x, iterates: int = 1) -> Fraction:
    """Exact ``f_t`` iterated ``iterates`` times at ``x``."""
    if iterates < 1:
        raise ValueError("iterates must be >= 1")
    g = f.at(t)
    x = as_fraction(x)
    for _ in range(iterates):
        x = g(x)
    return x


def iterate_symbolic(f: MapFamily, n: int) -> ParamPoly:
    """``f_t^n(x)`` as a ParamPoly."""
    rule = f.require_rule()
    out = rule
    for _ in range(n - 1):
        out = rule.compose(out)
    return out
