"""Exceptional-divisor calculus on the blowup of a smooth variety along a smooth centre.

Classes on the blowup are polynomials in the base divisor classes (pulled
back) and the exceptional class ``E``.  With ``j: E -> blowup`` the
inclusion and ``zeta = -E|_E`` the relative hyperplane class,

* ``E^k * beta = j_*((E|_E)^(k-1) * beta|_E)`` for ``k >= 1``;
* the fibre integral of ``zeta^(c-1+i)`` down to the centre is the Segre
  class ``s_i`` of the normal bundle, ``c`` being the codimension.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .chow_ring import (
    RingContext,
    RingContextError,
    integrate,
    make_product,
    normal_form,
    point_context,
)
from .exact_poly import GradedPoly, Monomial, coeff, poly_mul


class BlowupError(ValueError):
    pass


@dataclass(frozen=True)
class BlowupContext:
    base: RingContext
    center: RingContext
    codim: int
    restrict_to_center: Mapping[str, GradedPoly]
    segre: tuple[GradedPoly, ...] = (GradedPoly.const(1),)
    exc_var: str = "E"
    ring: RingContext = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.codim < 2:
            raise BlowupError("centre codimension must be at least 2")
        if self.center.dimension != self.base.dimension - self.codim:
            raise BlowupError(
                f"centre dimension {self.center.dimension} != "
                f"{self.base.dimension} - {self.codim}"
            )
        if self.exc_var in self.base.variables:
            raise BlowupError(f"exceptional variable {self.exc_var!r} clashes with the base")
        segre = tuple(GradedPoly.coerce(s) for s in self.segre)
        if not segre or segre[0] != 1:
            raise BlowupError("segre[0] must be 1")
        object.__setattr__(self, "segre", segre)
        restrict = {}
        for v in self.base.variables:
            img = GradedPoly.coerce(self.restrict_to_center.get(v, GradedPoly()))
            if not img.is_homogeneous(1):
                raise BlowupError(f"restriction of {v} must be a degree-1 class")
            if img.variables() - set(self.center.variables):
                raise BlowupError(f"restriction of {v} leaves the centre ring")
            restrict[v] = img
        object.__setattr__(self, "restrict_to_center", MappingProxyType(restrict))
        ring = RingContext(
            self.base.variables + (self.exc_var,),
            {**self.base.caps, self.exc_var: None},
            self.base.dimension,
            {},
            self.base.substitutions,
            name=f"Bl({self.base})",
        )
        object.__setattr__(self, "ring", ring)

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def E(self) -> GradedPoly:
        return GradedPoly.var(self.exc_var)

    def mul(self, p: GradedPoly, q: GradedPoly) -> GradedPoly:
        return normal_form(self.ring, poly_mul(p, q, self.dimension))

    def prod(self, factors: Sequence[GradedPoly]) -> GradedPoly:
        out = GradedPoly.const(1)
        for f in factors:
            out = self.mul(out, f)
        return out

    def restrict(self, beta: GradedPoly) -> GradedPoly:
        """Restriction of a base class to the centre."""
        return normal_form(self.center, beta.substitute(self.restrict_to_center))

    def exc_push(self, a: int, beta: GradedPoly | int = 1) -> GradedPoly:
        return exc_push(a, GradedPoly.coerce(beta), self.exc_var)


def exc_push(a: int, beta: GradedPoly, exc_var: str = "E") -> GradedPoly:
    """Ambient class of ``j_*(zeta^a * beta|_E)``, namely ``(-1)^a E^(a+1) beta``."""
    if a < 0:
        raise BlowupError("exponent must be non-negative")
    E = GradedPoly.var(exc_var)
    return (E ** (a + 1) * GradedPoly.coerce(beta)).scale((-1) ** a)


def _split_exc(ctx: BlowupContext, m: Monomial) -> tuple[Monomial, int]:
    return m.without(ctx.exc_var), m.exponent(ctx.exc_var)


def integrate_blowup(ctx: BlowupContext, p: GradedPoly) -> Fraction:
    """Degree of a top-degree class on the blowup.

    ``beta * E^k`` contributes ``∫_base beta`` for ``k = 0`` and
    ``(-1)^(k-1) ∫_centre s_(k-c) * beta|_centre`` otherwise.
    """
    q = normal_form(ctx.ring, p)
    total = Fraction(0)
    for m, c in q.terms.items():
        if m.degree != ctx.dimension:
            continue
        beta_m, k = _split_exc(ctx, m)
        beta = GradedPoly.monomial(beta_m)
        if k == 0:
            total += c * integrate(ctx.base, beta)
            continue
        j = k - ctx.codim
        if j < 0:
            continue
        restricted = ctx.restrict(beta)
        if restricted.is_zero():
            continue
        if j >= len(ctx.segre):
            raise BlowupError(
                f"Segre class s_{j} of the normal bundle is needed for {m} but not supplied"
            )
        val = integrate(ctx.center, poly_mul(ctx.segre[j], restricted, ctx.center.dimension))
        total += c * (-1) ** (k - 1) * val
    return total


def center_component(ctx: BlowupContext, p: GradedPoly, codim_class: int) -> Fraction:
    """Multiple of the centre cycle in the pushforward of ``p``, modulo base classes.

    ``p`` must be homogeneous of degree ``codim_class``, which must equal
    the codimension of the centre.  Mixed terms ``beta * E^k`` with
    ``k < c`` have too small a fibre degree and push forward to zero; pure
    base terms are the hyperplane-type part that is discarded.  What is
    left is ``E^c = (-1)^(c-1) j_*(zeta^(c-1))``, pushing to
    ``(-1)^(c-1) [centre]``.
    """
    if codim_class != ctx.codim:
        raise BlowupError(
            f"only the centre codimension {ctx.codim} can be extracted, got {codim_class}"
        )
    q = normal_form(ctx.ring, p)
    if not q.is_homogeneous(codim_class):
        raise BlowupError(f"class is not homogeneous of degree {codim_class}")
    return (-1) ** (ctx.codim - 1) * coeff(q, Monomial({ctx.exc_var: ctx.codim}))


def point_blowup(base: RingContext, exc_var: str = "E") -> BlowupContext:
    """Blowup of ``base`` at a point; every base class restricts to 0."""
    return BlowupContext(base, point_context(), base.dimension, {}, exc_var=exc_var)


def diagonal_blowup(
    sub: RingContext, ambient: RingContext, exc_var: str = "E",
    segre: Sequence[GradedPoly] = (GradedPoly.const(1),),
) -> BlowupContext:
    """Blowup of ``sub x ambient`` along the diagonal copy of ``sub``.

    Both factors are single-variable contexts; both hyperplane classes
    restrict to the one of ``sub``.
    """
    if len(sub.variables) != 1 or len(ambient.variables) != 1:
        raise BlowupError("diagonal blowup expects single-variable factors")
    try:
        base = make_product(sub, ambient)
    except RingContextError as exc:
        raise BlowupError(str(exc)) from exc
    (u,), (x,) = sub.variables, ambient.variables
    hu = GradedPoly.var(u)
    return BlowupContext(
        base, sub, ambient.dimension, {u: hu, x: hu}, tuple(segre), exc_var=exc_var
    )
