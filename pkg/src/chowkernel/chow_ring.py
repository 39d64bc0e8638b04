"""Graded ring presentations with nilpotency caps and degree functionals.

A :class:`RingContext` models the Chow ring of a projective space, a
product of such, a hypersurface seen only through powers of its hyperplane
class, or a projective bundle carrying a Grothendieck relation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .exact_poly import GradedPoly, Monomial, Scalar, as_rational, poly_mul


class RingContextError(ValueError):
    pass


@dataclass(frozen=True)
class Substitution:
    """Rewrite rule ``var**power -> replacement``."""

    var: str
    power: int
    replacement: GradedPoly

    def __post_init__(self):
        if self.power < 1:
            raise RingContextError("substitution power must be positive")
        for m in self.replacement.terms:
            if m.exponent(self.var) >= self.power:
                raise RingContextError(
                    f"substitution for {self.var}^{self.power} does not lower its exponent"
                )


@dataclass(frozen=True)
class RingContext:
    variables: tuple[str, ...]
    caps: Mapping[str, int | None]
    dimension: int
    integration_table: Mapping[Monomial, Fraction]
    substitutions: tuple[Substitution, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.dimension < 0:
            raise RingContextError("dimension must be non-negative")
        if len(set(self.variables)) != len(self.variables):
            raise RingContextError("duplicate variable names")
        caps = {v: self.caps.get(v) for v in self.variables}
        object.__setattr__(self, "caps", MappingProxyType(caps))
        table = {Monomial(m) if not isinstance(m, Monomial) else m: as_rational(c)
                 for m, c in self.integration_table.items()}
        for m in table:
            if m.degree != self.dimension:
                raise RingContextError(f"table entry {m} is not of top degree")
        object.__setattr__(self, "integration_table", MappingProxyType(table))
        for s in self.substitutions:
            if s.var not in self.variables:
                raise RingContextError(f"substitution on unknown variable {s.var!r}")

    def __str__(self) -> str:
        return self.name or f"RingContext({', '.join(self.variables)}; dim {self.dimension})"

    def gen(self, var: str) -> GradedPoly:
        if var not in self.variables:
            raise RingContextError(f"unknown variable {var!r}")
        return GradedPoly.var(var)

    def mul(self, p: GradedPoly, q: GradedPoly) -> GradedPoly:
        return normal_form(self, poly_mul(p, q, self.dimension))

    def prod(self, factors: Sequence[GradedPoly]) -> GradedPoly:
        out = GradedPoly.const(1)
        for f in factors:
            out = self.mul(out, f)
        return out

    def integrate(self, p: GradedPoly) -> Fraction:
        return integrate(self, p)

    def normal_form(self, p: GradedPoly) -> GradedPoly:
        return normal_form(self, p)


def point_context() -> RingContext:
    """The zero-dimensional ring of a point, with ``∫ 1 = 1``."""
    return RingContext((), {}, 0, {Monomial(): 1}, name="pt")


def hypersurface_context(ambient_var: str, dim: int, deg: Scalar) -> RingContext:
    """Powers of the hyperplane class on a degree ``deg`` variety of dimension ``dim``."""
    if dim < 0:
        raise RingContextError("dimension must be non-negative")
    deg = as_rational(deg)
    if deg <= 0:
        raise RingContextError("degree must be positive")
    return RingContext(
        (ambient_var,), {ambient_var: dim}, dim, {Monomial({ambient_var: dim}): deg},
        name=f"<{ambient_var}> dim {dim} deg {deg}",
    )


def make_projective_space(N: int, var: str) -> RingContext:
    ctx = hypersurface_context(var, N, 1)
    return RingContext(ctx.variables, ctx.caps, N, ctx.integration_table, name=f"P^{N}<{var}>")


def make_product(a: RingContext, b: RingContext) -> RingContext:
    clash = set(a.variables) & set(b.variables)
    if clash:
        raise RingContextError(f"variable names collide: {sorted(clash)}")
    table = {}
    for ma, ia in a.integration_table.items():
        for mb, ib in b.integration_table.items():
            table[ma * mb] = ia * ib
    return RingContext(
        a.variables + b.variables,
        {**a.caps, **b.caps},
        a.dimension + b.dimension,
        table,
        a.substitutions + b.substitutions,
        name=f"{a} x {b}",
    )


def make_projective_bundle(base: RingContext, chern: Sequence[GradedPoly], var: str) -> RingContext:
    """Projective bundle of rank-one quotients of a bundle with Chern classes ``chern``.

    ``chern`` lists ``c_1 .. c_e`` as polynomials on ``base``.  With ``var``
    the class of ``O(1)`` the relation is
    ``var^e - c_1 var^(e-1) + c_2 var^(e-2) - ... = 0`` and the fibre
    integral of ``var^(e-1)`` is 1.
    """
    if var in base.variables:
        raise RingContextError(f"variable {var!r} already in base")
    e = len(chern)
    if e < 1:
        raise RingContextError("bundle rank must be at least 1")
    xi = GradedPoly.var(var)
    repl = GradedPoly()
    for i, c in enumerate(chern, start=1):
        c = GradedPoly.coerce(c)
        if c.variables() - set(base.variables):
            raise RingContextError("Chern classes must live on the base")
        sign = 1 if i % 2 == 1 else -1
        repl = repl + (c * xi ** (e - i)).scale(sign)
    table = {m * Monomial({var: e - 1}): v for m, v in base.integration_table.items()}
    return RingContext(
        base.variables + (var,),
        {**base.caps, var: None},
        base.dimension + e - 1,
        table,
        base.substitutions + (Substitution(var, e, repl),),
        name=f"P({base}; rank {e})",
    )


def _check_vars(ctx: RingContext, p: GradedPoly) -> None:
    unknown = p.variables() - set(ctx.variables)
    if unknown:
        raise RingContextError(f"unknown variable(s) {sorted(unknown)} for {ctx}")


def _killed(ctx: RingContext, m: Monomial) -> bool:
    if m.degree > ctx.dimension:
        return True
    for v, e in m:
        cap = ctx.caps[v]
        if cap is not None and e > cap:
            return True
    return False


def normal_form(ctx: RingContext, p: GradedPoly) -> GradedPoly:
    """Apply substitutions to a fixpoint, then drop capped and over-degree terms."""
    _check_vars(ctx, p)
    rules = {s.var: s for s in ctx.substitutions}
    if not rules:
        return GradedPoly({m: c for m, c in p.terms.items() if not _killed(ctx, m)})
    # rewriting never lowers the exponent of a variable without a rule, and
    # never lowers the degree when every rule is degree preserving
    graded = all(s.replacement.is_homogeneous(s.power) for s in rules.values())

    def dead(m: Monomial) -> bool:
        if graded and m.degree > ctx.dimension:
            return True
        return any(v not in rules and ctx.caps[v] is not None and e > ctx.caps[v]
                   for v, e in m)

    done: dict[Monomial, Fraction] = {}
    pending = list(p.terms.items())
    while pending:
        m, c = pending.pop()
        if dead(m):
            continue
        rule = next((rules[v] for v, e in m if v in rules and e >= rules[v].power), None)
        if rule is None:
            if not _killed(ctx, m):
                done[m] = done.get(m, Fraction(0)) + c
            continue
        rest = Monomial(
            [(v, e - rule.power) if v == rule.var else (v, e) for v, e in m]
        )
        for m2, c2 in rule.replacement.terms.items():
            pending.append((rest * m2, c * c2))
    return GradedPoly(done)


def integrate(ctx: RingContext, p: GradedPoly) -> Fraction:
    """Degree functional: top-degree terms weighted by the integration table."""
    q = normal_form(ctx, p)
    total = Fraction(0)
    for m, c in q.terms.items():
        if m.degree != ctx.dimension:
            continue
        if m not in ctx.integration_table:
            raise RingContextError(f"no integration value for {m} in {ctx}")
        total += c * ctx.integration_table[m]
    return total
