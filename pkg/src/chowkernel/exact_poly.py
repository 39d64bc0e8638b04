"""Exact sparse polynomials over the rationals in degree-one variables.

Every class handled by the kernel is a polynomial in divisor classes, so a
variable always has degree 1 and the degree of a monomial is the sum of its
exponents.  Coefficients are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction

Scalar = Union[int, Fraction]


def as_rational(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact scalar, got {type(x).__name__}")


class Monomial(tuple):
    """Immutable monomial stored as sorted ``(variable, exponent)`` pairs.

    Zero exponents are never stored, so ``Monomial({"x": 0})`` is the unit.
    """

    __slots__ = ()

    def __new__(cls, exponents: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        merged: dict[str, int] = {}
        for var, e in items:
            if e < 0:
                raise ValueError(f"negative exponent for {var!r}")
            if e:
                merged[var] = merged.get(var, 0) + e
        return super().__new__(cls, tuple(sorted(merged.items())))

    @classmethod
    def of(cls, **exponents: int) -> "Monomial":
        return cls(exponents)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def exponent(self, var: str) -> int:
        for v, e in self:
            if v == var:
                return e
        return 0

    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self)

    def as_dict(self) -> dict[str, int]:
        return dict(self)

    def __mul__(self, other: "Monomial") -> "Monomial":  # type: ignore[override]
        if not other:
            return self
        if not self:
            return other
        return Monomial(tuple(self) + tuple(other))

    def without(self, var: str) -> "Monomial":
        return Monomial((v, e) for v, e in self if v != var)

    def sort_key(self):
        # higher powers of earlier variables first within a degree
        return (self.degree, tuple((v, -e) for v, e in self))

    def __repr__(self) -> str:
        return f"Monomial({dict(self)!r})"

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self)


ONE_MONOMIAL = Monomial()


class GradedPoly:
    """Sparse polynomial ``{Monomial: Fraction}`` with no zero coefficients.

    Instances are treated as immutable values.  ``+``, ``-`` and ``*`` are
    exact and untruncated; use :func:`poly_mul` for degree-capped products.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(m, Monomial):
                    m = Monomial(m)
                c = as_rational(c)
                if c:
                    clean[m] = clean.get(m, Fraction(0)) + c
                    if not clean[m]:
                        del clean[m]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "GradedPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "GradedPoly":
        return cls({ONE_MONOMIAL: c})

    @classmethod
    def var(cls, name: str, coeff: Scalar = 1) -> "GradedPoly":
        return cls({Monomial({name: 1}): coeff})

    @classmethod
    def monomial(cls, m: Monomial, coeff: Scalar = 1) -> "GradedPoly":
        return cls({m: coeff})

    @classmethod
    def coerce(cls, x: "GradedPoly | Scalar") -> "GradedPoly":
        if isinstance(x, GradedPoly):
            return x
        return cls.const(x)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        """Terms in deterministic order (by degree, then lexicographic)."""
        return sorted(self._terms.items(), key=lambda t: t[0].sort_key())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v in m.variables())

    def degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        return max((m.degree for m in self._terms), default=-1)

    def is_homogeneous(self, deg: int | None = None) -> bool:
        degs = {m.degree for m in self._terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return deg is None or degs == {deg}

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def homogeneous_part(self, deg: int) -> "GradedPoly":
        return GradedPoly._raw({m: c for m, c in self._terms.items() if m.degree == deg})

    def truncate(self, cap: int) -> "GradedPoly":
        return GradedPoly._raw({m: c for m, c in self._terms.items() if m.degree <= cap})

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = GradedPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return GradedPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = GradedPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return GradedPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return _mul(self, other, None)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "GradedPoly":
        if k < 0:
            raise ValueError("negative power")
        out = GradedPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, c: Scalar) -> "GradedPoly":
        c = as_rational(c)
        if not c:
            return GradedPoly()
        return GradedPoly._raw({m: c * v for m, v in self._terms.items()})

    def substitute(self, mapping: Mapping[str, "GradedPoly | Scalar"]) -> "GradedPoly":
        """Ring homomorphism sending each mapped variable to a polynomial."""
        images = {v: GradedPoly.coerce(p) for v, p in mapping.items()}
        out = GradedPoly()
        power_cache: dict[tuple[str, int], GradedPoly] = {}
        for m, c in self._terms.items():
            term = GradedPoly.const(c)
            kept = []
            for v, e in m:
                if v in images:
                    key = (v, e)
                    if key not in power_cache:
                        power_cache[key] = images[v] ** e
                    term = term * power_cache[key]
                else:
                    kept.append((v, e))
            if kept:
                term = term * GradedPoly.monomial(Monomial(kept))
            out = out + term
        return out

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GradedPoly.const(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"GradedPoly({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            mag = abs(c)
            if not m:
                body = str(mag)
            elif mag == 1:
                body = str(m)
            else:
                body = f"{mag}*{m}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _mul(p: GradedPoly, q: GradedPoly, cap: int | None) -> GradedPoly:
    out: dict[Monomial, Fraction] = {}
    qt = list(q._terms.items())
    for m1, c1 in p._terms.items():
        d1 = m1.degree
        for m2, c2 in qt:
            if cap is not None and d1 + m2.degree > cap:
                continue
            m = m1 * m2
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return GradedPoly._raw(out)


def poly_mul(p: GradedPoly, q: GradedPoly, cap: int) -> GradedPoly:
    """Product ``p*q`` with every term of total degree above ``cap`` dropped."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    return _mul(p, q, cap)


def series_inv(p: GradedPoly, cap: int) -> GradedPoly:
    """Inverse of ``p`` up to degree ``cap`` via the geometric series in ``1 - p``.

    ``p`` must have constant term exactly 1.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    if p.constant_term() != 1:
        raise ValueError(f"series_inv needs constant term 1, got {p.constant_term()}")
    u = (GradedPoly.const(1) - p).truncate(cap)
    result = GradedPoly.const(1)
    power = GradedPoly.const(1)
    # u has no constant term, so u^k lives in degree >= k
    for _ in range(cap):
        power = poly_mul(power, u, cap)
        if power.is_zero():
            break
        result = result + power
    return result


def coeff(p: GradedPoly, m: Monomial | Mapping[str, int]) -> Fraction:
    if not isinstance(m, Monomial):
        m = Monomial(m)
    return p._terms.get(m, Fraction(0))


def var(name: str) -> GradedPoly:
    return GradedPoly.var(name)


def variables(*names: str) -> tuple[GradedPoly, ...]:
    return tuple(GradedPoly.var(n) for n in names)


def const(c: Scalar) -> GradedPoly:
    return GradedPoly.const(c)


ZERO = GradedPoly()
ONE = GradedPoly.const(1)
