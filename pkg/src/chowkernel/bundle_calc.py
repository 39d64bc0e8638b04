"""Formal vector bundles: rank, total Chern class and, when split, the line summands."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exact_poly import GradedPoly, Scalar, poly_mul, series_inv


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class LineClass:
    """First Chern class of a line bundle, a degree-one polynomial (or 0)."""

    divisor: GradedPoly

    def __post_init__(self):
        d = GradedPoly.coerce(self.divisor)
        if not d.is_homogeneous(1):
            raise BundleError(f"line class must be homogeneous of degree 1, got {d}")
        object.__setattr__(self, "divisor", d)

    @classmethod
    def zero(cls) -> "LineClass":
        return cls(GradedPoly())

    def __add__(self, other: "LineClass") -> "LineClass":
        return LineClass(self.divisor + other.divisor)

    def __sub__(self, other: "LineClass") -> "LineClass":
        return LineClass(self.divisor - other.divisor)

    def __neg__(self) -> "LineClass":
        return LineClass(-self.divisor)

    def __mul__(self, k: Scalar) -> "LineClass":
        return LineClass(self.divisor.scale(k))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"O({self.divisor})"


def line(divisor: GradedPoly | Scalar) -> LineClass:
    return LineClass(GradedPoly.coerce(divisor))


@dataclass(frozen=True)
class BundleClass:
    """A bundle or K-theory class.

    ``cap`` is the degree at which ``total_chern`` was truncated; ``None``
    means the total Chern class is exact (always the case for split
    bundles built without a cap).
    """

    rank: int
    total_chern: GradedPoly
    split: tuple[LineClass, ...] | None = None
    cap: int | None = None

    def __post_init__(self):
        if self.total_chern.constant_term() != 1:
            raise BundleError("total Chern class must have constant term 1")
        if self.split is not None and len(self.split) != self.rank:
            raise BundleError("rank does not match the number of split summands")

    @classmethod
    def from_lines(cls, lines: Iterable[LineClass], cap: int | None = None) -> "BundleClass":
        lines = tuple(lines)
        return cls(len(lines), _product_of_lines(lines, cap), lines, cap)

    @classmethod
    def trivial(cls, rank: int) -> "BundleClass":
        return cls.from_lines([LineClass.zero()] * rank)

    def chern(self, j: int) -> GradedPoly:
        if self.cap is not None and j > self.cap:
            raise BundleError(f"c_{j} requested beyond truncation degree {self.cap}")
        return self.total_chern.homogeneous_part(j)

    def __str__(self) -> str:
        if self.split is not None:
            return " + ".join(str(l) for l in self.split) or "0"
        return f"[rank {self.rank}, c = {self.total_chern}]"


def _product_of_lines(lines: Sequence[LineClass], cap: int | None) -> GradedPoly:
    out = GradedPoly.const(1)
    for l in lines:
        f = 1 + l.divisor
        out = out * f if cap is None else poly_mul(out, f, cap)
    return out


def _min_cap(*caps: int | None) -> int | None:
    present = [c for c in caps if c is not None]
    return min(present) if present else None


def whitney(parts: Sequence[BundleClass], cap: int | None = None) -> BundleClass:
    """Direct sum; the split form survives when every part is split."""
    cap = _min_cap(cap, *(p.cap for p in parts))
    total = GradedPoly.const(1)
    for p in parts:
        total = p.total_chern * total if cap is None else poly_mul(total, p.total_chern, cap)
    split = None
    if all(p.split is not None for p in parts):
        split = tuple(l for p in parts for l in p.split)
    return BundleClass(sum(p.rank for p in parts), total, split, cap)


def sym_rank2_split(k: int, l1: LineClass, l2: LineClass, cap: int | None = None) -> BundleClass:
    """``Sym^k(L1 + L2)`` as the sum of ``i*l1 + (k-i)*l2``; ``k = -1`` gives 0."""
    if k < -1:
        raise BundleError(f"Sym^{k} is undefined (k must be >= -1)")
    return BundleClass.from_lines([l1 * i + l2 * (k - i) for i in range(k + 1)], cap)


def twist(b: BundleClass, l: LineClass) -> BundleClass:
    if b.split is None:
        raise BundleError("only split bundles can be twisted")
    return BundleClass.from_lines([s + l for s in b.split], b.cap)


def ktheory_quotient(
    e_big: BundleClass,
    e_small: BundleClass,
    cap: int,
    require_split: bool = False,
) -> BundleClass:
    """The class ``e_big - e_small``.

    The split form is kept when the summands of ``e_small`` form a
    sub-multiset of those of ``e_big``; ``require_split`` makes any other
    outcome an error.
    """
    cap = _min_cap(cap, e_big.cap, e_small.cap)
    total = poly_mul(e_big.total_chern, series_inv(e_small.total_chern, cap), cap)
    split = None
    if e_big.split is not None and e_small.split is not None:
        big, small = Counter(e_big.split), Counter(e_small.split)
        if not small - big:
            rest = big - small
            # keep the summands in the order they occur in e_big
            split = []
            for l in e_big.split:
                if rest[l]:
                    split.append(l)
                    rest[l] -= 1
            split = tuple(split)
    if require_split and split is None:
        raise BundleError("subtracted bundle is not a sub-sum of the split summands")
    return BundleClass(e_big.rank - e_small.rank, total, split, cap)


def top_chern_split(b: BundleClass, cap: int) -> GradedPoly:
    if b.split is None:
        raise BundleError("top Chern class needs a split bundle")
    if b.rank < 0:
        raise BundleError("top Chern class of a negative-rank virtual bundle")
    out = GradedPoly.const(1)
    for l in b.split:
        out = poly_mul(out, l.divisor, cap)
    return out


def chern_part(b: BundleClass, j: int, cap: int) -> GradedPoly:
    if not 0 <= j <= cap:
        raise BundleError(f"need 0 <= j <= cap, got j={j}, cap={cap}")
    return b.chern(j)
