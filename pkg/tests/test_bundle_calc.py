import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from chowkernel.bundle_calc import (
    BundleClass,
    BundleError,
    LineClass,
    chern_part,
    ktheory_quotient,
    line,
    sym_rank2_split,
    top_chern_split,
    twist,
    whitney,
)
from chowkernel.exact_poly import GradedPoly, poly_mul, var

from strategies import PROPERTY, from_sympy, to_sympy, truncate_sympy

NAMES = ("x", "y")
x, y = var("x"), var("y")

line_classes = st.tuples(st.integers(-4, 4), st.integers(-4, 4)).map(
    lambda ab: line(x.scale(ab[0]) + y.scale(ab[1]))
)
split_bundles = st.lists(line_classes, max_size=4).map(BundleClass.from_lines)
caps = st.integers(0, 4)


def test_line_class_requires_degree_one():
    with pytest.raises(BundleError):
        LineClass(x * y)
    with pytest.raises(BundleError):
        line(1)
    assert str(line(x.scale(2) - y)) == "O(2*x - y)"


def test_sym_rank2_split_summands():
    s = sym_rank2_split(2, line(x), line(y))
    assert [str(l) for l in s.split] == ["O(2*y)", "O(x + y)", "O(2*x)"]
    assert sym_rank2_split(-1, line(x), line(y)).rank == 0
    with pytest.raises(BundleError):
        sym_rank2_split(-2, line(x), line(y))


def test_twist_needs_split():
    b = ktheory_quotient(BundleClass.from_lines([line(x)]), BundleClass.from_lines([line(y)]), 3)
    assert b.split is None and b.rank == 0
    with pytest.raises(BundleError):
        twist(b, line(x))
    with pytest.raises(BundleError):
        top_chern_split(b, 3)
    with pytest.raises(BundleError):
        ktheory_quotient(BundleClass.from_lines([line(x)]), BundleClass.from_lines([line(y)]), 3,
                         require_split=True)


def test_chern_beyond_cap_is_an_error():
    b = whitney([BundleClass.from_lines([line(x), line(y)])], cap=1)
    assert b.chern(1) == x + y
    with pytest.raises(BundleError):
        b.chern(2)
    with pytest.raises(BundleError):
        chern_part(b, 3, 2)


def test_excess_examples():
    # N_X = O(12h) + O(2h) + O(3h) divided by O(h_X - h_Y)
    hX, hY = var("h_X"), var("h_Y")
    N = BundleClass.from_lines([line(hX.scale(k)) for k in (12, 2, 3)])
    exc = ktheory_quotient(N, BundleClass.from_lines([line(hX - hY)]), 7)
    assert exc.chern(2) == hX ** 2 * 50 + hX * hY * 15 + hY ** 2
    h1, h2 = var("h1"), var("h2")
    NY = BundleClass.from_lines([line(h1.scale(2)), line(h1.scale(3))])
    exc2 = ktheory_quotient(NY, BundleClass.from_lines([line(h1 - h2)]), 6)
    assert exc2.chern(1) == h1.scale(4) + h2


def test_degenerate_excess_substitution():
    # with h_X = h_Y the denominator is trivial and c_r is that of N itself
    h = var("h")
    N = BundleClass.from_lines([line(h.scale(k)) for k in (10, 3, 3)])
    exc = ktheory_quotient(N, BundleClass.from_lines([line(h - h)]), 3)
    assert exc.chern(2) == N.chern(2)


def test_split_difference_preserves_order():
    big = BundleClass.from_lines([line(x), line(y), line(x + y), line(x)])
    small = BundleClass.from_lines([line(x), line(y)])
    q = ktheory_quotient(big, small, 4, require_split=True)
    assert [str(l) for l in q.split] == ["O(x)", "O(x + y)"]


@PROPERTY
@given(st.lists(split_bundles, min_size=1, max_size=3), caps)
def test_whitney_multiplicativity(parts, cap):
    total = whitney(parts, cap)
    expected = GradedPoly.const(1)
    for p in parts:
        expected = poly_mul(expected, p.total_chern, cap)
    assert total.total_chern == expected
    assert total.rank == sum(p.rank for p in parts)
    assert total.split == tuple(l for p in parts for l in p.split)


@PROPERTY
@given(split_bundles, split_bundles, caps)
def test_ktheory_quotient_inverts_whitney(a, b, cap):
    q = ktheory_quotient(whitney([a, b]), b, cap, require_split=True)
    assert q.rank == a.rank
    assert q.total_chern == a.total_chern.truncate(cap)
    assert sorted(map(str, q.split)) == sorted(map(str, a.split))
    # and the quotient class times the denominator recovers the numerator
    back = whitney([q, b], cap)
    assert back.total_chern == whitney([a, b]).total_chern.truncate(cap)


@PROPERTY
@given(split_bundles, split_bundles, caps)
def test_ktheory_quotient_matches_sympy_expansion(a, b, cap):
    # invert each line factor of c(b) by its own geometric series
    num = to_sympy(a.total_chern)
    for l in b.split:
        root = to_sympy(l.divisor)
        num *= sum((-root) ** k for k in range(cap + 1))
    q = ktheory_quotient(a, b, cap)
    assert q.total_chern == from_sympy(truncate_sympy(num, NAMES, cap), NAMES)


@PROPERTY
@given(st.integers(-1, 6), line_classes, line_classes, caps)
def test_sym_rank2_total_chern_matches_sympy(k, l1, l2, cap):
    s = sym_rank2_split(k, l1, l2, cap)
    a, b = to_sympy(l1.divisor), to_sympy(l2.divisor)
    expected = sympy.prod([1 + i * a + (k - i) * b for i in range(k + 1)])
    assert s.rank == k + 1
    assert s.total_chern == from_sympy(truncate_sympy(expected, NAMES, cap), NAMES)


@PROPERTY
@given(split_bundles, line_classes)
def test_twist_shifts_chern_roots(b, l):
    t = twist(b, l)
    expected = GradedPoly.const(1)
    for s in b.split:
        expected = expected * (1 + s.divisor + l.divisor)
    assert t.total_chern == expected


@PROPERTY
@given(split_bundles, caps)
def test_top_chern_of_split_is_top_part(b, cap):
    top = top_chern_split(b, cap)
    if b.rank <= cap:
        assert top == b.chern(b.rank)
    else:
        assert top.is_zero()
