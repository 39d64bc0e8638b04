import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowkernel.blowup_calc import (
    BlowupContext,
    BlowupError,
    center_component,
    diagonal_blowup,
    exc_push,
    integrate_blowup,
    point_blowup,
)
from chowkernel.chow_ring import (
    hypersurface_context,
    integrate,
    make_product,
    make_projective_bundle,
    make_projective_space,
    point_context,
)
from chowkernel.exact_poly import GradedPoly, series_inv, var

from strategies import PROPERTY, homogeneous_polys

E = var("E")


def test_point_blowup_of_hypersurface():
    Y = hypersurface_context("h_Y", 4, 6)
    bl = point_blowup(Y)
    h = var("h_Y")
    assert integrate_blowup(bl, h ** 4) == 6
    assert integrate_blowup(bl, E ** 4) == -1
    assert integrate_blowup(bl, (h - E) ** 4) == 5
    assert integrate_blowup(bl, h * E ** 3) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lines_through_a_point_degree(n):
    # (h - E)^n counts the residual intersection: deg - 1
    bl = point_blowup(hypersurface_context("h", n, 7))
    assert integrate_blowup(bl, (var("h") - E) ** n) == 6
    assert integrate_blowup(bl, E ** n) == (-1) ** (n - 1)


def test_exc_push_formula():
    b = var("u")
    assert exc_push(0, b) == E * b
    assert exc_push(2, b) == E ** 3 * b
    assert exc_push(1, GradedPoly.const(1)) == -(E ** 2)
    with pytest.raises(BlowupError):
        exc_push(-1, b)


def test_center_component():
    X = hypersurface_context("h_X", 3, 5)
    bl = point_blowup(X)
    h = var("h_X")
    assert center_component(bl, E ** 3, 3) == 1
    assert center_component(bl, h ** 3 + h * E ** 2, 3) == 0
    assert center_component(bl, E ** 3 * -2 + h ** 2 * E, 3) == -2
    with pytest.raises(BlowupError):
        center_component(bl, E ** 2, 2)
    with pytest.raises(BlowupError):
        center_component(bl, E ** 3 + E, 3)


def test_missing_segre_class_is_an_error():
    # E^4 on Bl_diag(P^2 x P^2) needs s_2 of the tangent bundle
    bl = diagonal_blowup(make_projective_space(2, "u"), make_projective_space(2, "x"))
    with pytest.raises(BlowupError):
        integrate_blowup(bl, E ** 4)
    assert integrate_blowup(bl, var("u") ** 2 * E ** 2) == -1


def test_diagonal_blowup_self_intersection():
    # E^4 = -int zeta^3 = -s_2(T_P2) = -6
    u = var("u")
    segre = series_inv((1 + u) ** 3, 2)
    bl = diagonal_blowup(make_projective_space(2, "u"), make_projective_space(2, "x"),
                         segre=tuple(segre.homogeneous_part(j) for j in range(3)))
    assert integrate_blowup(bl, E ** 4) == -6
    assert integrate_blowup(bl, u * E ** 3) == -3


def test_blowup_validation():
    Y = hypersurface_context("h", 3, 2)
    with pytest.raises(BlowupError):
        BlowupContext(Y, point_context(), 2, {})
    with pytest.raises(BlowupError):
        BlowupContext(Y, point_context(), 3, {}, segre=(GradedPoly.const(2),))
    with pytest.raises(BlowupError):
        point_blowup(Y, exc_var="h")


# -- projection formula against an explicit model of the exceptional divisor --

def _point_setup(m):
    bl = point_blowup(make_projective_space(m, "H"))
    zeros = [GradedPoly()] * m
    return bl, make_projective_bundle(point_context(), zeros, "zeta")


def _diagonal_setup(k):
    # diagonal of P^k x P^k, normal bundle T_{P^k}: c(N) = (1+u)^(k+1)
    U = make_projective_space(k, "u")
    u = var("u")
    cN = ((1 + u) ** (k + 1)).truncate(k)
    segre = series_inv(cN, k)
    bl = diagonal_blowup(U, make_projective_space(k, "x"),
                         segre=tuple(segre.homogeneous_part(j) for j in range(k + 1)))
    # E = P(lines in N) = P(quotients of N^dual)
    dual = [cN.homogeneous_part(i).scale((-1) ** i) for i in range(1, k + 1)]
    return bl, make_projective_bundle(U, dual, "zeta")


SETUPS = {
    "pt2": _point_setup(2),
    "pt3": _point_setup(3),
    "diag2": _diagonal_setup(2),
    "diag3": _diagonal_setup(3),
}


@st.composite
def projection_instances(draw):
    name = draw(st.sampled_from(sorted(SETUPS)))
    bl, P = SETUPS[name]
    names = bl.base.variables
    dim = bl.dimension
    a = draw(st.integers(0, dim - 1))
    deg_beta = draw(st.integers(0, dim - 1 - a))
    rest = dim - (a + 1) - deg_beta
    k = draw(st.integers(0, rest))
    beta = draw(homogeneous_polys(names, deg_beta)) if deg_beta else GradedPoly.const(draw(st.integers(-3, 3)))
    gamma = draw(homogeneous_polys(names, rest - k)) if rest - k else GradedPoly.const(draw(st.integers(-3, 3)))
    return name, a, beta, gamma, k


@PROPERTY
@given(projection_instances())
def test_projection_formula(inst):
    name, a, beta, gamma, k = inst
    bl, P = SETUPS[name]
    zeta = var("zeta")
    lhs = integrate_blowup(bl, exc_push(a, beta) * gamma * E ** k)
    restricted = bl.restrict(beta * gamma)
    rhs = integrate(P, zeta ** a * (-zeta) ** k * restricted)
    assert lhs == rhs


@PROPERTY
@given(projection_instances())
def test_self_intersection_consistency(inst):
    name, a, beta, gamma, k = inst
    bl, _ = SETUPS[name]
    # E * j_*(zeta^a beta) = j_*(E|_E zeta^a beta) = -j_*(zeta^(a+1) beta)
    assert E * exc_push(a, beta) == -exc_push(a + 1, beta)
    if k >= 1:
        lhs = integrate_blowup(bl, E * exc_push(a, beta) * gamma * E ** (k - 1))
        rhs = -integrate_blowup(bl, exc_push(a + 1, beta) * gamma * E ** (k - 1))
        assert lhs == rhs


@PROPERTY
@given(st.sampled_from(sorted(SETUPS)), st.data())
def test_base_classes_integrate_as_on_base(name, data):
    bl, _ = SETUPS[name]
    p = data.draw(homogeneous_polys(bl.base.variables, bl.dimension))
    assert integrate_blowup(bl, p) == integrate(bl.base, p)


def test_product_base_restrictions():
    U = hypersurface_context("h_U", 1, 1)
    X = hypersurface_context("h_X", 3, 72)
    bl = diagonal_blowup(U, X)
    assert bl.codim == 3
    assert bl.restrict(var("h_X") * var("h_U")).is_zero()
    assert bl.restrict(var("h_X")) == var("h_U")
    assert make_product(U, X).dimension == bl.dimension
