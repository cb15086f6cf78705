import pytest
from hypothesis import given, settings, strategies as st

from ncqm.scalars import I, ONE, GradedOrder, const, sym
from ncqm.weyl import (
    DimensionMismatch, WeylExpr, adjoint, apply_to, classicalize, commutator, mul,
    normal_order, symmetric_gauge,
)

hbar = sym("hbar")
x, y = WeylExpr.coord(2, 0), WeylExpr.coord(2, 1)
dx, dy = WeylExpr.deriv(2, 0), WeylExpr.deriv(2, 1)
px = WeylExpr.momentum(2, 0)


def one(dim=2):
    return WeylExpr.scalar(dim, ONE)


def test_defining_rewrite():
    assert mul(dx, x) == mul(x, dx) + one()
    assert mul(dx, mul(x, x)) == mul(mul(x, x), dx) + x.scale(const(2))
    assert str(mul(x, dx)) == "x*d_x"


def test_hand_ordered_product():
    got = mul(mul(x, dy), mul(y, dx))
    assert got == normal_order([("r", 0), ("r", 1), ("d", 0), ("d", 1)], 2) + mul(x, dx)


def test_identity_and_canonical_pair():
    assert mul(one(), px) == px
    assert commutator(px, x) == WeylExpr.scalar(2, -I * hbar)
    assert commutator(x, x).is_zero()


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mul(x, WeylExpr.coord(3, 0))
    with pytest.raises(DimensionMismatch):
        normal_order([("r", 2)], 2)


@pytest.mark.parametrize("expr,r_pow,p_pow", [
    (px, (0, 0), (1, 0)),
    (mul(x, px), (1, 0), (1, 0)),
    (mul(px, px), (0, 0), (2, 0)),
])
def test_classicalize(expr, r_pow, p_pow):
    cl = classicalize(expr)
    assert cl.coefficient(r_pow, p_pow) == ONE
    assert len(cl.terms) == 1


def test_action_on_test_polynomial():
    x3 = mul(x, mul(x, x))
    # (d_x x^2) acting on x^3 is d_x(x^5) = 5 x^4
    op = mul(dx, mul(x, x))
    assert apply_to(op, x3) == normal_order([("r", 0)] * 4, 2).scale(const(5))


def test_adjoint_of_momentum_and_position():
    assert adjoint(px) == px
    assert adjoint(mul(x, px)) == mul(px, x)


def test_symmetric_gauge_field_strength():
    A = symmetric_gauge(2)
    F = A.constant_field_strength()
    assert F[0][1] == sym("B")
    assert F[1][0] == -sym("B")


_gens = st.sampled_from([x, y, dx, dy, WeylExpr.scalar(2, sym("e")), WeylExpr.scalar(2, I)])


@st.composite
def weyl_exprs(draw, max_degree=3):
    out = WeylExpr.zero(2)
    for _ in range(draw(st.integers(1, 3))):
        term = WeylExpr.scalar(2, const(draw(st.integers(-3, 3))))
        for g in draw(st.lists(_gens, max_size=max_degree)):
            term = mul(term, g)
        out = out + term
    return out


@settings(max_examples=40, deadline=None)
@given(weyl_exprs(), weyl_exprs(), weyl_exprs())
def test_associativity(a, b, c):
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


@settings(max_examples=40, deadline=None)
@given(weyl_exprs(), weyl_exprs(), weyl_exprs())
def test_jacobi_identity(a, b, c):
    total = (commutator(a, commutator(b, c)) + commutator(b, commutator(c, a))
             + commutator(c, commutator(a, b)))
    assert total.is_zero()


@settings(max_examples=30, deadline=None)
@given(weyl_exprs(), weyl_exprs())
def test_truncated_product_matches_truncated_full_product(a, b):
    o = GradedOrder({"e": 1})
    assert mul(a, b, o).truncate(o) == mul(a, b).truncate(o)


@settings(max_examples=30, deadline=None)
@given(weyl_exprs(), weyl_exprs())
def test_adjoint_reverses_products(a, b):
    assert adjoint(mul(a, b)) == mul(adjoint(b), adjoint(a))
