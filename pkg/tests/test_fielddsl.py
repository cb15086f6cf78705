import pytest

from ncqm.fielddsl import (
    NonPolynomialCoordinateUse, ParseError, UnknownSymbol, parse_expr, parse_field, parse_scalar,
)
from ncqm.scalars import I, ONE, sym
from ncqm.weyl import WeylExpr, mul, symmetric_gauge

B, e, c, hbar, theta = (sym(s) for s in ("B", "e", "c", "hbar", "theta"))
x, y = WeylExpr.coord(2, 0), WeylExpr.coord(2, 1)


def test_symmetric_gauge_text():
    f = parse_field("-(B/2)*y\n(B/2)*x")
    assert f.components == symmetric_gauge(2).components
    assert f.constant_field_strength()[0][1] == B


def test_opposite_orientation_flips_field():
    f = parse_field(["(B/2)*y", "-(B/2)*x"])
    assert f.constant_field_strength()[0][1] == -B


def test_quadratic_field_strength_is_linear():
    f = parse_field(["B*x*y", "0"])
    assert not f.is_constant()
    assert f.field_strength[0][1] == x.scale(-B)


@pytest.mark.parametrize("text,expected", [
    ("2*x^2 - x*y/3", mul(x, x).scale(2 * ONE) - mul(x, y).scale(ONE / 3)),
    ("(e*B/c)^2 * y", y.scale((e * B / c) ** 2)),
    ("-(1/2)*i*theta*x", x.scale(-I * theta / 2)),
    ("hbar^-1*x", x.scale(ONE / hbar)),
    ("0.5*x", x.scale(ONE / 2)),
])
def test_expressions(text, expected):
    assert parse_expr(text) == expected


@pytest.mark.parametrize("text,err", [
    ("B/x", NonPolynomialCoordinateUse),
    ("B/(1 + x)", NonPolynomialCoordinateUse),
    ("x^-2", NonPolynomialCoordinateUse),
    ("foo*x", UnknownSymbol),
    ("(B*x", ParseError),
    ("B**x", ParseError),
    ("B $ x", ParseError),
    ("x^y", ParseError),
    ("B/(B + e)", ParseError),
    ("", ParseError),
])
def test_errors(text, err):
    with pytest.raises(err):
        parse_expr(text)


def test_error_position():
    with pytest.raises(UnknownSymbol) as info:
        parse_field(["B*y", "B * bogus"])
    assert (info.value.line, info.value.col) == (2, 5)


def test_component_count_and_dimension():
    with pytest.raises(ParseError):
        parse_field(["z", "0"])
    f = parse_field(["-(B/2)*y", "(B/2)*x", "0"])
    assert f.dim == 3


def test_scalar_text():
    assert parse_scalar("1 - 2*kappa") == 1 - 2 * sym("kappa")
    assert parse_scalar("(1/2 - 3*i)*hbar^-2") == (ONE / 2 - 3 * I) / (hbar * hbar)
    with pytest.raises(NonPolynomialCoordinateUse):
        parse_scalar("B*x")
