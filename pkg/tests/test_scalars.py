from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncqm.scalars import (
    DERIVED, I, ONE, ZERO, GaussianRational, GradedOrder, NotPerfectSquareLeading,
    NotPerturbativelyInvertible, Scalar, UnboundSymbol, const, contract_derived,
    expand_derived, perturbative_sqrt, reciprocal, substitute_numeric, sym,
)
from ncqm.fielddsl import parse_scalar

hbar, theta, e, c, B, E, m = (sym(s) for s in ("hbar", "theta", "e", "c", "B", "E", "m"))
kappa, lam, omega = sym("kappa"), sym("lambda"), sym("omega")
T1 = GradedOrder({"theta": 1})

_syms = st.sampled_from(["hbar", "e", "c", "B", "m", "E"])


@st.composite
def scalars(draw, max_terms=4):
    out = ZERO
    for _ in range(draw(st.integers(0, max_terms))):
        coeff = GaussianRational(Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4))),
                                 draw(st.integers(-2, 2)))
        mono = {draw(_syms): draw(st.integers(-2, 2)) for _ in range(draw(st.integers(0, 2)))}
        t = draw(st.integers(0, 2))
        if t:
            mono["theta"] = t
        out = out + Scalar({tuple(sorted(mono.items())): coeff})
    return out


@st.composite
def units(draw):
    """``1 + theta * s``: invertible at first order with a theta-free leading 1."""
    return ONE + theta * draw(scalars(max_terms=3)).set_zero("theta")


def test_ring_examples():
    assert T1.truncate((1 - 2 * kappa) * (1 + 2 * kappa)) == ONE
    assert (theta - theta) == ZERO
    assert str(1 - 2 * kappa) == "1 - 2*kappa"
    assert str(-I * hbar) == "-i*hbar"
    assert expand_derived(kappa * lam) == e * m * E * theta / (4 * hbar)


@pytest.mark.parametrize("name,value", [
    ("kappa", e * theta * B / (4 * hbar * c)),
    ("omega", e * B / (m * c)),
    ("lambda", m * c * E / B),
])
def test_expand_derived(name, value):
    assert expand_derived(sym(name)) == value
    assert DERIVED[name] == value


def test_expand_leaves_primitive_scalars():
    s = 3 * e * B - I * hbar / c
    assert expand_derived(s) == s


def test_contract_round_trip():
    s = 1 - e * theta * B / (2 * hbar * c)
    assert contract_derived(s) == 1 - 2 * kappa
    assert expand_derived(contract_derived(s)) == s


def test_kappa_counts_as_theta_degree_one():
    assert T1.truncate(kappa * kappa) == ZERO
    assert T1.truncate(kappa * theta) == ZERO
    assert T1.truncate(kappa * lam) == kappa * lam


def test_joint_cap_drops_e2_theta():
    o = GradedOrder({"theta": 1}, [({"e", "rho", "theta"}, 2)])
    s = e * theta + e * e * theta + e * e
    assert o.truncate(s) == e * theta + e * e
    assert o.without_joint().truncate(s) == s


@pytest.mark.parametrize("s,expected", [
    (1 - 2 * kappa, 1 + 2 * kappa),
    ((1 - e * B * theta / (2 * hbar * c)) ** 2 / (2 * m), 2 * m * (1 + e * B * theta / (hbar * c))),
])
def test_reciprocal_examples(s, expected):
    inv = reciprocal(s, T1)
    assert inv == expected
    assert T1.truncate(inv * s) == ONE


def test_reciprocal_needs_single_leading_term():
    # kappa carries theta, so kappa + lambda has a dominant term; two theta-free terms do not
    with pytest.raises(NotPerturbativelyInvertible):
        reciprocal(lam + m, T1)
    with pytest.raises(NotPerturbativelyInvertible):
        reciprocal(theta, T1)


def test_reciprocal_of_kappa_plus_lambda_is_series_in_kappa():
    inv = reciprocal(kappa + lam, T1)
    assert T1.truncate(inv * (kappa + lam)) == ONE


@pytest.mark.parametrize("s,expected", [
    ((1 - 2 * kappa) ** 2, 1 - 2 * kappa),
    (1 - 8 * kappa, 1 - 4 * kappa),
    (4 * m * m * (1 + theta), 2 * m * (1 + theta / 2)),
])
def test_sqrt_examples(s, expected):
    root = perturbative_sqrt(s, T1)
    assert root == expected
    assert T1.truncate(root * root) == T1.truncate(s)


def test_sqrt_rejects_non_square_leading():
    with pytest.raises((NotPerfectSquareLeading, NotPerturbativelyInvertible)):
        perturbative_sqrt(e * theta, T1)
    with pytest.raises(NotPerfectSquareLeading):
        perturbative_sqrt(2 * e, T1)


def test_substitute_numeric():
    vals = {"e": 1, "c": 1, "hbar": 1, "B": 1, "theta": 0.01}
    assert substitute_numeric(1 - e * theta * B / (2 * hbar * c), vals) == pytest.approx(0.995)
    assert substitute_numeric(kappa, dict(vals, theta=0.02)) == pytest.approx(0.005)
    with pytest.raises(UnboundSymbol):
        substitute_numeric(m * e, vals)


def test_division_by_sum_is_rejected():
    with pytest.raises(ValueError):
        ONE / (e + B)


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, s):
    assert (a + b) + s == a + (b + s)
    assert (a * b) * s == a * (b * s)
    assert a * b == b * a
    assert a * (b + s) == a * b + a * s
    assert a - a == ZERO
    assert a * ONE == a


@given(scalars(), scalars())
def test_truncation_properties(a, b):
    t = T1.truncate
    assert t(t(a)) == t(a)
    assert t(a + b) == t(a) + t(b)
    assert t(a * b) == t(t(a) * t(b))


@given(scalars())
def test_conjugate_is_involution(a):
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()).conjugate() == a * a.conjugate()


@settings(max_examples=60)
@given(units(), st.sampled_from([1, 4, 9, Fraction(1, 4)]))
def test_reciprocal_and_sqrt_round_trip(u, k):
    inv = reciprocal(u, T1)
    assert T1.truncate(inv * u) == ONE
    root = perturbative_sqrt(k * u, T1)
    assert T1.truncate(root * root) == T1.truncate(k * u)


@given(scalars())
def test_rendering_parses_back(a):
    assert parse_scalar(str(a)) == a


def test_gaussian_rational_arithmetic():
    z = GaussianRational(Fraction(1, 2), 3)
    assert z * z.inverse() == GaussianRational(1)
    assert complex(z) == 0.5 + 3j
    assert const(0, 1) == I
