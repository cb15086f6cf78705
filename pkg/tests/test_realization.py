import dataclasses

import pytest

from ncqm.fielddsl import parse_field
from ncqm.realization import (
    HALL_KINDS, KINDS, ConditionsViolated, ConfigError, build_realization, check_conditions,
    default_order, jacobi_residual, verify_algebra, verify_jacobi, verify_regions,
)
from ncqm.scalars import I, GradedOrder, sym
from ncqm.weyl import WeylExpr, commutator, solenoid_field, symmetric_gauge

hbar, theta, e, c, B = (sym(s) for s in ("hbar", "theta", "e", "c", "B"))


@pytest.mark.parametrize("kind", KINDS)
def test_algebra_and_jacobi_exact(kind):
    r = build_realization(kind)
    alg = verify_algebra(r)
    jac = verify_jacobi(r)
    assert alg.passed and jac.passed
    assert all(chk.residual.is_zero() for chk in alg.relations + jac.jacobi)
    assert len(jac.jacobi) == 4


@pytest.mark.parametrize("kind", ["general_r1r2", "gauge_invariant"])
def test_three_dimensional_field(kind):
    r = build_realization(kind, symmetric_gauge(3))
    assert verify_algebra(r).passed
    assert verify_jacobi(r).passed


@pytest.mark.parametrize("kind", KINDS)
def test_theta_zero_gives_minimal_coupling(kind):
    r = build_realization(kind).set_zero("theta")
    A = symmetric_gauge(2)
    for a in range(2):
        assert r.r_hat[a] == WeylExpr.coord(2, a)
        assert r.p_hat[a] == WeylExpr.momentum(2, a) - A.components[a].scale(r.coupling)


@pytest.mark.parametrize("kind,keep", [("hall_1", False), ("hall_2", True)])
def test_hall_equals_general_construction(kind, keep):
    explicit = build_realization(kind)
    general = build_realization("general_r1r2", symmetric_gauge(2),
                                keep_second_order_coupling=keep, coupling=-e / c)
    assert explicit.r_hat == general.r_hat
    assert explicit.p_hat == general.p_hat


def test_hall_3_equals_gauge_invariant_construction():
    explicit = build_realization("hall_3")
    general = build_realization("gauge_invariant", symmetric_gauge(2), coupling=-e / c)
    assert explicit.r_hat == general.r_hat
    assert explicit.p_hat == general.p_hat


def test_hall_1_momentum_and_hall_3_position():
    r1 = build_realization("hall_1")
    px = WeylExpr.momentum(2, 0)
    y = WeylExpr.coord(2, 1)
    assert r1.p_hat[0] == px.scale(1 - e * theta * B / (2 * hbar * c)) - y.scale(e * B / (2 * c))
    r3 = build_realization("hall_3")
    py = WeylExpr.momentum(2, 1)
    x = WeylExpr.coord(2, 0)
    assert r3.r_hat[0] == x.scale(1 + e * theta * B / (4 * hbar * c)) - py.scale(theta / (2 * hbar))


def test_hall_1_commutators_match_published_algebra():
    r = build_realization("hall_1")
    assert commutator(r.r_hat[0], r.r_hat[1], r.order).constant() == I * theta
    pp = commutator(r.p_hat[0], r.p_hat[1], r.order).truncate(r.order)
    published = -(I * e * B * hbar / c) * (1 - e * B * theta / (hbar * c))
    assert pp.constant() == r.order.truncate(published)


def test_mutation_is_caught():
    r = build_realization("hall_2")
    flipped = r.p_hat[0] - WeylExpr.coord(2, 1).scale(e * B / c)   # sign of the gauge term
    bad = dataclasses.replace(r, p_hat=(flipped, r.p_hat[1]))
    rep = verify_algebra(bad)
    assert not rep.passed
    failing = {chk.name for chk in rep.relations if not chk.passed}
    assert "[p_x,p_y]" in failing


def test_jacobi_triples_named_in_spec():
    r2 = build_realization("hall_2")
    assert jacobi_residual(r2.r_hat[0], r2.r_hat[1], r2.p_hat[0], r2.order).is_zero()
    r3 = build_realization("hall_3")
    assert jacobi_residual(r3.p_hat[0], r3.p_hat[1], r3.r_hat[0], r3.order).is_zero()


def test_conditions():
    assert check_conditions(symmetric_gauge(2)).passed
    sol = check_conditions(solenoid_field())
    assert sol.passed and sol.excluded == "|r| = R_s"
    assert not check_conditions(parse_field(["0", "B*x^2/2"])).passed


def test_nonconstant_field_is_rejected():
    with pytest.raises(ConditionsViolated):
        build_realization("general_r1r2", parse_field(["0", "B*x^2/2"]))


@pytest.mark.parametrize("kind", ["general_r1r2", "gauge_invariant"])
def test_solenoid_regions(kind):
    reports = verify_regions(kind, solenoid_field())
    assert [name for name, _ in reports] == ["inside", "outside"]
    assert all(rep.passed for _, rep in reports)


def test_contradictory_grading_flags():
    with pytest.raises(ConfigError):
        build_realization("hall_1", keep_second_order_coupling=True)
    with pytest.raises(ConfigError):
        build_realization("hall_2", keep_second_order_coupling=False)


def test_grading_policy_per_kind():
    assert build_realization("hall_1").order == default_order(False)
    for kind in ("hall_2", "hall_3"):
        assert build_realization(kind).order == GradedOrder({"theta": 1})
    assert set(HALL_KINDS) < set(KINDS)
