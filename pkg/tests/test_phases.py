import math

import numpy as np
import pytest

from ncqm.phases import (
    AB_VARIANTS, Contour, ContourIntersectsBoundary, DeformedGaugeField, ab_base_phase, ab_phase,
    anandan_phase, enclosed_area, gauge_identity_residual, invert_matrix, loop_phase_flux,
    loop_phase_numeric, star_shift_gauge_field, star_shift_phase,
)
from ncqm.scalars import I, ONE, GradedOrder, substitute_numeric, sym
from ncqm.weyl import symmetric_gauge

hbar, theta, e, c, B = (sym(s) for s in ("hbar", "theta", "e", "c", "B"))
mu, d, lam_e, lam_m, s1, s2 = (sym(s) for s in ("mu", "d", "lambda_e", "lambda_m", "s1", "s2"))
T1 = GradedOrder({"theta": 1})

AB_FACTORS = {
    "hall_1": 1 + e * theta * B / (2 * hbar * c),
    "hall_2": ONE,
    "gauge_invariant": 1 + e * theta * B / (hbar * c),
}
UNIT = {"hbar": 1.0, "e": 1.0, "c": 1.0, "B": 1.0, "m": 1.0}


@pytest.mark.parametrize("variant", sorted(AB_VARIANTS))
def test_ab_factor(variant):
    res, q, f = ab_phase(variant)
    assert res.factor == AB_FACTORS[variant]
    assert res.base_phase == ab_base_phase()
    assert res.absolute == T1.truncate(res.base_phase * AB_FACTORS[variant])
    assert all(r.is_zero() for r in gauge_identity_residual(q, f))


@pytest.mark.parametrize("variant", sorted(AB_VARIANTS))
def test_ab_theta_limit(variant):
    res, _, _ = ab_phase(variant, theta_zero=True)
    assert res.factor == ONE
    assert res.factor == ab_phase(variant)[0].factor.set_zero("theta")


def test_hall_3_alias():
    assert ab_phase("hall_3")[0].factor == ab_phase("gauge_invariant")[0].factor


@pytest.mark.parametrize("variant", sorted(AB_VARIANTS))
@pytest.mark.parametrize("th", [0.0, 1e-3])
def test_quadrature_matches_flux_form(variant, th):
    res, _, f = ab_phase(variant, solenoid_radius=1.0)
    values = dict(UNIT, theta=th)
    contour = Contour(radius=2.0, samples=10_000)
    area = enclosed_area(contour, 1.0)
    assert area == pytest.approx(math.pi)
    symbolic = substitute_numeric(res.absolute, dict(values, S=area))
    quad = loop_phase_numeric(f, contour, values)
    assert abs(quad - symbolic) / abs(symbolic) <= 1e-8


def test_contour_inside_solenoid_sees_partial_flux():
    res, _, f = ab_phase("hall_2", solenoid_radius=3.0)
    contour = Contour(radius=1.0, samples=2000)
    quad = loop_phase_numeric(f, contour, dict(UNIT, theta=0.0))
    assert quad == pytest.approx(substitute_numeric(res.absolute, dict(UNIT, theta=0.0, S=math.pi)))


def test_contour_crossing_boundary():
    _, _, f = ab_phase("hall_2", solenoid_radius=1.0)
    with pytest.raises(ContourIntersectsBoundary):
        loop_phase_numeric(f, Contour(center=(0.5, 0.0), radius=1.0), dict(UNIT, theta=0.0))


def test_contour_validation():
    with pytest.raises(ValueError):
        Contour(samples=4)
    with pytest.raises(ValueError):
        Contour(radius=-1.0)


def test_undeformed_field_gives_unit_factor():
    A = symmetric_gauge(2)
    res = loop_phase_flux(DeformedGaugeField(A.components), prefactor=I * (-e / c) / hbar)
    assert res.details["curl"] == "B"
    assert res.factor == ONE


def test_invert_matrix_round_trip():
    a = ((ONE - theta * e, theta * B), (-theta * B, ONE + theta * e))
    inv = invert_matrix(a, T1)
    for i in range(2):
        for j in range(2):
            entry = T1.truncate(sum((a[i][k] * inv[k][j] for k in range(2)), 0 * ONE))
            assert entry == (ONE if i == j else 0 * ONE)


def test_star_shift_factor_and_velocity_terms():
    res = star_shift_phase()
    assert res.factor == 1 + e * theta * B / (4 * hbar * c)
    assert all(v != "0" for v in res.details["velocity_dependent"])


def test_star_shift_against_direct_composition():
    """Evaluate A(r + delta(r)) numerically and compare with the symbolic shifted field."""
    A = symmetric_gauge(2)
    rho = -e / c
    f = star_shift_gauge_field(A, rho)
    rng = np.random.default_rng(7)
    vals = dict(UNIT, B=1.3, theta=1e-3, e=0.7)
    Bv, th, rv, hb = vals["B"], vals["theta"], -vals["e"] / vals["c"], vals["hbar"]

    def a_field(x, y):
        return np.array([-Bv * y / 2, Bv * x / 2])

    for _ in range(5):
        x, y, k1, k2 = rng.normal(size=4)
        kin = hb * np.array([k1, k2]) + rv * a_field(x, y)
        eps = np.array([[0.0, 1.0], [-1.0, 0.0]])
        delta = -(th / (2 * hb)) * eps @ kin
        direct = a_field(x + delta[0], y + delta[1])
        point = dict(vals, k1=k1, k2=k2)
        for a in range(2):
            got = sum(substitute_numeric(cf, point) * x ** rp[0] * y ** rp[1]
                      for (rp, _), cf in f.components[a].terms)
            assert got == pytest.approx(direct[a], rel=1e-12, abs=1e-14)


def test_anandan_family():
    res = anandan_phase("anandan")
    base = -(mu * lam_e - d * lam_m) / (hbar * c)
    assert res.base_phase == base
    assert res.absolute == T1.truncate(base * (1 + theta * (mu * lam_e / (hbar * c * s1)
                                                            - d * lam_m / (hbar * c * s2))))
    ac = anandan_phase("ac")
    assert ac.absolute == T1.truncate(d * lam_m / (hbar * c)
                                      * (1 - theta * d * lam_m / (hbar * c * s2)))
    hmw = anandan_phase("hmw")
    assert hmw.absolute == T1.truncate(-mu * lam_e / (hbar * c)
                                       * (1 + theta * mu * lam_e / (hbar * c * s1)))
    assert anandan_phase("anandan", theta_zero=True).absolute == base


def test_anandan_unknown_config():
    with pytest.raises(ValueError):
        anandan_phase("dirac")
