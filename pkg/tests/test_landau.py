import pytest

from ncqm.landau import (
    REFERENCE_SIGMA, REFERENCE_TABLE, CanonicalMatchFailed, HallHamiltonian, LadderExpr,
    NotInLadderSpan, build_hall_hamiltonian, current_operator, express_in_ladder,
    expectation_number_state, hall_conductivity, hall_conductivity_from_current, is_hermitian,
    reconstruct_hamiltonian, render_entry, table1, to_canonical_landau,
)
from ncqm.realization import HALL_KINDS
from ncqm.scalars import ONE, ZERO, GradedOrder, expand_derived, sym
from ncqm.weyl import WeylExpr, mul

hbar, theta, e, c, B, E, m, rho_e = (sym(s) for s in
                                     ("hbar", "theta", "e", "c", "B", "E", "m", "rho_e"))
lam = sym("lambda")
FIELDS = ("gamma", "beta", "lambda_plus", "lambda_minus")


@pytest.fixture(scope="module")
def forms():
    out = {}
    for kind in HALL_KINDS:
        hh = build_hall_hamiltonian(kind)
        out[kind] = (hh, to_canonical_landau(hh))
    return out


@pytest.mark.parametrize("kind", HALL_KINDS)
@pytest.mark.parametrize("name", FIELDS)
def test_table_entries(forms, kind, name):
    form = forms[kind][1]
    assert expand_derived(form.as_dict()[name]) == expand_derived(REFERENCE_TABLE[kind][name])


@pytest.mark.parametrize("kind", HALL_KINDS)
def test_reconstruction_is_exact(forms, kind):
    hh, form = forms[kind]
    assert (reconstruct_hamiltonian(form) - hh.h).truncate(hh.order).is_zero()


@pytest.mark.parametrize("kind", HALL_KINDS)
def test_hermitian(forms, kind):
    assert is_hermitian(forms[kind][0])


@pytest.mark.parametrize("kind", HALL_KINDS)
def test_conductivity_routes_agree(forms, kind):
    hh, form = forms[kind]
    sigma = hall_conductivity(form)
    assert sigma == REFERENCE_SIGMA[kind]
    assert hall_conductivity_from_current(hh, form) == sigma


def test_conductivity_identities():
    sig = {kind: hall_conductivity(to_canonical_landau(build_hall_hamiltonian(kind)))
           for kind in HALL_KINDS}
    assert sig["hall_1"] == sig["hall_3"]
    assert sig["hall_2"] == -rho_e * e * c / B


@pytest.mark.parametrize("kind", HALL_KINDS)
def test_x_current_vanishes(forms, kind):
    hh, form = forms[kind]
    jx = express_in_ladder(current_operator(hh, 0), form)
    assert expectation_number_state(jx) == ZERO


def test_theta_zero_rows():
    for row in table1(theta_zero=True):
        d = row.form.as_dict()
        assert d["gamma"] == ONE and d["beta"] == ONE
        assert expand_derived(d["lambda_plus"]) == expand_derived(lam)
        assert expand_derived(d["lambda_minus"]) == expand_derived(lam)
        assert row.sigma == -rho_e * e * c / B


def test_commutator_of_ladders(forms):
    form = forms["hall_2"][1]
    assert expand_derived(form.comm_bb) == GradedOrder().truncate(
        expand_derived(2 * m * hbar * form.gamma * form.beta * sym("omega")))


def test_number_state_expectations():
    form = to_canonical_landau(build_hall_hamiltonian("hall_2"))
    n = sym("n")
    b_bd = LadderExpr({("b", "b+"): ONE}, form.comm_bb, form.order)
    # <n| b b+ |n> = (n + 1) [b, b+]
    assert expectation_number_state(b_bd) == form.order.truncate((n + 1) * form.comm_bb)


def test_render_entry():
    form = to_canonical_landau(build_hall_hamiltonian("hall_1"))
    assert render_entry(form.gamma) == "1 - 2*kappa"
    assert render_entry(form.gamma, expand=True) == "1 - 1/2*hbar^-1*theta*e*c^-1*B"


def test_cubic_hamiltonian_has_no_canonical_form():
    x = WeylExpr.coord(2, 0)
    h = build_hall_hamiltonian("hall_2")
    cubic = HallHamiltonian(h.h + mul(x, mul(x, x)), "hall_2", h.order)
    with pytest.raises(CanonicalMatchFailed):
        to_canonical_landau(cubic)


def test_operator_outside_ladder_span():
    form = to_canonical_landau(build_hall_hamiltonian("hall_2"))
    x = WeylExpr.coord(2, 0)
    with pytest.raises(NotInLadderSpan):
        express_in_ladder(mul(x, mul(x, x)), form)
