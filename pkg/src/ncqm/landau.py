"""Deformed Hall Hamiltonians, their ladder form, currents and conductivity."""

from __future__ import annotations

from dataclasses import dataclass

from .realization import HALL_KINDS, Realization, build_realization
from .scalars import (
    I, ONE, ZERO, GradedOrder, Scalar, ScalarError, contract_derived, expand_derived,
    perturbative_sqrt, reciprocal, sym,
)
from .weyl import WeylExpr, adjoint, classicalize, commutator, mul

__all__ = [
    "CanonicalMatchFailed",
    "NotInLadderSpan",
    "NotLinearInField",
    "HallHamiltonian",
    "CanonicalLandauForm",
    "LadderExpr",
    "REFERENCE_TABLE",
    "build_hall_hamiltonian",
    "to_canonical_landau",
    "ladder_operators",
    "reconstruct_hamiltonian",
    "current_operator",
    "express_in_ladder",
    "expectation_number_state",
    "hall_conductivity",
    "hall_conductivity_from_current",
    "is_hermitian",
    "table1",
]


class CanonicalMatchFailed(ValueError):
    pass


class NotInLadderSpan(ValueError):
    pass


class NotLinearInField(ValueError):
    pass


e, c, B, hbar, m, E, theta = (sym(s) for s in ("e", "c", "B", "hbar", "m", "E", "theta"))
kappa, lam, rho_e = sym("kappa"), sym("lambda"), sym("rho_e")

#: Published coefficients per Hamiltonian, written in kappa and lambda.
REFERENCE_TABLE = {
    "hall_1": {
        "gamma": 1 - 2 * kappa,
        "beta": ONE,
        "lambda_plus": (1 - kappa) * lam + e * m * E * theta / (4 * hbar),
        "lambda_minus": (1 - kappa) * lam - e * m * E * theta / (4 * hbar),
    },
    "hall_2": {
        "gamma": 1 - 2 * kappa,
        "beta": 1 - 2 * kappa,
        "lambda_plus": (1 + 2 * kappa) * lam,
        "lambda_minus": lam,
    },
    "hall_3": {
        "gamma": 1 - 4 * kappa,
        "beta": ONE,
        "lambda_plus": (1 + kappa) * lam + e * m * E * theta / (4 * hbar),
        "lambda_minus": (1 + kappa) * lam - e * m * E * theta / (4 * hbar),
    },
}

#: Published conductivities.
REFERENCE_SIGMA = {
    "hall_1": -(rho_e * e * c / B) * (1 - e * theta * B / (2 * hbar * c)),
    "hall_2": -(rho_e * e * c / B),
    "hall_3": -(rho_e * e * c / B) * (1 - e * theta * B / (2 * hbar * c)),
}
__all__.append("REFERENCE_SIGMA")

_ORDER = GradedOrder({"theta": 1})


@dataclass(frozen=True)
class HallHamiltonian:
    h: WeylExpr
    source_kind: str
    order: GradedOrder = _ORDER


@dataclass(frozen=True)
class CanonicalLandauForm:
    gamma: Scalar
    beta: Scalar
    lambda_plus: Scalar
    lambda_minus: Scalar
    order: GradedOrder = _ORDER

    @property
    def k(self) -> Scalar:
        """Coefficient ``(eB/2c) * beta`` of the coordinates inside ``b``."""
        return e * B / (2 * c) * self.beta

    @property
    def comm_bb(self) -> Scalar:
        """``[b, b^dagger] = 2 m hbar gamma beta omega``."""
        return self.order.truncate(2 * m * hbar * self.gamma * self.beta * sym("omega"))

    def as_dict(self):
        return {"gamma": self.gamma, "beta": self.beta,
                "lambda_plus": self.lambda_plus, "lambda_minus": self.lambda_minus}

    def set_zero(self, symbol):
        return CanonicalLandauForm(*(v.set_zero(symbol) for v in self.as_dict().values()),
                                   order=self.order)


def build_hall_hamiltonian(r: Realization | str, theta_zero: bool = False) -> HallHamiltonian:
    """``H = p_i p_i / 2m + e E x``, E along x.

    Products are truncated at first order in theta only; a joint coupling
    cap of the realization governs its own construction, not the Hamiltonian.
    """
    if isinstance(r, str):
        r = build_realization(r)
    if r.kind not in HALL_KINDS:
        raise ValueError(f"{r.kind} is not a Hall realization")
    if theta_zero:
        r = r.set_zero("theta")
    order = r.order.without_joint()
    h = WeylExpr.zero(2)
    for p in r.p_hat:
        h = h + mul(p, p, order)
    h = h.scale(1 / (2 * m)) + r.r_hat[0].scale(e * E)
    return HallHamiltonian(h.truncate(order), r.kind, order)


def is_hermitian(h: HallHamiltonian) -> bool:
    return (adjoint(h.h) - h.h).truncate(h.order).is_zero()


def _coeffs(h: WeylExpr):
    cl = classicalize(h)
    allowed = {}
    names = {
        "pxx": ((0, 0), (2, 0)), "pyy": ((0, 0), (0, 2)), "pxy": ((0, 0), (1, 1)),
        "xx": ((2, 0), (0, 0)), "yy": ((0, 2), (0, 0)), "xy": ((1, 1), (0, 0)),
        "x_py": ((1, 0), (0, 1)), "y_px": ((0, 1), (1, 0)),
        "x_px": ((1, 0), (1, 0)), "y_py": ((0, 1), (0, 1)),
        "x": ((1, 0), (0, 0)), "y": ((0, 1), (0, 0)),
        "px": ((0, 0), (1, 0)), "py": ((0, 0), (0, 1)), "1": ((0, 0), (0, 0)),
    }
    for name, key in names.items():
        allowed[name] = cl.coefficient(*key)
    extra = set(cl.terms) - set(names.values())
    if extra:
        raise CanonicalMatchFailed(f"Hamiltonian has terms beyond quadratic order: {sorted(extra)}")
    return allowed


def to_canonical_landau(hh: HallHamiltonian) -> CanonicalLandauForm:
    """Match ``H`` to ``(1/4m)(b b+ + b+ b) - (lambda_+/2m)(d + d+) - lambda_-**2/2m``.

    Expanding that form gives
    ``(1/2m)[(gamma p_x - k y)**2 + (gamma p_y + k x)**2]
    + (k/m)(lambda_- + lambda_+) x + (gamma/m)(lambda_- - lambda_+) p_y``
    with ``k = (eB/2c) beta`` and no constant term.
    """
    o = hh.order
    q = _coeffs(hh.h)
    t = o.truncate

    def require(cond, msg):
        if not cond:
            raise CanonicalMatchFailed(msg)

    for name in ("pxy", "xy", "x_px", "y_py", "y", "px"):
        require(t(q[name]).is_zero(), f"unexpected {name} coefficient {q[name]}")
    require(t(q["pxx"] - q["pyy"]).is_zero(), "anisotropic kinetic term")
    require(t(q["xx"] - q["yy"]).is_zero(), "anisotropic confinement term")
    require(t(q["x_py"] + q["y_px"]).is_zero(), "cross term is not rotational")
    try:
        gamma = perturbative_sqrt(2 * m * q["pxx"], o)
        k = perturbative_sqrt(2 * m * q["xx"], o)
        beta = t(k * 2 * c / (e * B))
        inv_k = reciprocal(k, o)
        inv_g = reciprocal(gamma, o)
    except ScalarError as exc:
        raise CanonicalMatchFailed(str(exc)) from exc
    require(t(q["x_py"] - gamma * k / m).is_zero(), "cross term inconsistent with gamma*k/m")
    total = t(m * q["x"] * inv_k)       # lambda_- + lambda_+
    diff = t(m * q["py"] * inv_g)       # lambda_- - lambda_+
    lminus = t((total + diff) / 2)
    lplus = t((total - diff) / 2)
    # completing the square leaves no constant: -lambda_-^2/2m is cancelled
    require(t(q["1"]).is_zero(), f"constant term {q['1']} does not match the completed square")
    return CanonicalLandauForm(gamma, beta, lplus, lminus, o)


def ladder_operators(form: CanonicalLandauForm):
    """``(b, b_dagger, d, d_dagger)`` as WeylExprs in (x, y)."""
    px, py = WeylExpr.momentum(2, 0), WeylExpr.momentum(2, 1)
    x, y = WeylExpr.coord(2, 0), WeylExpr.coord(2, 1)
    g, k, lm = form.gamma, form.k, form.lambda_minus
    u = py.scale(g) + x.scale(k)
    v = px.scale(g) - y.scale(k)
    w = py.scale(g) - x.scale(k)
    tt = px.scale(g) + y.scale(k)
    b = u + lm + v.scale(I)
    bd = u + lm - v.scale(I)
    d = w + tt.scale(I)
    dd = w - tt.scale(I)
    return b, bd, d, dd


def reconstruct_hamiltonian(form: CanonicalLandauForm) -> WeylExpr:
    o = form.order
    b, bd, d, dd = ladder_operators(form)
    h = (mul(b, bd, o) + mul(bd, b, o)).scale(1 / (4 * m))
    h = h - (d + dd).scale(form.lambda_plus / (2 * m))
    h = h - WeylExpr.scalar(2, form.lambda_minus * form.lambda_minus / (2 * m))
    return h.truncate(o)


def current_operator(hh: HallHamiltonian, component: int) -> WeylExpr:
    """``J_i = (i e rho_e / hbar) [H, r_i]``."""
    r = WeylExpr.coord(2, component)
    return commutator(hh.h, r, hh.order).scale(I * e * rho_e / hbar).truncate(hh.order)


# -- ladder algebra ---------------------------------------------------------------

_LETTERS = ("b+", "d+", "b", "d")
_RANK = {s: i for i, s in enumerate(_LETTERS)}


class LadderExpr:
    """Polynomial in ``b, b+, d, d+`` with scalar commutators.

    ``[b, b+] = comm_bb``, ``[d, d+] = comm_dd = -comm_bb``; the b and d
    sectors commute.  Words are tuples of letters; the normal form puts
    daggered letters on the left.
    """

    def __init__(self, terms, comm_bb: Scalar, order: GradedOrder = _ORDER):
        self.comm_bb = comm_bb
        self.comm_dd = -comm_bb
        self.order = order
        acc = {}
        for word, coeff in (terms.items() if isinstance(terms, dict) else terms):
            word = tuple(word)
            for letter in word:
                if letter not in _RANK:
                    raise ValueError(f"unknown ladder letter {letter!r}")
            acc[word] = acc.get(word, ZERO) + Scalar.coerce(coeff)
        self.terms = {w: order.truncate(v) for w, v in acc.items()}
        self.terms = {w: v for w, v in self.terms.items() if not v.is_zero()}

    def coefficient(self, word) -> Scalar:
        return self.terms.get(tuple(word), ZERO)

    def normal_ordered(self) -> "LadderExpr":
        out = {}
        stack = list(self.terms.items())
        while stack:
            word, coeff = stack.pop()
            for i in range(len(word) - 1):
                a, b_ = word[i], word[i + 1]
                if _RANK[a] > _RANK[b_]:
                    swapped = word[:i] + (b_, a) + word[i + 2:]
                    stack.append((swapped, coeff))
                    if (a, b_) == ("b", "b+"):
                        stack.append((word[:i] + word[i + 2:], coeff * self.comm_bb))
                    elif (a, b_) == ("d", "d+"):
                        stack.append((word[:i] + word[i + 2:], coeff * self.comm_dd))
                    break
            else:
                out[word] = out.get(word, ZERO) + coeff
        return LadderExpr(out, self.comm_bb, self.order)

    def __str__(self):
        parts = []
        for word in sorted(self.terms, key=lambda w: (len(w), [_RANK[x] for x in w])):
            name = "*".join(word) if word else "1"
            parts.append(f"({self.terms[word]})*{name}")
        return " + ".join(parts) if parts else "0"


def express_in_ladder(j: WeylExpr, form: CanonicalLandauForm) -> LadderExpr:
    """Rewrite an affine operator in ``{b, b+, d, d+, 1}``; d-sector terms are an error."""
    o = form.order
    for (rp, dp), _ in j.terms:
        if sum(rp) + sum(dp) > 1:
            raise NotInLadderSpan("operator is not affine in (r, d)")
    i_over_hbar = I / hbar
    cx = j.coefficient((1, 0), (0, 0))
    cy = j.coefficient((0, 1), (0, 0))
    cpx = j.coefficient((0, 0), (1, 0)) * i_over_hbar
    cpy = j.coefficient((0, 0), (0, 1)) * i_over_hbar
    c0 = j.constant()
    inv2k = reciprocal(2 * form.k, o)
    inv2g = reciprocal(2 * form.gamma, o)
    U = o.truncate(cx * inv2k + cpy * inv2g)
    V = o.truncate(-cy * inv2k + cpx * inv2g)
    W = o.truncate(-cx * inv2k + cpy * inv2g)
    T = o.truncate(cy * inv2k + cpx * inv2g)
    half_i = I * Scalar.coerce(-1) / 2       # 1/(2i)
    terms = {
        ("b",): U / 2 + V * half_i,
        ("b+",): U / 2 - V * half_i,
        ("d",): W / 2 + T * half_i,
        ("d+",): W / 2 - T * half_i,
        (): c0 - U * form.lambda_minus,
    }
    out = LadderExpr(terms, form.comm_bb, o)
    if out.coefficient(("d",)) or out.coefficient(("d+",)):
        raise NotInLadderSpan(f"operator has a d-sector component: {out}")
    return out


def _falling(n: Scalar, k: int) -> Scalar:
    out = ONE
    for i in range(k):
        out = out * (n - i)
    return out


def expectation_number_state(l: LadderExpr, n: Scalar | None = None) -> Scalar:
    """``<n| l |n>`` using ``<n| b+^j b^k |n> = delta_jk comm**k n!/(n-k)!``."""
    n = sym("n") if n is None else Scalar.coerce(n)
    nl = l.normal_ordered()
    total = ZERO
    for word, coeff in nl.terms.items():
        if any(x in ("d", "d+") for x in word):
            raise NotInLadderSpan("expectation value defined for b-sector words only")
        j = word.count("b+")
        k = word.count("b")
        if j == k:
            total = total + coeff * nl.comm_bb ** k * _falling(n, k)
    return nl.order.truncate(total)


def hall_conductivity(form: CanonicalLandauForm) -> Scalar:
    """``sigma_H = -(e rho_e / m)(gamma lambda_- + e m E theta / 2 hbar) / E``."""
    o = form.order
    j_y = expand_derived(-(e * rho_e / m) * (form.gamma * form.lambda_minus
                                             + e * m * E * theta / (2 * hbar)))
    return o.truncate(_divide_by_field(o.truncate(j_y)))


def _divide_by_field(s: Scalar) -> Scalar:
    for mono, _ in s.terms:
        if dict(mono).get("E", 0) != 1:
            raise NotLinearInField(f"term without a single power of E in {s}")
    return s / E


def hall_conductivity_from_current(hh: HallHamiltonian, form: CanonicalLandauForm) -> Scalar:
    """Same quantity through ``<n|J_y|n>`` in the ladder basis."""
    jy = express_in_ladder(current_operator(hh, 1), form)
    avg = expand_derived(expectation_number_state(jy))
    return form.order.truncate(_divide_by_field(form.order.truncate(avg)))


@dataclass(frozen=True)
class Table1Row:
    kind: str
    form: CanonicalLandauForm
    sigma: Scalar
    jx_expectation: Scalar


def table1(kinds=HALL_KINDS, theta_zero: bool = False):
    rows = []
    for kind in kinds:
        hh = build_hall_hamiltonian(kind, theta_zero=theta_zero)
        form = to_canonical_landau(hh)
        jx = express_in_ladder(current_operator(hh, 0), form)
        sigma = hall_conductivity(form)
        if theta_zero:
            # the conductivity formula carries its own explicit theta
            sigma = sigma.set_zero("theta")
        rows.append(Table1Row(kind, form, sigma, expectation_number_state(jx)))
    return rows


def render_entry(s: Scalar, expand: bool = False) -> str:
    return str(expand_derived(s) if expand else contract_derived(s))


__all__ += ["Table1Row", "render_entry"]
