"""Operator realizations of the deformed phase-space algebra and their checks.

Conventions fixed here and shared by the whole package:

* ``eps_12 = +1`` and ``theta_ij = theta * eps_ij`` in the (x, y) plane;
* the Hall and Aharonov-Bohm runs use ``rho = -e/c`` and the symmetric gauge
  ``A_i = -(B/2) eps_ij r_j`` so that ``F_12 = +B``.

With these choices the explicit Hall realizations, the deformed algebra with
``[x, y] = i*theta`` and the canonical Landau coefficients all come out with
the signs they are usually quoted with.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .scalars import I, ONE, ZERO, GradedOrder, Scalar, sym
from .weyl import (
    COORDS, GaugeFieldSpec, WeylExpr, commutator, coord_derivative, solenoid_field,
    symmetric_gauge,
)

__all__ = [
    "KINDS",
    "HALL_KINDS",
    "EPSILON_12",
    "ConditionsViolated",
    "UnsupportedField",
    "ConfigError",
    "Realization",
    "AlgebraRelations",
    "RelationCheck",
    "VerificationReport",
    "ConditionReport",
    "hall_coupling",
    "theta_matrix",
    "default_order",
    "build_realization",
    "general_algebra",
    "verify_algebra",
    "verify_jacobi",
    "check_conditions",
]

KINDS = ("general_r1r2", "gauge_invariant", "hall_1", "hall_2", "hall_3")
HALL_KINDS = ("hall_1", "hall_2", "hall_3")

#: Orientation of the Levi-Civita symbol in the (x, y) plane.
EPSILON_12 = 1

#: Joint cap removing terms of order e**2 * theta (and rho**2 * theta).
DROP_E2_THETA = (frozenset({"e", "rho", "theta"}), 2)


class ConditionsViolated(ValueError):
    pass


class UnsupportedField(ValueError):
    pass


class ConfigError(ValueError):
    pass


def hall_coupling() -> Scalar:
    return -sym("e") / sym("c")


def _eps(i, j):
    if (i, j) == (0, 1):
        return EPSILON_12
    if (i, j) == (1, 0):
        return -EPSILON_12
    return 0


def theta_matrix(dim: int, theta=None):
    """``theta_ij = theta * eps_ij`` in the (x, y) plane, zero elsewhere."""
    t = sym("theta") if theta is None else Scalar.coerce(theta)
    return tuple(tuple(t * _eps(i, j) for j in range(dim)) for i in range(dim))


def default_order(keep_second_order_coupling: bool = True) -> GradedOrder:
    if keep_second_order_coupling:
        return GradedOrder({"theta": 1})
    return GradedOrder({"theta": 1}, [DROP_E2_THETA])


@dataclass(frozen=True)
class Realization:
    kind: str
    field: GaugeFieldSpec
    keep_second_order_coupling: bool
    r_hat: tuple
    p_hat: tuple
    order: GradedOrder
    coupling: Scalar
    theta: tuple = dc_field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.r_hat)

    def generators(self):
        """``(name, operator)`` pairs for every r-hat and p-hat."""
        names = [f"r_{COORDS[a]}" for a in range(self.dim)]
        names += [f"p_{COORDS[a]}" for a in range(self.dim)]
        return list(zip(names, self.r_hat + self.p_hat))

    def set_zero(self, symbol: str) -> "Realization":
        """Same realization with ``symbol`` (e.g. theta) set to zero."""
        return Realization(
            self.kind, self.field, self.keep_second_order_coupling,
            tuple(r.set_zero(symbol) for r in self.r_hat),
            tuple(p.set_zero(symbol) for p in self.p_hat),
            self.order, self.coupling.set_zero(symbol),
            tuple(tuple(t.set_zero(symbol) for t in row) for row in self.theta))


# -- construction ---------------------------------------------------------------

def _momentum(dim, a):
    return WeylExpr.momentum(dim, a)


def _covariant(field: GaugeFieldSpec, rho: Scalar):
    """``D_a = -i hbar d_a - rho A_a``."""
    return [_momentum(field.dim, a) - field.components[a].scale(rho) for a in range(field.dim)]


def _build_r1r2(field, rho, theta, order):
    dim = field.dim
    F = field.constant_field_strength()
    hbar = sym("hbar")
    D = _covariant(field, rho)
    p_hat, r_hat = [], []
    for a in range(dim):
        p = D[a]
        for b in range(dim):
            for g in range(dim):
                w = F[a][b] * theta[b][g]
                if w:
                    p = p - D[g].scale(rho * w / (2 * hbar))
        p_hat.append(p.truncate(order))
        r = WeylExpr.coord(dim, a)
        for b in range(dim):
            if theta[a][b]:
                r = r - D[b].scale(theta[a][b] / (2 * hbar))
        r_hat.append(r.truncate(order))
    return tuple(r_hat), tuple(p_hat)


def _build_gauge_invariant(dim, F, rho, theta, order):
    hbar = sym("hbar")
    p_hat, r_hat = [], []
    for a in range(dim):
        p = _momentum(dim, a)
        for b in range(dim):
            if not F[a][b]:
                continue
            inner = WeylExpr.coord(dim, b)
            for g in range(dim):
                if theta[b][g]:
                    inner = inner + WeylExpr.deriv(dim, g).scale(2 * I * theta[b][g])
            p = p + inner.scale(rho * F[a][b] / 2)
        p_hat.append(p.truncate(order))
        r = WeylExpr.coord(dim, a)
        for b in range(dim):
            if not theta[a][b]:
                continue
            inner = _momentum(dim, b)
            for g in range(dim):
                if F[b][g]:
                    inner = inner - WeylExpr.coord(dim, g).scale(rho * F[b][g] / 2)
            r = r - inner.scale(theta[a][b] / (2 * hbar))
        r_hat.append(r.truncate(order))
    return tuple(r_hat), tuple(p_hat)


def _build_hall_explicit(kind, order):
    """The three Hall realizations written out directly in (x, y)."""
    e, c, B, hbar, th = (sym(s) for s in ("e", "c", "B", "hbar", "theta"))
    dim = 2
    if kind == "hall_1":
        p_fac, a_fac, r_fac = 1 - e * th * B / (2 * hbar * c), ONE, 1 - e * th * B / (4 * hbar * c)
    elif kind == "hall_2":
        p_fac = 1 - e * th * B / (2 * hbar * c)
        a_fac, r_fac = p_fac, 1 - e * th * B / (4 * hbar * c)
    else:
        p_fac, a_fac, r_fac = 1 - e * th * B / (hbar * c), ONE, 1 + e * th * B / (4 * hbar * c)
    p_hat, r_hat = [], []
    for i in range(dim):
        p = _momentum(dim, i).scale(p_fac)
        r = WeylExpr.coord(dim, i).scale(r_fac)
        for j in range(dim):
            if _eps(i, j):
                p = p - WeylExpr.coord(dim, j).scale(e * B / (2 * c) * a_fac * _eps(i, j))
                r = r - _momentum(dim, j).scale(th / (2 * hbar) * _eps(i, j))
        p_hat.append(p.truncate(order))
        r_hat.append(r.truncate(order))
    return tuple(r_hat), tuple(p_hat)


def build_realization(kind: str, field: GaugeFieldSpec | None = None, *,
                      keep_second_order_coupling: bool | None = None,
                      coupling=None, theta=None, explicit: bool = True) -> Realization:
    """Construct one of the named realizations.

    Parameters
    ----------
    kind : str
        One of :data:`KINDS`.
    field : GaugeFieldSpec, optional
        Defaults to the symmetric gauge of a uniform ``F_12 = B``.  Hall kinds
        only accept that field.
    keep_second_order_coupling : bool, optional
        Keep the ``rho**2 * theta`` terms.  Forced by ``hall_1`` (False) and
        ``hall_2`` (True); contradicting values raise :class:`ConfigError`.
    coupling : Scalar, optional
        ``rho``; defaults to ``-e/c``.
    theta : Scalar, optional
        Noncommutativity strength; defaults to the symbol ``theta``.
    explicit : bool
        For Hall kinds, use the written-out (x, y) formulas.  With False the
        general constructions are used instead; both agree term for term.
    """
    if kind not in KINDS:
        raise ConfigError(f"unknown realization kind {kind!r}")
    forced = {"hall_1": False, "hall_2": True}.get(kind)
    if forced is not None and keep_second_order_coupling not in (None, forced):
        raise ConfigError(f"{kind} fixes keep_second_order_coupling={forced}")
    keep = forced if forced is not None else (
        True if keep_second_order_coupling is None else keep_second_order_coupling)
    rho = hall_coupling() if coupling is None else Scalar.coerce(coupling)

    if kind in HALL_KINDS:
        if field is not None and field.components != symmetric_gauge(2).components:
            raise UnsupportedField("Hall realizations use the symmetric gauge with F_12 = B")
        if coupling is not None and rho != hall_coupling():
            raise ConfigError("Hall realizations use rho = -e/c")
        field = symmetric_gauge(2)
    elif field is None:
        field = symmetric_gauge(2)

    report = check_conditions(field)
    if not report.passed:
        raise ConditionsViolated("; ".join(report.messages))
    if field.components is None:
        raise UnsupportedField("gauge field has no polynomial components")

    order = default_order(keep)
    th = theta_matrix(field.dim, theta)
    if kind in HALL_KINDS and explicit and theta is None:
        r_hat, p_hat = _build_hall_explicit(kind, order)
    elif kind in ("general_r1r2", "hall_1", "hall_2"):
        r_hat, p_hat = _build_r1r2(field, rho, th, order)
    else:
        r_hat, p_hat = _build_gauge_invariant(field.dim, field.constant_field_strength(),
                                              rho, th, order)
    return Realization(kind, field, keep, r_hat, p_hat, order, rho, th)


# -- target algebra -------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraRelations:
    """Right-hand sides of the four commutator families."""

    rr: tuple
    pp: tuple
    rp: tuple
    pr: tuple


def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), ZERO)
                       for j in range(n)) for i in range(n))


def general_algebra(dim: int, F, theta, rho: Scalar,
                    order: GradedOrder | None = None) -> AlgebraRelations:
    """Deformed algebra for constant ``F`` truncated by ``order``.

    ``[r_a, r_b] = i theta_ab``,
    ``[p_a, p_b] = i hbar rho F_ab - i rho**2 (F theta F)_ab``,
    ``[r_a, p_b] = i hbar delta_ab - i rho (theta F)_ab``,
    ``[p_a, r_b] = -i hbar delta_ab + i rho (F theta)_ab``.
    """
    order = GradedOrder() if order is None else order
    hbar = sym("hbar")
    FtF = _matmul(_matmul(F, theta), F)
    tF = _matmul(theta, F)
    Ft = _matmul(F, theta)

    def w(s):
        return WeylExpr.scalar(dim, order.truncate(s))

    rng = range(dim)
    rr = tuple(tuple(order.truncate(I * theta[a][b]) for b in rng) for a in rng)
    pp = tuple(tuple(w(I * hbar * rho * F[a][b] - I * rho * rho * FtF[a][b]) for b in rng)
               for a in rng)
    rp = tuple(tuple(w(I * hbar * (a == b) - I * rho * tF[a][b]) for b in rng) for a in rng)
    pr = tuple(tuple(w(-I * hbar * (a == b) + I * rho * Ft[a][b]) for b in rng) for a in rng)
    return AlgebraRelations(rr, pp, rp, pr)


def target_algebra(r: Realization) -> AlgebraRelations:
    return general_algebra(r.dim, r.field.constant_field_strength(), r.theta,
                           r.coupling, r.order)


# -- verification -----------------------------------------------------------------

@dataclass(frozen=True)
class RelationCheck:
    name: str
    expected: str
    computed: str
    residual: WeylExpr
    passed: bool

    def as_dict(self):
        return {"name": self.name, "expected": self.expected, "computed": self.computed,
                "residual": str(self.residual), "pass": self.passed}


@dataclass
class ConditionReport:
    passed: bool
    regions: list
    excluded: str | None = None
    messages: list = dc_field(default_factory=list)

    def as_dict(self):
        return {"pass": self.passed, "regions": self.regions, "excluded": self.excluded,
                "messages": self.messages}


@dataclass
class VerificationReport:
    relations: list = dc_field(default_factory=list)
    jacobi: list = dc_field(default_factory=list)
    conditions: ConditionReport | None = None

    @property
    def passed(self) -> bool:
        ok = all(c.passed for c in self.relations) and all(c.passed for c in self.jacobi)
        if self.conditions is not None:
            ok = ok and self.conditions.passed
        return ok

    def checks(self):
        return list(self.relations) + list(self.jacobi)


def _relation(name, lhs, expected: WeylExpr, order):
    residual = (lhs - expected).truncate(order)
    return RelationCheck(name, str(expected), str(lhs), residual, residual.is_zero())


def verify_algebra(r: Realization, target: AlgebraRelations | None = None) -> VerificationReport:
    """Compare every pairwise commutator of the realization with ``target``."""
    target = target_algebra(r) if target is None else target
    d, o = r.dim, r.order
    names = COORDS[:d]
    report = VerificationReport()
    for a in range(d):
        for b in range(d):
            if a < b:
                report.relations.append(_relation(
                    f"[r_{names[a]},r_{names[b]}]", commutator(r.r_hat[a], r.r_hat[b], o),
                    WeylExpr.scalar(d, target.rr[a][b]), o))
                report.relations.append(_relation(
                    f"[p_{names[a]},p_{names[b]}]", commutator(r.p_hat[a], r.p_hat[b], o),
                    target.pp[a][b], o))
            report.relations.append(_relation(
                f"[r_{names[a]},p_{names[b]}]", commutator(r.r_hat[a], r.p_hat[b], o),
                target.rp[a][b], o))
            report.relations.append(_relation(
                f"[p_{names[a]},r_{names[b]}]", commutator(r.p_hat[a], r.r_hat[b], o),
                target.pr[a][b], o))
    return report


def jacobi_residual(a, b, c, order):
    return (commutator(a, commutator(b, c, order), order)
            + commutator(b, commutator(c, a, order), order)
            + commutator(c, commutator(a, b, order), order)).truncate(order)


def verify_jacobi(r: Realization) -> VerificationReport:
    report = VerificationReport()
    for (na, a), (nb, b), (nc, c) in itertools.combinations(r.generators(), 3):
        res = jacobi_residual(a, b, c, r.order)
        report.jacobi.append(RelationCheck(f"jacobi({na},{nb},{nc})", "0", str(res), res,
                                           res.is_zero()))
    return report


def check_conditions(field: GaugeFieldSpec) -> ConditionReport:
    """Constant field strength per region; matrix commutators vanish for scalars."""
    regions = []
    messages = []
    if field.regions:
        for reg in field.regions:
            ok = all(isinstance(F, Scalar) or F.is_scalar()
                     for row in reg.field_strength for F in row)
            regions.append({"name": reg.name, "gradient_free": ok, "commuting": True})
            if not ok:
                messages.append(f"field strength not constant in region {reg.name}")
        return ConditionReport(not messages, regions, field.boundary, messages)
    ok = field.is_constant()
    grads = []
    if not ok:
        for a, row in enumerate(field.field_strength):
            for b, F in enumerate(row):
                for g in range(field.dim):
                    dF = coord_derivative(F, g)
                    if dF:
                        grads.append(f"d_{COORDS[g]} F_{a + 1}{b + 1} = {dF}")
        messages.append("field strength is not constant: " + "; ".join(grads))
    regions.append({"name": "all", "gradient_free": ok, "commuting": True})
    return ConditionReport(ok, regions, None, messages)


def region_fields(field: GaugeFieldSpec):
    """Polynomial stand-in field per region.

    Regions without polynomial components must be field-free; there the gauge
    field is locally pure gauge and ``A = 0`` represents it.
    """
    if not field.regions:
        return [("all", field)]
    out = []
    for reg in field.regions:
        if reg.components is not None:
            out.append((reg.name, GaugeFieldSpec(reg.components)))
        elif all(not F for row in reg.field_strength for F in row):
            out.append((reg.name, GaugeFieldSpec([WeylExpr.zero(field.dim)] * field.dim)))
        else:
            raise UnsupportedField(f"region {reg.name} has field but no polynomial gauge")
    return out


def verify_regions(kind: str, field: GaugeFieldSpec, **kwargs):
    """Algebra and Jacobi reports for every constant-F region of ``field``."""
    out = []
    for name, f in region_fields(field):
        r = build_realization(kind, f, **kwargs)
        rep = verify_algebra(r)
        rep.jacobi = verify_jacobi(r).jacobi
        rep.conditions = check_conditions(f)
        out.append((name, rep))
    return out


__all__ += ["target_algebra", "jacobi_residual", "region_fields", "verify_regions",
            "solenoid_field"]
