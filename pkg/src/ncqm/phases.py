"""Deformed gauge fields and quantum phases.

The phase attached to a realization is read from the classical effective
Hamiltonian ``a_ab p_a p_b + b_a p_a + c``: integrating out the momenta in
the phase-space path integral leaves the gauge field ``-(1/2) a^-1 b``, whose
loop integral gives a velocity independent phase.  The kinetic-momentum
(star-shift) construction is kept alongside for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .realization import (
    Realization, build_realization, hall_coupling, theta_matrix,
)
from .scalars import (
    I, ONE, ZERO, GradedOrder, Scalar, ScalarError, NotPerturbativelyInvertible,
    reciprocal, substitute_numeric, sym,
)
from .weyl import (
    GaugeFieldSpec, WeylExpr, classicalize, coord_derivative, mul, solenoid_field,
    symmetric_gauge,
)

__all__ = [
    "NonQuadratic",
    "CoordinateDependentMass",
    "NonLinearField",
    "ContourIntersectsBoundary",
    "QuadraticHamiltonian",
    "DeformedGaugeField",
    "PhaseResult",
    "Contour",
    "AB_VARIANTS",
    "effective_hamiltonian",
    "invert_matrix",
    "deformed_gauge_field",
    "gauge_identity_residual",
    "ab_base_phase",
    "loop_phase_flux",
    "loop_phase_numeric",
    "enclosed_area",
    "ab_phase",
    "star_shift_gauge_field",
    "star_shift_phase",
    "anandan_phase",
]


class NonQuadratic(ValueError):
    pass


class CoordinateDependentMass(ValueError):
    pass


class NonLinearField(ValueError):
    pass


class ContourIntersectsBoundary(ValueError):
    pass


hbar, e, c, B, m, theta = (sym(s) for s in ("hbar", "e", "c", "B", "m", "theta"))

_ORDER = GradedOrder({"theta": 1})


@dataclass(frozen=True)
class QuadraticHamiltonian:
    a: tuple        # d x d Scalars
    b: tuple        # d coordinate polynomials
    c: WeylExpr     # momentum-free remainder, ordering constants included
    order: GradedOrder = _ORDER

    @property
    def dim(self):
        return len(self.b)


@dataclass(frozen=True)
class DeformedGaugeField:
    components: tuple
    region: str = "uniform"
    radius: float | None = None     # solenoid radius when region == "solenoid"

    @property
    def dim(self):
        return len(self.components)


@dataclass(frozen=True)
class PhaseResult:
    base: str
    base_phase: Scalar
    factor: Scalar
    absolute: Scalar
    label: str = ""
    details: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class Contour:
    center: tuple = (0.0, 0.0)
    radius: float = 2.0
    samples: int = 10_000

    def __post_init__(self):
        if self.samples < 8:
            raise ValueError("contour needs at least 8 samples")
        if self.radius <= 0:
            raise ValueError("contour radius must be positive")


#: AB configurations: name -> (realization kind, keep rho**2 theta terms).
AB_VARIANTS = {
    "hall_1": ("general_r1r2", False),
    "hall_2": ("general_r1r2", True),
    "gauge_invariant": ("gauge_invariant", True),
}


# -- effective Hamiltonian and gauge field ------------------------------------------

def effective_hamiltonian(r: Realization) -> QuadraticHamiltonian:
    """Classical ``a p p + b p + c`` of ``p_hat**2 / 2m``."""
    order = r.order.without_joint()
    d = r.dim
    h = WeylExpr.zero(d)
    for p in r.p_hat:
        h = h + mul(p, p, order)
    h = h.scale(1 / (2 * m)).truncate(order)
    cl = classicalize(h)
    if cl.p_degree() > 2:
        raise NonQuadratic("effective Hamiltonian is beyond quadratic in p")
    a = [[ZERO] * d for _ in range(d)]
    for al in range(d):
        for be in range(d):
            pp = [0] * d
            pp[al] += 1
            pp[be] += 1
            part = cl.part(pp)
            if not part.is_scalar():
                raise CoordinateDependentMass(f"p{al}p{be} coefficient depends on r: {part}")
            coeff = part.constant()
            a[al][be] = coeff if al == be else coeff / 2
    b = []
    for al in range(d):
        pp = [0] * d
        pp[al] = 1
        b.append(cl.part(pp).truncate(order))
    rest = cl.part([0] * d).truncate(order)
    return QuadraticHamiltonian(tuple(tuple(row) for row in a), tuple(b), rest, order)


def invert_matrix(a, order: GradedOrder):
    """Perturbative inverse ``(L + N)^-1 = sum (-L^-1 N)^k L^-1``.

    ``L`` is the graded-degree-zero part of ``a`` and must be diagonal with
    invertible single-term entries.
    """
    d = len(a)
    L = [[ZERO] * d for _ in range(d)]
    N = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            for mono, coeff in a[i][j].terms:
                term = Scalar({mono: coeff})
                if order.graded_degree(mono) == 0:
                    L[i][j] = L[i][j] + term
                else:
                    N[i][j] = N[i][j] + term
    Linv = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            if i != j and L[i][j]:
                raise NotPerturbativelyInvertible("leading part of a is not diagonal")
        if not L[i][i].is_single_term():
            raise NotPerturbativelyInvertible(f"no dominant single term in a[{i}][{i}]")
        Linv[i][i] = reciprocal(L[i][i], GradedOrder.unbounded())

    def mm(X, Y):
        return [[order.truncate(sum((X[i][k] * Y[k][j] for k in range(d)), ZERO))
                 for j in range(d)] for i in range(d)]

    step = [[-x for x in row] for row in mm(Linv, N)]
    term = Linv
    out = [row[:] for row in Linv]
    for _ in range(64):
        term = mm(step, term)
        if all(x.is_zero() for row in term for x in row):
            return tuple(tuple(row) for row in out)
        out = [[out[i][j] + term[i][j] for j in range(d)] for i in range(d)]
    raise NotPerturbativelyInvertible("Neumann series does not terminate")


def deformed_gauge_field(q: QuadraticHamiltonian, region: str = "uniform",
                         radius: float | None = None) -> DeformedGaugeField:
    """``A_a = -(1/2) (a^-1)_ab b_b``."""
    ainv = invert_matrix(q.a, q.order)
    comps = []
    for al in range(q.dim):
        comp = WeylExpr.zero(q.dim)
        for be in range(q.dim):
            if ainv[al][be]:
                comp = comp + q.b[be].scale(-ainv[al][be] / 2)
        comps.append(comp.truncate(q.order))
    return DeformedGaugeField(tuple(comps), region, radius)


def gauge_identity_residual(q: QuadraticHamiltonian, f: DeformedGaugeField):
    """``a (-2 A) - b`` per component, truncated; all zero for a valid extraction."""
    out = []
    for al in range(q.dim):
        acc = WeylExpr.zero(q.dim)
        for be in range(q.dim):
            acc = acc + f.components[be].scale(-2 * q.a[al][be])
        out.append((acc - q.b[al]).truncate(q.order))
    return out


# -- phases --------------------------------------------------------------------------

def ab_base_phase(area: Scalar | None = None) -> Scalar:
    """``-2 pi i B S / Phi_0`` with ``Phi_0 = hc/e``, i.e. ``-i e B S / (hbar c)``."""
    S = sym("S") if area is None else Scalar.coerce(area)
    return -I * e * B * S / (hbar * c)


def _curl(f: DeformedGaugeField) -> WeylExpr:
    return coord_derivative(f.components[1], 0) - coord_derivative(f.components[0], 1)


def loop_phase_flux(f: DeformedGaugeField, area: Scalar | None = None,
                    prefactor: Scalar | None = None, order: GradedOrder = _ORDER) -> PhaseResult:
    """``(i/hbar) * curl(A) * S`` relative to the AB phase of the same area."""
    for comp in f.components:
        if comp.r_degree() > 1 or not comp.is_coordinate_poly():
            raise NonLinearField("gauge field is not linear in the coordinates")
    curl = _curl(f)
    if not curl.is_scalar():
        raise NonLinearField("field strength of the deformed gauge field is not constant")
    S = sym("S") if area is None else Scalar.coerce(area)
    pref = I / hbar if prefactor is None else prefactor
    absolute = order.truncate(pref * curl.constant() * S)
    base = ab_base_phase(S)
    factor = order.truncate(absolute / base)
    return PhaseResult("AB", base, factor, absolute,
                       details={"curl": str(curl.constant())})


def _eval_poly(p: WeylExpr, values: dict, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    out = np.zeros_like(xs, dtype=complex)
    for (rp, _), coeff in p.terms:
        out = out + substitute_numeric(coeff, values) * xs ** rp[0] * ys ** rp[1]
    return out


def enclosed_area(contour: Contour, solenoid_radius: float | None = None) -> float:
    """Area of the field-carrying region enclosed by a circular contour."""
    R = contour.radius
    dist = math.hypot(*contour.center)
    if solenoid_radius is None:
        return math.pi * R * R
    Rs = solenoid_radius
    if dist + R <= Rs:
        return math.pi * R * R
    if dist + Rs <= R:
        return math.pi * Rs * Rs
    if dist >= R + Rs:
        return 0.0
    raise ContourIntersectsBoundary("contour crosses the solenoid boundary")


def loop_phase_numeric(f: DeformedGaugeField, contour: Contour, values: dict,
                       prefactor: complex | None = None) -> complex:
    """Trapezoidal ``(i/hbar) * loop integral of A . dr`` on a circle.

    For ``region == "solenoid"`` the polynomial components describe the
    interior; outside, the field continues as the pure-flux field
    ``A_in(r) * R_s**2 / |r|**2``, continuous at the boundary.
    """
    if f.dim != 2:
        raise ValueError("numeric loop integrals run in the plane")
    n = contour.samples
    phi = 2 * np.pi * np.arange(n) / n
    cx, cy = contour.center
    xs = cx + contour.radius * np.cos(phi)
    ys = cy + contour.radius * np.sin(phi)
    dxs = -contour.radius * np.sin(phi)
    dys = contour.radius * np.cos(phi)
    ax = _eval_poly(f.components[0], values, xs, ys)
    ay = _eval_poly(f.components[1], values, xs, ys)
    if f.region == "solenoid":
        Rs = f.radius
        r2 = xs * xs + ys * ys
        enclosed_area(contour, Rs)  # raises when the circle crosses r = R_s
        scale = np.where(r2 > Rs * Rs, Rs * Rs / r2, 1.0)
        ax, ay = ax * scale, ay * scale
    integral = (2 * np.pi / n) * np.sum(ax * dxs + ay * dys)
    pref = 1j / float(values["hbar"]) if prefactor is None else prefactor
    return pref * integral


def ab_phase(variant: str = "hall_1", theta_zero: bool = False,
             solenoid_radius: float = 1.0):
    """AB phase for the solenoid in one of :data:`AB_VARIANTS`.

    Returns ``(PhaseResult, QuadraticHamiltonian, DeformedGaugeField)``; the
    field is the interior one, tagged as a solenoid configuration.
    """
    if variant == "hall_3":
        variant = "gauge_invariant"
    if variant not in AB_VARIANTS:
        raise ValueError(f"unknown AB realization {variant!r}")
    kind, keep = AB_VARIANTS[variant]
    field = solenoid_field()
    r = build_realization(kind, GaugeFieldSpec(field.regions[0].components),
                          keep_second_order_coupling=keep)
    if theta_zero:
        r = r.set_zero("theta")
    q = effective_hamiltonian(r)
    f = deformed_gauge_field(q, region="solenoid", radius=solenoid_radius)
    res = loop_phase_flux(f)
    res = PhaseResult("AB", res.base_phase, res.factor, res.absolute,
                      label=f"path-integral gauge field, {variant}",
                      details={**res.details, "a": [[str(x) for x in row] for row in q.a],
                               "b": [str(x) for x in q.b],
                               "gauge_field": [str(x) for x in f.components]})
    return res, q, f


# -- star-shift comparison -----------------------------------------------------------------

def star_shift_gauge_field(A: GaugeFieldSpec, rho: Scalar | None = None,
                           order: GradedOrder = _ORDER) -> DeformedGaugeField:
    """``A_a - (1/2hbar) theta_bs (hbar k_s + rho A_s) d_b A_a`` with free ``k``."""
    rho = hall_coupling() if rho is None else Scalar.coerce(rho)
    d = A.dim
    th = theta_matrix(d)
    ks = [WeylExpr.scalar(d, sym(f"k{i + 1}")) for i in range(d)]
    comps = []
    for al in range(d):
        comp = A.components[al]
        for be in range(d):
            dA = coord_derivative(A.components[al], be)
            if not dA:
                continue
            for s in range(d):
                if not th[be][s]:
                    continue
                shift = ks[s].scale(hbar) + A.components[s].scale(rho)
                comp = comp - mul(shift, dA).scale(th[be][s] / (2 * hbar))
        comps.append(comp.truncate(order))
    return DeformedGaugeField(tuple(comps), "uniform")


def star_shift_phase(rho: Scalar | None = None) -> PhaseResult:
    """Kinetic-momentum construction for the symmetric gauge, for comparison.

    ``Phi = (i rho / hbar) loop(A~ . dr)``; the velocity dependent part of
    ``A~`` is reported in the details.
    """
    rho = hall_coupling() if rho is None else Scalar.coerce(rho)
    A = symmetric_gauge(2)
    f = star_shift_gauge_field(A, rho)
    ks = {"k1", "k2", "k3"}
    k_part = [WeylExpr(2, [(key, Scalar([t for t in cf.terms if ks & {s for s, _ in t[0]}]))
                           for key, cf in comp.terms]) for comp in f.components]
    r_part = DeformedGaugeField(tuple(comp - kp for comp, kp in zip(f.components, k_part)))
    res = loop_phase_flux(r_part, prefactor=I * rho / hbar)
    return PhaseResult("AB", res.base_phase, res.factor, res.absolute,
                       label="comparison: star-shift formulation",
                       details={"gauge_field": [str(x) for x in f.components],
                                "velocity_dependent": [str(x) for x in k_part]})


# -- dipole phases ---------------------------------------------------------------------------

def _dipole_patches(params: dict):
    mu, d = params["mu"], params["d"]
    le, lm = params["lambda_e"], params["lambda_m"]
    s1, s2 = params["s1"], params["s2"]
    patches = []
    if le:
        patches.append(("electric", -mu * le / s1, s1))
    if lm:
        patches.append(("magnetic", d * lm / s2, s2))
    return patches


def anandan_phase(config: str = "anandan", params: dict | None = None,
                  dim: int = 3, theta_zero: bool = False) -> PhaseResult:
    """Anandan phase and its AC / HMW specializations.

    Dipoles along z and radial fields make the problem planar with
    ``F_12 = -mu div E + d div B``, nonzero on two small patches of areas
    ``s1`` (div E = lambda_e/s1) and ``s2`` (div B = lambda_m/s2).  Each patch
    is run through the field-strength-only realization with ``rho = 1/c``;
    its gauge field gives the per-patch deformation ``curl/(rho F) - 1``.  The
    quadratic flux term is combined in factorized form, total flux times the
    sum of patch deformations.
    """
    base = {name: sym(name) for name in ("mu", "d", "lambda_e", "lambda_m", "s1", "s2")}
    if config == "ac":
        base["lambda_e"] = ZERO
    elif config == "hmw":
        base["lambda_m"] = ZERO
    elif config != "anandan":
        raise ValueError(f"unknown dipole configuration {config!r}")
    if params:
        base.update({k: Scalar.coerce(v) for k, v in params.items()})
    rho = 1 / c
    patches = _dipole_patches(base)
    flux = sum((F * area for _, F, area in patches), ZERO)
    base_phase = rho / hbar * flux
    factor = ONE
    details = {}
    for name, F, _ in patches:
        field = symmetric_gauge(dim, F)
        r = build_realization("gauge_invariant", field, coupling=rho)
        if theta_zero:
            r = r.set_zero("theta")
        q = effective_hamiltonian(r)
        g = deformed_gauge_field(q)
        curl = _curl(g)
        if not curl.is_scalar():
            raise NonLinearField("patch field is not uniform")
        deformation = _ORDER.truncate(curl.constant() * reciprocal(rho * F, _ORDER) - 1)
        factor = factor + deformation
        details[name] = {"field_strength": str(F), "deformation": str(deformation)}
    absolute = _ORDER.truncate(base_phase * factor)
    label = {"anandan": "Anandan", "ac": "AC", "hmw": "HMW"}[config]
    return PhaseResult(label, base_phase, _ORDER.truncate(factor), absolute,
                       label="path-integral gauge field, field-strength realization",
                       details=details)
