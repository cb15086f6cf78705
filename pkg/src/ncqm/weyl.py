"""Normal-ordered differential operators with Scalar coefficients.

A :class:`WeylExpr` is a polynomial in coordinates ``r_a`` and partial
derivatives ``d_a`` stored with every coordinate to the left of every
derivative.  Products are brought back to that form by the Leibniz rule
``d_a r_b = r_b d_a + delta_ab``.
"""

from __future__ import annotations

import itertools
from math import comb, perm

from .scalars import I, ONE, ZERO, GradedOrder, Scalar, sym

__all__ = [
    "COORDS",
    "DimensionMismatch",
    "WeylExpr",
    "ClassicalPoly",
    "GaugeFieldSpec",
    "Region",
    "normal_order",
    "mul",
    "commutator",
    "classicalize",
    "adjoint",
    "coord_derivative",
    "apply_to",
    "symmetric_gauge",
    "solenoid_field",
]

COORDS = ("x", "y", "z")


class DimensionMismatch(ValueError):
    pass


def _zero_index(dim):
    return (0,) * dim


def _unit(dim, a):
    return tuple(1 if i == a else 0 for i in range(dim))


class WeylExpr:
    """Normal-ordered operator ``sum coeff * r**r_pow * d**d_pow``."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms=None):
        if dim not in (1, 2, 3):
            raise ValueError(f"unsupported dimension {dim}")
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for (rp, dp), c in items:
                if len(rp) != dim or len(dp) != dim:
                    raise DimensionMismatch("multi-index length does not match dim")
                c = Scalar.coerce(c)
                key = (tuple(rp), tuple(dp))
                clean[key] = clean[key] + c if key in clean else c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", tuple(sorted(
            ((k, c) for k, c in clean.items() if not c.is_zero()),
            key=lambda t: (sum(t[0][0]) + sum(t[0][1]), t[0][1], t[0][0]))))

    def __setattr__(self, name, value):
        raise AttributeError("WeylExpr is immutable")

    # -- constructors --------------------------------------------------------
    @classmethod
    def scalar(cls, dim, s) -> "WeylExpr":
        z = _zero_index(dim)
        return cls(dim, {(z, z): Scalar.coerce(s)})

    @classmethod
    def coord(cls, dim, a) -> "WeylExpr":
        return cls(dim, {(_unit(dim, a), _zero_index(dim)): ONE})

    @classmethod
    def deriv(cls, dim, a) -> "WeylExpr":
        return cls(dim, {(_zero_index(dim), _unit(dim, a)): ONE})

    @classmethod
    def momentum(cls, dim, a) -> "WeylExpr":
        """``-i*hbar*d_a``."""
        return cls(dim, {(_zero_index(dim), _unit(dim, a)): -I * sym("hbar")})

    @classmethod
    def zero(cls, dim) -> "WeylExpr":
        return cls(dim)

    # -- inspection ----------------------------------------------------------
    @property
    def terms(self):
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, r_pow, d_pow) -> Scalar:
        key = (tuple(r_pow), tuple(d_pow))
        for k, c in self._terms:
            if k == key:
                return c
        return ZERO

    def constant(self) -> Scalar:
        z = _zero_index(self.dim)
        return self.coefficient(z, z)

    def r_degree(self) -> int:
        return max((sum(rp) for (rp, _), _ in self._terms), default=0)

    def d_degree(self) -> int:
        return max((sum(dp) for (_, dp), _ in self._terms), default=0)

    def is_coordinate_poly(self) -> bool:
        return all(not any(dp) for (_, dp), _ in self._terms)

    def is_scalar(self) -> bool:
        return all(not any(rp) and not any(dp) for (rp, dp), _ in self._terms)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other):
        if isinstance(other, WeylExpr):
            if other.dim != self.dim:
                raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")
            return other
        return WeylExpr.scalar(self.dim, other)

    def __eq__(self, other):
        if not isinstance(other, WeylExpr):
            try:
                other = WeylExpr.scalar(self.dim, other)
            except TypeError:
                return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, self._terms))

    def __neg__(self):
        return WeylExpr(self.dim, {k: -c for k, c in self._terms})

    def __add__(self, other):
        try:
            other = self._check(other)
        except TypeError:
            return NotImplemented
        return WeylExpr(self.dim, list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._check(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, WeylExpr):
            return mul(self, other)
        try:
            s = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(s)

    def __rmul__(self, other):
        try:
            s = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(s)

    def scale(self, s) -> "WeylExpr":
        s = Scalar.coerce(s)
        return WeylExpr(self.dim, {k: s * c for k, c in self._terms})

    def truncate(self, order: GradedOrder | None) -> "WeylExpr":
        if order is None:
            return self
        return WeylExpr(self.dim, {k: order.truncate(c) for k, c in self._terms})

    def map_coefficients(self, fn) -> "WeylExpr":
        return WeylExpr(self.dim, {k: fn(c) for k, c in self._terms})

    def set_zero(self, symbol: str) -> "WeylExpr":
        return self.map_coefficients(lambda c: c.set_zero(symbol))

    def __repr__(self):
        return f"WeylExpr({self.dim}, {str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (rp, dp), c in self._terms:
            factors = []
            for a, k in enumerate(rp):
                if k:
                    factors.append(COORDS[a] if k == 1 else f"{COORDS[a]}^{k}")
            for a, k in enumerate(dp):
                if k:
                    name = f"d_{COORDS[a]}"
                    factors.append(name if k == 1 else f"{name}^{k}")
            cs = str(c)
            if not factors:
                parts.append(f"({cs})")
            elif c == ONE:
                parts.append("*".join(factors))
            else:
                parts.append(f"({cs})*" + "*".join(factors))
        return " + ".join(parts)


def _term_product(ra, da, rb, db):
    """Normal-order ``r^ra d^da r^rb d^db``; yields ``(count, r_pow, d_pow)``."""
    ranges = [range(min(x, y) + 1) for x, y in zip(da, rb)]
    for ks in itertools.product(*ranges):
        n = 1
        for k, x, y in zip(ks, da, rb):
            n *= comb(x, k) * perm(y, k)
        r = tuple(a + b - k for a, b, k in zip(ra, rb, ks))
        d = tuple(a + b - k for a, b, k in zip(da, db, ks))
        yield n, r, d


def mul(a: WeylExpr, b: WeylExpr, order: GradedOrder | None = None) -> WeylExpr:
    """Normal-ordered product ``a*b``, optionally truncated."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dim {a.dim} vs {b.dim}")
    acc = {}
    for (ra, da), ca in a.terms:
        for (rb, db), cb in b.terms:
            c = ca * cb
            if order is not None:
                c = order.truncate(c)
                if c.is_zero():
                    continue
            for n, r, d in _term_product(ra, da, rb, db):
                key = (r, d)
                term = c * n
                acc[key] = acc[key] + term if key in acc else term
    return WeylExpr(a.dim, acc)


def commutator(a: WeylExpr, b: WeylExpr, order: GradedOrder | None = None) -> WeylExpr:
    return mul(a, b, order) - mul(b, a, order)


def normal_order(factors, dim: int, order: GradedOrder | None = None) -> WeylExpr:
    """Normal-order a product of generators.

    ``factors`` holds ``("r", a)``, ``("d", a)``, Scalars/ints, or WeylExprs.
    """
    out = WeylExpr.scalar(dim, ONE)
    for f in factors:
        if isinstance(f, tuple):
            kind, a = f
            if not 0 <= a < dim:
                raise DimensionMismatch(f"index {a} outside dim {dim}")
            f = WeylExpr.coord(dim, a) if kind == "r" else WeylExpr.deriv(dim, a)
        elif not isinstance(f, WeylExpr):
            f = WeylExpr.scalar(dim, f)
        out = mul(out, f, order)
    return out


def coord_derivative(f: WeylExpr, a: int) -> WeylExpr:
    """Derivative of the coefficient functions with respect to ``r_a``."""
    return commutator(WeylExpr.deriv(f.dim, a), f)


def adjoint(h: WeylExpr) -> WeylExpr:
    """Formal adjoint: ``r^dagger = r``, ``d^dagger = -d``, ``i -> -i``."""
    out = WeylExpr.zero(h.dim)
    z = _zero_index(h.dim)
    for (rp, dp), c in h.terms:
        sign = -1 if sum(dp) % 2 else 1
        left = WeylExpr(h.dim, {(z, dp): c.conjugate() * sign})
        right = WeylExpr(h.dim, {(rp, z): ONE})
        out = out + mul(left, right)
    return out


def apply_to(h: WeylExpr, f: WeylExpr) -> WeylExpr:
    """Action of the operator ``h`` on the coordinate polynomial ``f``."""
    if not f.is_coordinate_poly():
        raise ValueError("operand must be a coordinate polynomial")
    out = WeylExpr.zero(h.dim)
    for (rp, dp), c in h.terms:
        g = f
        for a, k in enumerate(dp):
            for _ in range(k):
                g = coord_derivative(g, a)
        out = out + WeylExpr(h.dim, {(rp, _zero_index(h.dim)): c}) * g
    return out


class ClassicalPoly:
    """Commuting polynomial in ``(r, p)`` keyed by ``(r_pow, p_pow)``."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", {k: c for k, c in terms.items() if not c.is_zero()})

    def __setattr__(self, name, value):
        raise AttributeError("ClassicalPoly is immutable")

    def coefficient(self, r_pow, p_pow) -> Scalar:
        return self.terms.get((tuple(r_pow), tuple(p_pow)), ZERO)

    def p_degree(self) -> int:
        return max((sum(pp) for _, pp in self.terms), default=0)

    def part(self, p_pow) -> WeylExpr:
        """Coordinate polynomial multiplying ``p**p_pow``."""
        z = _zero_index(self.dim)
        p_pow = tuple(p_pow)
        return WeylExpr(self.dim, {(rp, z): c for (rp, pp), c in self.terms.items()
                                   if pp == p_pow})

    def __eq__(self, other):
        return isinstance(other, ClassicalPoly) and self.dim == other.dim \
            and self.terms == other.terms


def classicalize(h: WeylExpr) -> ClassicalPoly:
    """Replace ``d**n`` by ``(i/hbar)**|n| * p**n`` term by term."""
    i_over_hbar = I / sym("hbar")
    terms = {}
    for (rp, dp), c in h.terms:
        terms[(rp, dp)] = c * i_over_hbar ** sum(dp)
    return ClassicalPoly(h.dim, terms)


# -- gauge fields ----------------------------------------------------------------

class Region:
    """Region of constant field strength.

    ``components`` is None where the gauge field is not polynomial (pure
    flux outside a solenoid).
    """

    __slots__ = ("name", "field_strength", "components")

    def __init__(self, name, field_strength, components=None):
        self.name = name
        self.field_strength = field_strength
        self.components = components

    def __repr__(self):
        return f"Region({self.name!r})"


class GaugeFieldSpec:
    """Polynomial gauge field with its field strength.

    The commutator term of the field strength vanishes identically since
    every coefficient is a commuting Scalar; non-Abelian fields would
    re-enter there.

    Parameters
    ----------
    components : sequence of WeylExpr
        Coordinate polynomials ``A_a``.
    regions : sequence of Region, optional
        Region-tagged constant field strengths for piecewise configurations.
    boundary : str, optional
        Human-readable locus excluded from the condition check.
    """

    def __init__(self, components, regions=None, boundary=None):
        components = tuple(components)
        dim = len(components)
        for comp in components:
            if comp.dim != dim:
                raise DimensionMismatch("component dimension does not match count")
            if not comp.is_coordinate_poly():
                raise ValueError("gauge components must be coordinate polynomials")
        self.dim = dim
        self.components = components
        self.field_strength = tuple(
            tuple(coord_derivative(components[b], a) - coord_derivative(components[a], b)
                  for b in range(dim))
            for a in range(dim))
        self.regions = tuple(regions) if regions else None
        self.boundary = boundary

    def is_constant(self) -> bool:
        return all(F.is_scalar() for row in self.field_strength for F in row)

    def constant_field_strength(self):
        """Field strength as a matrix of Scalars; requires a constant field."""
        if not self.is_constant():
            raise ValueError("field strength is coordinate dependent")
        return tuple(tuple(F.constant() for F in row) for row in self.field_strength)


def symmetric_gauge(dim: int = 2, field=None) -> GaugeFieldSpec:
    """``A_i = -(F/2) eps_ij r_j`` in the (x, y) plane, giving ``F_12 = F``."""
    F = sym("B") if field is None else Scalar.coerce(field)
    half = F / 2
    comps = [WeylExpr.zero(dim) for _ in range(dim)]
    comps[0] = WeylExpr.coord(dim, 1).scale(-half)
    comps[1] = WeylExpr.coord(dim, 0).scale(half)
    return GaugeFieldSpec(comps)


def solenoid_field() -> GaugeFieldSpec:
    """Thin solenoid along z: uniform ``F_12 = B`` inside, zero outside."""
    inner = symmetric_gauge(2)
    zero = tuple(tuple(ZERO for _ in range(2)) for _ in range(2))
    regions = (
        Region("inside", inner.constant_field_strength(), inner.components),
        Region("outside", zero, None),
    )
    return GaugeFieldSpec(inner.components, regions=regions, boundary="|r| = R_s")
