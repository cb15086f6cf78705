"""Exact arithmetic over the formal-parameter ring.

A :class:`Scalar` is a finite sum of Gaussian-rational coefficients times
Laurent monomials in a fixed table of physical symbols.  Everything on the
symbolic path of the package is built from these values; no floats are ever
stored.

Canonical text rendering
------------------------
``str(Scalar)`` follows this grammar, and the same grammar is accepted back
by :func:`ncqm.fielddsl.parse_scalar`::

    scalar   := "0" | term (sep term)*
    sep      := " + " | " - "
    term     := coeff | [coeff "*"] monomial
    coeff    := rational | rational "*i" | "i" | "(" rational sign rational "*i)"
    rational := int | int "/" int
    monomial := power ("*" power)*
    power    := symbol | symbol "^" int

Terms appear in canonical order: monomials are compared as tuples of
``(symbol index, exponent)`` pairs, symbol indices following
:data:`SYMBOLS`.  The empty monomial (a pure number) therefore comes first.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "SYMBOLS",
    "DERIVED",
    "GaussianRational",
    "Scalar",
    "GradedOrder",
    "ScalarError",
    "NotPerturbativelyInvertible",
    "NotPerfectSquareLeading",
    "UnboundSymbol",
    "sym",
    "const",
    "I",
    "ONE",
    "ZERO",
    "expand_derived",
    "contract_derived",
    "reciprocal",
    "perturbative_sqrt",
    "substitute_numeric",
]

#: Fixed symbol table.  ``rho`` is the gauge coupling, ``rho_e`` the electron
#: density, ``s1``/``s2`` the patch areas of the dipole model, ``S`` the
#: solenoid cross-section, ``k1..k3`` kinetic-momentum eigenvalues and ``n``
#: the Landau-level index used for number-state expectation values.
SYMBOLS = (
    "hbar", "theta", "e", "c", "B", "E", "m", "rho", "rho_e", "omega",
    "kappa", "lambda", "mu", "d", "lambda_e", "lambda_m", "s1", "s2", "S",
    "k1", "k2", "k3", "n",
)
_INDEX = {name: i for i, name in enumerate(SYMBOLS)}


class ScalarError(ValueError):
    """Base class for errors raised by the scalar ring."""


class NotPerturbativelyInvertible(ScalarError):
    pass


class NotPerfectSquareLeading(ScalarError):
    pass


class UnboundSymbol(ScalarError, KeyError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return cls(x)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


# -- monomials ---------------------------------------------------------------
# A monomial is a tuple of (symbol, exponent) pairs sorted by symbol index,
# with no zero exponents.

def _check_symbol(name: str) -> None:
    if name not in _INDEX:
        raise KeyError(f"unknown symbol {name!r}")


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for s, k in b:
        exps[s] = exps.get(s, 0) + k
    return tuple(sorted(((s, k) for s, k in exps.items() if k),
                        key=lambda p: _INDEX[p[0]]))


def _canonical_mono(a: tuple) -> tuple:
    """Drop zero exponents, merge repeats and sort by symbol index."""
    if all(k for _, k in a) and all(_INDEX[x[0]] < _INDEX[y[0]] for x, y in zip(a, a[1:])):
        return a
    exps = {}
    for s, k in a:
        exps[s] = exps.get(s, 0) + k
    return tuple(sorted(((s, k) for s, k in exps.items() if k), key=lambda p: _INDEX[p[0]]))


def _mono_pow(a: tuple, n: int) -> tuple:
    if n == 0:
        return ()
    return tuple((s, k * n) for s, k in a)


def _mono_key(a: tuple) -> tuple:
    return tuple((_INDEX[s], k) for s, k in a)


def _mono_str(a: tuple) -> str:
    return "*".join(s if k == 1 else f"{s}^{k}" for s, k in a)


class Scalar:
    """Immutable element of the formal-parameter ring.

    Build values with :func:`sym` and :func:`const` and ordinary arithmetic
    operators.  ``int`` and ``Fraction`` operands are coerced.  Division is
    only defined by a single-term divisor; general inverses go through
    :func:`reciprocal`.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        # terms: mapping monomial -> GaussianRational (zero entries dropped)
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for mono, coeff in items:
                coeff = GaussianRational.coerce(coeff)
                if coeff:
                    mono = _canonical_mono(mono)
                    clean[mono] = clean.get(mono, GaussianRational()) + coeff
            clean = {m: c for m, c in clean.items() if c}
        object.__setattr__(self, "_terms",
                           tuple(sorted(clean.items(), key=lambda t: _mono_key(t[0]))))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, GaussianRational):
            return cls({(): x})
        return cls({(): GaussianRational(x)})

    @property
    def terms(self):
        """Canonical tuple of ``(monomial, coefficient)`` pairs."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def symbols(self) -> set:
        return {s for mono, _ in self._terms for s, _ in mono}

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    def constant_term(self) -> GaussianRational:
        for mono, c in self._terms:
            if not mono:
                return c
        return GaussianRational()

    def coefficient(self, monomial: dict) -> GaussianRational:
        key = tuple(sorted(((s, k) for s, k in monomial.items() if k),
                           key=lambda p: _INDEX[p[0]]))
        for mono, c in self._terms:
            if mono == key:
                return c
        return GaussianRational()

    # -- ring operations -----------------------------------------------------
    def __eq__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._terms))
        return self._hash

    def __neg__(self):
        return Scalar({m: -c for m, c in self._terms})

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        for m, c in other._terms:
            acc[m] = acc[m] + c if m in acc else c
        return Scalar(acc)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        acc = {}
        for ma, ca in self._terms:
            for mb, cb in other._terms:
                m = _mono_mul(ma, mb)
                c = ca * cb
                acc[m] = acc[m] + c if m in acc else c
        return Scalar(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_single_term():
                raise ScalarError("negative power of a multi-term Scalar; use reciprocal()")
            (mono, c), = self._terms
            inv = c.inverse()
            return Scalar({_mono_pow(mono, n): _gr_pow(inv, -n)})
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        other = Scalar.coerce(other)
        if not other.is_single_term():
            raise ScalarError("division by a multi-term Scalar; use reciprocal()")
        return self * other ** -1

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def conjugate(self) -> "Scalar":
        """Complex conjugate; all symbols are real."""
        return Scalar({m: c.conjugate() for m, c in self._terms})

    def map_terms(self, fn) -> "Scalar":
        """Rebuild from ``fn(monomial, coeff) -> Scalar`` applied to each term."""
        out = ZERO
        for m, c in self._terms:
            out = out + fn(m, c)
        return out

    def substitute(self, values: dict) -> "Scalar":
        """Replace symbols by Scalars.

        Negative exponents require a single-term replacement.
        """
        def one(mono, coeff):
            acc = Scalar({(): coeff})
            rest = []
            for s, k in mono:
                if s in values:
                    acc = acc * Scalar.coerce(values[s]) ** k
                else:
                    rest.append((s, k))
            return acc * Scalar({tuple(rest): 1})
        return self.map_terms(one)

    def set_zero(self, symbol: str) -> "Scalar":
        """Drop every term carrying ``symbol`` (directly or through a derived symbol)."""
        return Scalar({m: c for m, c in self._terms if _degree(m, symbol) == 0})

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self._terms:
            neg = False
            if not c.im and c.re < 0:
                neg, c = True, -c
            elif not c.re and c.im < 0:
                neg, c = True, -c
            if not mono:
                body = str(c)
            elif c == 1:
                body = _mono_str(mono)
            else:
                body = f"{c}*{_mono_str(mono)}"
            parts.append((neg, body))
        first_neg, first = parts[0]
        out = ("-" if first_neg else "") + first
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out


def _gr_pow(c: GaussianRational, n: int) -> GaussianRational:
    out = GaussianRational(1)
    for _ in range(n):
        out = out * c
    return out


def sym(name: str) -> Scalar:
    """The Scalar consisting of the single symbol ``name``."""
    _check_symbol(name)
    return Scalar({((name, 1),): 1})


def const(re=0, im=0) -> Scalar:
    return Scalar({(): GaussianRational(re, im)})


ONE = Scalar({(): 1})
ZERO = Scalar()
I = Scalar({(): GaussianRational(0, 1)})


# -- derived symbols ---------------------------------------------------------

def _build_derived():
    e, th, hb, c, B, m, E = (sym(s) for s in ("e", "theta", "hbar", "c", "B", "m", "E"))
    return {
        "kappa": e * th * B / (4 * hb * c),
        "lambda": m * c * E / B,
        "omega": e * B / (m * c),
    }


#: Expansion of each derived symbol into primitive symbols.
DERIVED = _build_derived()

# content[derived][primitive] = exponent of primitive inside one derived symbol
_CONTENT = {name: dict(val.terms[0][0]) for name, val in DERIVED.items()}


def _degree(mono: tuple, symbol: str) -> int:
    """Degree of ``symbol`` in a monomial, counting derived-symbol content."""
    deg = 0
    for s, k in mono:
        if s == symbol:
            deg += k
        elif s in _CONTENT:
            deg += k * _CONTENT[s].get(symbol, 0)
    return deg


def expand_derived(s: Scalar) -> Scalar:
    """Rewrite ``kappa``, ``lambda`` and ``omega`` in primitive symbols."""
    if not (s.symbols() & DERIVED.keys()):
        return s
    return s.substitute(DERIVED)


def contract_derived(s: Scalar) -> Scalar:
    """Re-express a primitive Scalar through ``kappa`` and ``lambda``.

    Every power of ``theta`` is traded for ``kappa`` and every power of ``E``
    for ``lambda``; the remaining cofactors stay explicit.  This is the
    inverse of :func:`expand_derived` on the span where such a rewrite is
    exact, and is what the Table 1 report uses for display.
    """
    s = expand_derived(s)
    per_theta = sym("kappa") * 4 * sym("hbar") * sym("c") / (sym("e") * sym("B"))
    per_E = sym("lambda") * sym("B") / (sym("m") * sym("c"))
    return s.substitute({"theta": per_theta, "E": per_E})


# -- grading -------------------------------------------------------------------

class GradedOrder:
    """Perturbative truncation policy.

    Parameters
    ----------
    caps : dict, optional
        ``symbol -> max degree``.  Defaults to ``{"theta": 1}``.  Degrees count
        derived symbols through their expansion, so ``kappa`` has theta-degree 1.
    joint_caps : iterable of (symbols, max_degree), optional
        A term is dropped when the summed degree of the listed symbols exceeds
        ``max_degree``.  ``({"e", "rho", "theta"}, 2)`` removes the
        ``e**2 * theta`` contributions while keeping ``e * theta``.
    """

    __slots__ = ("caps", "joint_caps")

    def __init__(self, caps=None, joint_caps=()):
        caps = {"theta": 1} if caps is None else dict(caps)
        for s in caps:
            _check_symbol(s)
        object.__setattr__(self, "caps", tuple(sorted(caps.items(), key=lambda p: _INDEX[p[0]])))
        jc = []
        for syms, k in joint_caps:
            syms = frozenset(syms)
            for s in syms:
                _check_symbol(s)
            jc.append((syms, int(k)))
        object.__setattr__(self, "joint_caps",
                           tuple(sorted(jc, key=lambda p: (sorted(p[0]), p[1]))))

    def __setattr__(self, name, value):
        raise AttributeError("GradedOrder is immutable")

    @classmethod
    def unbounded(cls) -> "GradedOrder":
        return cls(caps={})

    def without_joint(self) -> "GradedOrder":
        return GradedOrder(dict(self.caps))

    def __eq__(self, other):
        return (isinstance(other, GradedOrder) and self.caps == other.caps
                and self.joint_caps == other.joint_caps)

    def __hash__(self):
        return hash((self.caps, self.joint_caps))

    def __repr__(self):
        jc = [(sorted(s), k) for s, k in self.joint_caps]
        return f"GradedOrder(caps={dict(self.caps)}, joint_caps={jc})"

    def describe(self) -> dict:
        return {"caps": dict(self.caps),
                "joint_caps": [[sorted(s), k] for s, k in self.joint_caps]}

    def keeps(self, mono: tuple) -> bool:
        for s, k in self.caps:
            if _degree(mono, s) > k:
                return False
        for syms, k in self.joint_caps:
            if sum(_degree(mono, s) for s in syms) > k:
                return False
        return True

    def graded_degree(self, mono: tuple) -> int:
        """Total degree of ``mono`` in the capped symbols."""
        return sum(_degree(mono, s) for s, _ in self.caps)

    def truncate(self, s: Scalar) -> Scalar:
        return Scalar({m: c for m, c in s.terms if self.keeps(m)})


def _split_leading(s: Scalar, order: GradedOrder):
    """Return ``(lead, eps)`` with ``s = lead * (1 + eps)``, or None."""
    if s.is_zero():
        return None
    if not order.caps:
        if s.is_single_term():
            return s, ZERO
        return None
    lead_terms = []
    for mono, c in s.terms:
        degs = [_degree(mono, sy) for sy, _ in order.caps]
        if any(d < 0 for d in degs):
            return None
        if not any(degs):
            lead_terms.append((mono, c))
    if len(lead_terms) != 1:
        return None
    lead = Scalar(lead_terms)
    eps = s / lead - ONE
    return lead, eps


def _series(eps: Scalar, coeffs, order: GradedOrder) -> Scalar:
    """Truncated ``sum_k coeffs(k) * eps**k``."""
    out = ONE
    power = ONE
    k = 1
    while True:
        power = order.truncate(power * eps)
        if power.is_zero():
            return out
        out = out + coeffs(k) * power
        k += 1
        if k > 64:  # eps not nilpotent under this order
            raise NotPerturbativelyInvertible("series did not terminate under the grading")


def reciprocal(s: Scalar, order: GradedOrder | None = None) -> Scalar:
    """Perturbative inverse of ``s = c0*M*(1 + eps)``, truncated by ``order``."""
    order = GradedOrder() if order is None else order
    split = _split_leading(s, order)
    if split is None:
        raise NotPerturbativelyInvertible(f"no dominant single term in {s}")
    lead, eps = split
    series = _series(eps, lambda k: (-1) ** k, order)
    return order.truncate(lead ** -1 * series)


def _binom_half(k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= (Fraction(1, 2) - j) / (j + 1)
    return out


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q <= 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def perturbative_sqrt(s: Scalar, order: GradedOrder | None = None) -> Scalar:
    """Square root of ``s = c0*M*(1 + eps)`` on the positive branch."""
    order = GradedOrder() if order is None else order
    split = _split_leading(s, order)
    if split is None:
        raise NotPerfectSquareLeading(f"no dominant single term in {s}")
    lead, eps = split
    (mono, c), = lead.terms
    root = _rational_sqrt(c.re) if not c.im else None
    if root is None or any(k % 2 for _, k in mono):
        raise NotPerfectSquareLeading(f"leading term of {s} is not a perfect square")
    lead_root = Scalar({tuple((sy, k // 2) for sy, k in mono): root})
    return order.truncate(lead_root * _series(eps, _binom_half, order))


def substitute_numeric(s: Scalar, values: dict) -> complex:
    """Evaluate ``s`` at floating values; derived symbols are expanded first."""
    s = expand_derived(s)
    total = 0j
    for mono, c in s.terms:
        term = complex(c)
        for name, k in mono:
            if name not in values:
                raise UnboundSymbol(name)
            term *= complex(values[name]) ** k
        total += term
    return total
