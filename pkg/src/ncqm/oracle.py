"""Truncated two-mode Fock-space matrices as an independent numerical check.

Coordinates and derivatives are represented by dense ladder matrices,
``x = l (a + a+)/sqrt(2)`` and ``d_x = (a - a+)/(sqrt(2) l)``.  Truncation
spoils the canonical commutator only near the top level, so every residual
is measured on the protected block where both mode indices are below
``protect`` (``N // 2`` by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .landau import CanonicalLandauForm, ladder_operators
from .realization import AlgebraRelations, Realization, target_algebra
from .scalars import substitute_numeric
from .weyl import COORDS, WeylExpr

__all__ = [
    "FockRep",
    "ResidualEntry",
    "ResidualReport",
    "weyl_matrix",
    "realize_numeric",
    "commutator_residual",
    "symbolic_commutator_residual",
    "hamiltonian_matrix",
    "ladder_check",
    "vacuum_occupation",
    "DEFAULT_VALUES",
]

#: Unit parameters used by the acceptance runs.
DEFAULT_VALUES = {"hbar": 1.0, "m": 1.0, "e": 1.0, "c": 1.0, "B": 1.0, "E": 1e-2,
                  "theta": 1e-3, "rho_e": 1.0}


@lru_cache(maxsize=16)
def _mode_matrices(n: int, ell: float):
    a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)
    ad = a.conj().T
    x = ell * (a + ad) / math.sqrt(2)
    d = (a - ad) / (math.sqrt(2) * ell)
    return x, d


class FockRep:
    """Two-mode truncated representation with ``levels`` states per mode."""

    def __init__(self, levels: int = 24, ell: float = 1.0, protect: int | None = None):
        if levels < 4:
            raise ValueError("need at least 4 levels per mode")
        if levels > 64:
            raise ValueError("more than 64 levels per mode is beyond desk scale")
        self.levels = levels
        self.ell = float(ell)
        self.protect = levels // 2 if protect is None else protect
        x1, d1 = _mode_matrices(levels, self.ell)
        self.mode_x, self.mode_d = x1, d1
        eye = np.eye(levels, dtype=complex)
        self.coords = (np.kron(x1, eye), np.kron(eye, x1))
        self.derivs = (np.kron(d1, eye), np.kron(eye, d1))
        self.identity = np.eye(levels * levels, dtype=complex)
        idx = [i * levels + j for i in range(self.protect) for j in range(self.protect)]
        self._block = np.array(idx)
        self._mono = {}

    @classmethod
    def for_values(cls, levels, values, protect=None):
        """Oscillator length ``sqrt(hbar / (m omega))`` with ``omega = eB/mc``."""
        omega = values["e"] * values["B"] / (values["m"] * values["c"])
        return cls(levels, math.sqrt(values["hbar"] / (values["m"] * abs(omega))), protect)

    def mode_monomial(self, r_pow: int, d_pow: int) -> np.ndarray:
        """Single-mode ``x**r_pow @ d**d_pow``."""
        key = (r_pow, d_pow)
        if key not in self._mono:
            self._mono[key] = (np.linalg.matrix_power(self.mode_x, r_pow)
                               @ np.linalg.matrix_power(self.mode_d, d_pow))
        return self._mono[key]

    def monomial(self, r_pow, d_pow) -> np.ndarray:
        """Two-mode ``x^a y^b d_x^c d_y^d``; the modes commute, so it is a Kronecker product."""
        return np.kron(self.mode_monomial(r_pow[0], d_pow[0]),
                       self.mode_monomial(r_pow[1], d_pow[1]))

    def restrict(self, mat: np.ndarray) -> np.ndarray:
        return mat[np.ix_(self._block, self._block)]

    def block_product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Protected block of ``a @ b`` without forming the full product."""
        return a[self._block, :] @ b[:, self._block]

    def block_commutator(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.block_product(a, b) - self.block_product(b, a)

    def max_norm(self, mat: np.ndarray) -> float:
        """Largest entry on the protected block; already restricted input is accepted."""
        if mat.shape[0] != len(self._block):
            mat = self.restrict(mat)
        return float(np.max(np.abs(mat))) if mat.size else 0.0


def weyl_matrix(expr: WeylExpr, values: dict, rep: FockRep) -> np.ndarray:
    """Matrix of a two-dimensional WeylExpr, coordinates multiplied first."""
    if expr.dim != 2:
        raise ValueError("the Fock oracle covers the plane only")
    out = np.zeros_like(rep.identity)
    for (rp, dp), coeff in expr.terms:
        out += substitute_numeric(coeff, values) * rep.monomial(rp, dp)
    return out


def realize_numeric(r: Realization, values: dict, rep: FockRep) -> dict:
    """``{"r_x": ..., "p_y": ...}`` matrices of a planar realization."""
    return {name: weyl_matrix(op, values, rep) for name, op in r.generators()}


@dataclass(frozen=True)
class ResidualEntry:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def as_dict(self):
        return {"name": self.name, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class ResidualReport:
    entries: list = dc_field(default_factory=list)
    tolerance: float = 1e-6

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def by_name(self) -> dict:
        return {e.name: e.residual for e in self.entries}

    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)


def commutator_residual(r: Realization, values: dict, rep: FockRep,
                        target: AlgebraRelations | None = None,
                        tolerance: float = 1e-6) -> ResidualReport:
    """Max-norm of ``[A, B] - target`` on the protected block, per relation."""
    target = target_algebra(r) if target is None else target
    mats = realize_numeric(r, values, rep)
    names = COORDS[:2]
    report = ResidualReport(tolerance=tolerance)

    def add(name, lhs, rhs):
        rhs_m = weyl_matrix(rhs if isinstance(rhs, WeylExpr) else WeylExpr.scalar(2, rhs),
                            values, rep)
        report.entries.append(ResidualEntry(name, rep.max_norm(lhs - rep.restrict(rhs_m)),
                                            tolerance))

    comm = rep.block_commutator
    for a in range(2):
        for b in range(2):
            ra, rb = f"r_{names[a]}", f"r_{names[b]}"
            pa, pb = f"p_{names[a]}", f"p_{names[b]}"
            if a < b:
                add(f"[{ra},{rb}]", comm(mats[ra], mats[rb]), target.rr[a][b])
                add(f"[{pa},{pb}]", comm(mats[pa], mats[pb]), target.pp[a][b])
            add(f"[{ra},{pb}]", comm(mats[ra], mats[pb]), target.rp[a][b])
            add(f"[{pa},{rb}]", comm(mats[pa], mats[rb]), target.pr[a][b])
    return report


def symbolic_commutator_residual(r: Realization, values: dict, rep: FockRep,
                                 tolerance: float = 1e-6) -> ResidualReport:
    """Numeric commutators against the symbolic engine's own commutators.

    The symbolic side is truncated at first order in theta only, so this
    compares the two routes without any coupling-order grading.
    """
    from .weyl import commutator
    order = r.order.without_joint()
    mats = realize_numeric(r, values, rep)
    gens = r.generators()
    report = ResidualReport(tolerance=tolerance)
    for i, (na, a) in enumerate(gens):
        for nb, b in gens[i + 1:]:
            sym_m = rep.restrict(weyl_matrix(commutator(a, b, order), values, rep))
            num = rep.block_commutator(mats[na], mats[nb])
            report.entries.append(ResidualEntry(f"[{na},{nb}]", rep.max_norm(num - sym_m),
                                                tolerance))
    return report


def hamiltonian_matrix(r: Realization, values: dict, rep: FockRep,
                       block: bool = False) -> np.ndarray:
    """``(p_x p_x + p_y p_y)/2m + eE x`` multiplied out as matrices.

    No symbolic truncation is involved, so the matrix carries whatever
    second-order content the realization itself has.  With ``block`` only
    the protected block is formed.
    """
    mats = realize_numeric(r, values, rep)
    prod = rep.block_product if block else np.matmul
    kinetic = prod(mats["p_x"], mats["p_x"]) + prod(mats["p_y"], mats["p_y"])
    rx = rep.restrict(mats["r_x"]) if block else mats["r_x"]
    return kinetic / (2 * values["m"]) + values["e"] * values["E"] * rx


def ladder_check(form: CanonicalLandauForm, values: dict, rep: FockRep,
                 realization: Realization | None = None,
                 tolerance: float = 1e-6) -> ResidualReport:
    """Ladder algebra of ``b, d`` and, when given, reconstruction of ``H``.

    The reconstruction compares ``(b b+ + b+ b)/4m - (lambda_+/2m)(d + d+)
    - lambda_-**2/2m`` against the Hamiltonian assembled from the matrices
    of ``realization``.
    """
    b, bd, d, dd = (weyl_matrix(op, values, rep) for op in ladder_operators(form))
    comm_bb = substitute_numeric(form.comm_bb, values)
    eye = rep.restrict(rep.identity)
    comm = rep.block_commutator
    report = ResidualReport(tolerance=tolerance)

    def add(name, mat):
        report.entries.append(ResidualEntry(name, rep.max_norm(mat), tolerance))

    add("[b,b+] - 2m hbar gamma beta omega", comm(b, bd) - comm_bb * eye)
    add("[d,d+] + 2m hbar gamma beta omega", comm(d, dd) + comm_bb * eye)
    add("[b,d]", comm(b, d))
    add("[b,d+]", comm(b, dd))
    if realization is not None:
        m = values["m"]
        lp = substitute_numeric(form.lambda_plus, values)
        lm = substitute_numeric(form.lambda_minus, values)
        hg = ((rep.block_product(b, bd) + rep.block_product(bd, b)) / (4 * m)
              - lp / (2 * m) * rep.restrict(d + dd) - lm * lm / (2 * m) * eye)
        add("H - ladder form", hamiltonian_matrix(realization, values, rep, block=True) - hg)
    return report


def vacuum_occupation(form: CanonicalLandauForm, values: dict, levels: int = 24) -> float:
    """``<0| b+ b |0>`` in the Fock vacuum whose length matches ``b``.

    With ``l**2 = gamma / k`` the operator ``b - lambda_-`` is proportional to
    ``a_x - i a_y``, so the two-mode vacuum is annihilated when
    ``lambda_- = 0``.
    """
    g = substitute_numeric(form.gamma, values).real
    k = substitute_numeric(form.k, values).real
    rep = FockRep(levels, math.sqrt(g / k))
    b, bd, _, _ = (weyl_matrix(op, values, rep) for op in ladder_operators(form))
    return float(abs((bd @ b)[0, 0]))
