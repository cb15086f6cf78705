"""Command-line front end: ``ncqm verify | table1 | phase``.

Every run is fully determined by its flags (or a JSON config file with the
same keys); reports go to stdout and the exit status is 0 only when every
check passed.  Status 2 signals a configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, fields

from . import landau, oracle, phases
from .fielddsl import DSLError, parse_field
from .realization import (HALL_KINDS, KINDS, ConditionsViolated, ConfigError, UnsupportedField,
                          build_realization, check_conditions, verify_algebra, verify_jacobi)
from .report import Check, Report, numeric_check, symbolic_check
from .scalars import DERIVED, ONE, SYMBOLS, GradedOrder, expand_derived, substitute_numeric, sym
from .weyl import symmetric_gauge

__all__ = ["RunConfig", "cmd_verify", "cmd_table1", "cmd_phase", "build_parser", "main"]

PHASE_CONFIGS = ("ab", "anandan", "ac", "hmw", "star-shift-ab")
AB_REALIZATIONS = ("hall_1", "hall_2", "hall_3", "gauge_invariant")

hbar, e, c, B, theta = (sym(s) for s in ("hbar", "e", "c", "B", "theta"))
mu, d, lam_e, lam_m, s1, s2 = (sym(s) for s in ("mu", "d", "lambda_e", "lambda_m", "s1", "s2"))

#: Published AB deformation factors per realization.
AB_FACTORS = {
    "hall_1": 1 + e * theta * B / (2 * hbar * c),
    "hall_2": ONE,
    "gauge_invariant": 1 + e * theta * B / (hbar * c),
}

#: Published dipole phases: (undeformed phase, deformed phase).
_A0 = -(mu * lam_e - d * lam_m) / (hbar * c)
DIPOLE_PHASES = {
    "anandan": (_A0, _A0 * (1 + theta * (mu * lam_e / (hbar * c * s1)
                                         - d * lam_m / (hbar * c * s2)))),
    "ac": (d * lam_m / (hbar * c), d * lam_m / (hbar * c) * (1 - theta * d * lam_m / (hbar * c * s2))),
    "hmw": (-mu * lam_e / (hbar * c),
            -mu * lam_e / (hbar * c) * (1 + theta * mu * lam_e / (hbar * c * s1))),
}


_SHARED = {"command", "theta", "params", "tolerance", "format"}
_RUN_KEYS = {
    "verify": _SHARED | {"kind", "levels", "keep_e2", "field"},
    "table1": _SHARED | {"expand"},
    "phase": _SHARED | {"config", "realization", "contour_samples", "contour_radius",
                        "solenoid_radius"},
}


@dataclass
class RunConfig:
    """Everything a run depends on.  ``theta`` is numeric; 0 also zeroes it symbolically."""

    command: str
    kind: str = "hall_2"
    theta: float | None = None
    params: dict = field(default_factory=dict)
    levels: int = 24
    contour_samples: int = 10_000
    contour_radius: float = 2.0
    solenoid_radius: float = 1.0
    tolerance: float | None = None
    format: str = "json"
    expand: bool = False
    keep_e2: bool | None = None
    realization: str = "hall_1"
    config: str = "ab"
    field: str | None = None

    def as_dict(self):
        """Keys relevant to the command, unset options omitted."""
        keep = _RUN_KEYS[self.command]
        return {k: v for k, v in sorted(asdict(self).items()) if k in keep and v is not None}

    @property
    def theta_zero(self) -> bool:
        return self.theta == 0

    def values(self) -> dict:
        vals = dict(oracle.DEFAULT_VALUES)
        vals.update(self.params)
        if self.theta is not None:
            vals["theta"] = self.theta
        return vals

    def validate(self):
        if self.format not in ("json", "text"):
            raise ConfigError(f"unknown format {self.format!r}")
        for k in self.params:
            if k not in SYMBOLS or k in DERIVED:
                raise ConfigError(f"unknown or derived parameter {k!r}")
        if self.command == "verify":
            if self.kind not in KINDS:
                raise ConfigError(f"unknown realization kind {self.kind!r}")
            if self.kind == "hall_1" and self.keep_e2:
                raise ConfigError("hall_1 drops the e^2 theta terms; --keep-e2 contradicts it")
            if self.kind == "hall_2" and self.keep_e2 is False:
                raise ConfigError("hall_2 keeps the e^2 theta terms; --drop-e2 contradicts it")
            if self.field and self.kind in HALL_KINDS:
                raise ConfigError("Hall realizations fix the symmetric gauge; drop --field")
            if not 4 <= self.levels <= 64:
                raise ConfigError("levels per mode must lie in [4, 64]")
        if self.command == "phase":
            if self.config not in PHASE_CONFIGS:
                raise ConfigError(f"unknown phase configuration {self.config!r}; "
                                  f"choose from {', '.join(PHASE_CONFIGS)}")
            if self.realization not in AB_REALIZATIONS:
                raise ConfigError(f"unknown AB realization {self.realization!r}")
            if self.contour_samples < 8:
                raise ConfigError("contour needs at least 8 samples")


# -- verify --------------------------------------------------------------------------

def _field(cfg: RunConfig):
    if not cfg.field:
        return symmetric_gauge(2)
    try:
        return parse_field(cfg.field.split(";"))
    except DSLError as exc:
        raise ConfigError(f"field: {exc}") from exc


def cmd_verify(cfg: RunConfig) -> Report:
    cfg.validate()
    tol = 1e-6 if cfg.tolerance is None else cfg.tolerance
    report = Report(cfg.as_dict())
    fld = _field(cfg)
    values = cfg.values()
    cond = check_conditions(fld)
    report.checks.append(Check("conditions", "constant field strength",
                               "; ".join(cond.messages) or "constant field strength",
                               "0" if cond.passed else "1", cond.passed))
    if not cond.passed:
        return report
    try:
        r = build_realization(cfg.kind, None if cfg.kind in HALL_KINDS else fld,
                              keep_second_order_coupling=cfg.keep_e2)
    except (ConditionsViolated, UnsupportedField) as exc:
        report.checks.append(Check("realization", "buildable", str(exc), "1", False))
        return report
    if cfg.theta_zero:
        r = r.set_zero("theta")
    for rc in verify_algebra(r).relations + verify_jacobi(r).jacobi:
        d_ = rc.as_dict()
        report.checks.append(Check(f"algebra {rc.name}" if not rc.name.startswith("jacobi")
                                   else rc.name, d_["expected"], d_["computed"],
                                   d_["residual"], rc.passed))
    if r.dim != 2:
        return report
    rep = oracle.FockRep.for_values(cfg.levels, values)
    try:
        if cfg.kind == "hall_1":
            # hall_1 drops e^2 theta terms from its algebra; compare with its own commutators
            res = oracle.symbolic_commutator_residual(r, values, rep, tol)
        else:
            res = oracle.commutator_residual(r, values, rep, tolerance=tol)
        entries = list(res.entries)
        if cfg.kind in HALL_KINDS:
            form = landau.to_canonical_landau(landau.build_hall_hamiltonian(r))
            entries += oracle.ladder_check(form, values, rep, realization=r,
                                           tolerance=tol).entries
    except KeyError as exc:
        raise ConfigError(f"oracle needs a numeric value for {exc.args[0]!r}") from exc
    for ent in entries:
        report.checks.append(numeric_check(f"oracle {ent.name}", ent.residual, tol))
    return report


# -- table1 --------------------------------------------------------------------------

def _reference(kind, name, theta_zero):
    ref = landau.REFERENCE_SIGMA[kind] if name == "sigma_H" else landau.REFERENCE_TABLE[kind][name]
    ref = expand_derived(ref)
    return ref.set_zero("theta") if theta_zero else ref


def cmd_table1(cfg: RunConfig) -> Report:
    cfg.validate()
    report = Report(cfg.as_dict())
    for row in landau.table1(theta_zero=cfg.theta_zero):
        entries = dict(row.form.as_dict(), sigma_H=row.sigma)
        for name, value in entries.items():
            ref = _reference(row.kind, name, cfg.theta_zero)
            got = expand_derived(value)
            ok = (got - ref).is_zero()
            report.checks.append(Check(f"{row.kind} {name}", landau.render_entry(ref, cfg.expand),
                                       landau.render_entry(got, cfg.expand),
                                       str(got - ref), ok))
        report.checks.append(symbolic_check(f"{row.kind} <J_x>", 0 * ONE, row.jx_expectation))
    return report


def table1_text(report: Report) -> str:
    """Compact table of computed entries, one row per Hamiltonian."""
    cols = ("gamma", "beta", "lambda_plus", "lambda_minus", "sigma_H")
    by = {c_.name: c_ for c_ in report.checks}
    lines = []
    for kind in HALL_KINDS:
        lines.append(f"{kind}:")
        for col in cols:
            chk = by[f"{kind} {col}"]
            lines.append(f"  {col:<13}{chk.computed}")
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


# -- phase ---------------------------------------------------------------------------

def _phase_ab(cfg: RunConfig, report: Report, numeric: bool):
    variant = "gauge_invariant" if cfg.realization == "hall_3" else cfg.realization
    res, q, f = phases.ab_phase(variant, cfg.theta_zero, cfg.solenoid_radius)
    expected = ONE if cfg.theta_zero else AB_FACTORS[variant]
    report.checks.append(symbolic_check("factor", expected, res.factor))
    report.checks.append(symbolic_check("base phase", phases.ab_base_phase(), res.base_phase))
    report.checks.append(symbolic_check(
        "absolute phase", GradedOrder().truncate(phases.ab_base_phase() * expected),
        res.absolute))
    for a, resid in enumerate(phases.gauge_identity_residual(q, f)):
        report.checks.append(Check(f"gauge identity {a + 1}", "0", str(resid), str(resid),
                                   resid.is_zero()))
    if numeric:
        tol = 1e-8 if cfg.tolerance is None else cfg.tolerance
        values = cfg.values()
        contour = phases.Contour(radius=cfg.contour_radius, samples=cfg.contour_samples)
        area = phases.enclosed_area(contour, cfg.solenoid_radius)
        symbolic = substitute_numeric(res.absolute, dict(values, S=area))
        quad = phases.loop_phase_numeric(f, contour, values)
        rel = abs(quad - symbolic) / abs(symbolic) if symbolic else abs(quad)
        report.checks.append(numeric_check("quadrature vs flux form", rel, tol,
                                           computed=f"{quad.imag:.12e}i"))


def cmd_phase(cfg: RunConfig) -> Report:
    cfg.validate()
    report = Report(cfg.as_dict())
    numeric = bool(cfg.params) or (cfg.theta is not None and not cfg.theta_zero)
    if cfg.config == "ab":
        _phase_ab(cfg, report, numeric)
    elif cfg.config == "star-shift-ab":
        res = phases.star_shift_phase()
        factor = res.factor.set_zero("theta") if cfg.theta_zero else res.factor
        expected = ONE if cfg.theta_zero else 1 + e * theta * B / (4 * hbar * c)
        report.checks.append(symbolic_check("factor", expected, factor))
    else:
        res = phases.anandan_phase(cfg.config, theta_zero=cfg.theta_zero)
        base, deformed = DIPOLE_PHASES[cfg.config]
        order = GradedOrder()
        if cfg.theta_zero:
            deformed = deformed.set_zero("theta")
        report.checks.append(symbolic_check("base phase", base, res.base_phase))
        report.checks.append(symbolic_check("deformed phase", order.truncate(deformed),
                                            res.absolute))
    return report


# -- entry point ---------------------------------------------------------------------

def _param(text):
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of {key!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config-file", dest="config_file",
                        help="JSON file with RunConfig keys; flags override it")
    common.add_argument("--theta", type=float, help="numeric theta; 0 also removes it symbolically")
    common.add_argument("--params", type=_param, nargs="+", metavar="KEY=VAL",
                        help="numeric parameter values")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--expand", action="store_true", default=None,
                        help="render entries in primitive symbols")

    parser = argparse.ArgumentParser(prog="ncqm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="symbolic algebra plus Fock-space oracle")
    v.add_argument("--kind", choices=KINDS)
    g = v.add_mutually_exclusive_group()
    g.add_argument("--keep-e2", dest="keep_e2", action="store_true", default=None,
                   help="keep the e^2 theta terms")
    g.add_argument("--drop-e2", dest="keep_e2", action="store_false",
                   help="drop the e^2 theta terms")
    v.add_argument("--field", metavar="A_x;A_y[;A_z]",
                   help="gauge-field components separated by ';', "
                        "e.g. --field='-(B/2)*y; (B/2)*x'")
    v.add_argument("--levels", type=int, help="Fock levels per mode")

    sub.add_parser("table1", parents=[common], help="Landau coefficients and conductivities")

    p = sub.add_parser("phase", parents=[common], help="AB and dipole phases")
    p.add_argument("config", nargs="?", help=f"one of {', '.join(PHASE_CONFIGS)}")
    p.add_argument("--realization", help=f"AB realization: {', '.join(AB_REALIZATIONS)}")
    p.add_argument("--contour-samples", dest="contour_samples", type=int)
    p.add_argument("--contour-radius", dest="contour_radius", type=float)
    p.add_argument("--solenoid-radius", dest="solenoid_radius", type=float)
    return parser


def config_from_args(args) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    data = {}
    if getattr(args, "config_file", None):
        try:
            with open(args.config_file) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config file: {exc}") from exc
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for name, val in vars(args).items():
        if name in known and val is not None:
            data[name] = dict(val) if name == "params" else val
    data["command"] = args.command
    return RunConfig(**data)


COMMANDS = {"verify": cmd_verify, "table1": cmd_table1, "phase": cmd_phase}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if cfg.command == "table1" and cfg.format == "text":
        sys.stdout.write(table1_text(report))
    else:
        sys.stdout.write(report.render(cfg.format))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
