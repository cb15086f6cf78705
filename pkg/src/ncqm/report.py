"""Check records and deterministic JSON / text rendering of run reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    computed: str
    residual: str
    passed: bool

    def as_dict(self):
        return {"name": self.name, "expected": self.expected, "computed": self.computed,
                "residual": self.residual, "pass": self.passed}


def format_float(x: float) -> str:
    """Short fixed-precision rendering so reports stay byte-stable."""
    return f"{x:.3e}"


def symbolic_check(name, expected, computed) -> Check:
    """Exact comparison of two Scalars (or WeylExprs)."""
    residual = computed - expected
    return Check(name, str(expected), str(computed), str(residual), residual.is_zero())


def numeric_check(name, residual: float, tolerance: float, computed=None) -> Check:
    computed = format_float(residual) if computed is None else computed
    return Check(name, f"<= {format_float(tolerance)}", computed, format_float(residual),
                 bool(residual <= tolerance))


@dataclass
class Report:
    run: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted_checks(self):
        return sorted(self.checks, key=lambda c: c.name)

    def as_dict(self):
        return {"run": self.run, "checks": [c.as_dict() for c in self.sorted_checks()],
                "pass": self.passed}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"run: {json.dumps(self.run, sort_keys=True)}"]
        for c in self.sorted_checks():
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.name}")
            lines.append(f"    expected: {c.expected}")
            lines.append(f"    computed: {c.computed}")
            if c.residual not in ("0", c.computed):
                lines.append(f"    residual: {c.residual}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str = "json") -> str:
        return self.to_json() if fmt == "json" else self.to_text()
