"""Report data structures and byte-deterministic serialization.

The JSON emitter is hand-rolled for one reason: the report contract pins
floating-point fields to 17 significant digits, while ``json.dumps`` uses
shortest-roundtrip repr.  Everything else (key order, spacing) is fixed by
construction so reruns with the same config produce identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


def format_float(x: float) -> str:
    """17-significant-digit decimal form, round-trip exact for doubles."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("reports must contain finite numbers only")
    return format(x, ".17g")


def _emit(value: Any, indent: int) -> str:
    pad = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        escaped = (
            value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        )
        return f'"{escaped}"'
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f'{pad}  "{k}": {_emit(v, indent + 1)}' for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ",\n".join(f"{pad}  {_emit(v, indent + 1)}" for v in value)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(value: Any) -> str:
    return _emit(value, 0) + "\n"


@dataclass
class CheckResult:
    """Outcome of one named check, aggregated over all sampled points."""

    name: str
    tolerance: float
    max_residual: float | None = None
    passed: bool | None = None
    worst_point_id: int | None = None
    status: str = "ran"
    reason: str | None = None
    detail: str | None = None

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "worst_point_id": self.worst_point_id,
            "status": self.status,
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class VerifyReport:
    """Full certification report: config echo, per-check rows, verdict."""

    config: dict[str, Any]
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        ran = [c for c in self.checks if c.status == "ran"]
        return "PASS" if all(c.passed for c in ran) else "FAIL"

    @property
    def all_passed(self) -> bool:
        return self.verdict == "PASS"

    def as_dict(self) -> dict[str, Any]:
        return {
            "config": self.config,
            "checks": [c.as_dict() for c in self.checks],
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return to_json(self.as_dict())


@dataclass
class SweepRow:
    point_id: int
    t: float
    direction_id: int
    value: float


@dataclass
class SweepResult:
    """Holomorphic-sectional-curvature sweep: one row per (point, direction)."""

    rows: list[SweepRow]

    @property
    def minimum(self) -> float:
        return min(r.value for r in self.rows)

    @property
    def maximum(self) -> float:
        return max(r.value for r in self.rows)

    @property
    def relative_spread(self) -> float:
        lo, hi = self.minimum, self.maximum
        scale = max(abs(lo), abs(hi))
        return (hi - lo) / scale if scale > 0.0 else 0.0

    def to_csv(self) -> str:
        lines = ["point_id,t,direction_id,hol_sect_curv"]
        lines.extend(
            f"{r.point_id},{format_float(r.t)},{r.direction_id},{format_float(r.value)}"
            for r in self.rows
        )
        lines.append(
            f"#summary,{format_float(self.minimum)},{format_float(self.maximum)},"
            f"{format_float(self.relative_spread)}"
        )
        return "\n".join(lines) + "\n"
