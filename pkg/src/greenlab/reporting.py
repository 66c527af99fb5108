"""Check reports and shared numeric settings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["HypothesisRecord", "CheckReport", "NumericConfig", "format_report"]

VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_HYPOTHESIS = "hypothesis-not-met"


@dataclass(frozen=True)
class NumericConfig:
    """Tolerances and grid sizes shared across the checker suite."""

    quad_tol: float = 1e-10
    grid_size: int = 256
    identity_tol: float = 1e-6
    monotone_tol: float = 1e-8
    curvature_tol: float = 1e-9
    cache_size: int = 4096


@dataclass(frozen=True)
class HypothesisRecord:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CheckReport:
    """Outcome of one machine check.

    ``max_residual`` applies to identity checks (relative residual),
    ``min_margin`` to inequality/monotonicity checks (normalized slack;
    negative means violated).  Either may be None when not applicable.
    """

    check_id: str
    description: str
    params: dict[str, Any] = field(default_factory=dict)
    hypothesis_status: list[HypothesisRecord] = field(default_factory=list)
    grid: np.ndarray | None = None
    max_residual: float | None = None
    min_margin: float | None = None
    tolerance: float = 0.0
    verdict: str = VERDICT_PASS
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def hypotheses_ok(self) -> bool:
        return all(h.ok for h in self.hypothesis_status)

    def finalize(self) -> "CheckReport":
        """Derive the verdict from hypotheses, residuals, and margins."""
        if not self.hypotheses_ok:
            self.verdict = VERDICT_HYPOTHESIS
            return self
        ok = True
        if self.max_residual is not None:
            ok = ok and self.max_residual <= self.tolerance
        if self.min_margin is not None:
            ok = ok and self.min_margin >= -self.tolerance
        self.verdict = VERDICT_PASS if ok else VERDICT_FAIL
        return self


def format_report(report: CheckReport) -> str:
    """Deterministic human-readable rendering of a check report."""
    lines = [f"check {report.check_id}: {report.description}"]
    if report.params:
        joined = ", ".join(f"{k}={_fmt_value(v)}" for k, v in sorted(report.params.items()))
        lines.append(f"  params: {joined}")
    for h in report.hypothesis_status:
        mark = "ok " if h.ok else "VIOLATED"
        detail = f" ({h.detail})" if h.detail else ""
        lines.append(f"  hypothesis [{mark}] {h.name}{detail}")
    if report.grid is not None and len(report.grid):
        lines.append(
            f"  grid: {len(report.grid)} points in [{report.grid[0]:.6g}, {report.grid[-1]:.6g}]"
        )
    if report.max_residual is not None:
        lines.append(f"  max relative residual: {report.max_residual:.6e} (tol {report.tolerance:.1e})")
    if report.min_margin is not None:
        lines.append(f"  min normalized margin: {report.min_margin:.6e} (tol -{report.tolerance:.1e})")
    for key in sorted(report.extras):
        lines.append(f"  {key}: {_fmt_value(report.extras[key])}")
    lines.append(f"  verdict: {report.verdict}")
    return "\n".join(lines)


def _fmt_value(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, np.ndarray):
        return "[" + ", ".join(f"{x:.6g}" for x in np.asarray(v).ravel()[:8]) + (
            ", ...]" if v.size > 8 else "]"
        )
    if isinstance(v, (list, tuple)) and v and isinstance(v[0], float):
        return "[" + ", ".join(f"{x:.6g}" for x in v[:8]) + (", ...]" if len(v) > 8 else "]")
    return str(v)
