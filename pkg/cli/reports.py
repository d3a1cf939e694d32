from __future__ import annotations

from typing import Any
from dataclasses import field, dataclass

import numpy as np

# Project
from core.linalg import matrix_entrywise_norm
from core.models import (NormOrder,
                         FactorStep,
                         RealMatrix,
                         ConjugateSet,
                         Decomposition,
                         InvariantCheck,
                         NormAccounting,
                         ProjectionResult,
                         PythagoreanVerdict,)

__all__ = [
    "RunReport",
    "projection_report",
    "decomposition_report",
    "conjugation_report",
    "verification_report",
]


@dataclass
class RunReport:
    """Everything one CLI command computed, in a JSON-ready shape."""
    command: str
    method: str | None
    digest: dict[str, Any]
    steps: list[dict[str, Any]] = field(default_factory=list)
    residual_trace: list[float] = field(default_factory=list)
    accounting: dict[str, Any] | None = None
    verdicts: list[dict[str, Any]] = field(default_factory=list)
    checks: list[dict[str, Any]] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)
    wall_time: float | None = None

    def to_dict(self) -> dict[str, Any]:
        payload = {
            "command": self.command,
            "method": self.method,
            "digest": self.digest,
            "steps": self.steps,
            "residual_trace": self.residual_trace,
            "accounting": self.accounting,
            "verdicts": self.verdicts,
            "checks": self.checks,
            **self.extra,
        }
        # wall time is opt-in, reports without it are reproducible byte for byte
        if self.wall_time is not None:
            payload["wall_time"] = self.wall_time
        return payload


def _digest(X: RealMatrix) -> dict[str, Any]:
    X = np.atleast_2d(X)
    return {
        "rows": int(X.shape[0]),
        "cols": int(X.shape[1]),
        "l1": matrix_entrywise_norm(X, NormOrder.L1),
        "l2": matrix_entrywise_norm(X, NormOrder.L2),
    }


def _verdict(verdict: PythagoreanVerdict) -> dict[str, Any]:
    return {
        "order": verdict.order.value,
        "relation": verdict.relation.value,
        "lhs": verdict.lhs,
        "rhs": verdict.rhs,
        "fit_term": verdict.fit_term,
        "residual_term": verdict.residual_term,
        "b_in_unit_interval": verdict.b_in_unit_interval,
        "predicted": verdict.predicted.value if verdict.predicted else None,
    }


def _step(step: FactorStep) -> dict[str, Any]:
    payload = {
        "delta": step.delta,
        "a": step.a.tolist(),
        "b": step.b.tolist(),
        "iterations": step.iterations,
        "converged": step.converged,
        "start": step.start_label,
    }
    if step.objective_trace:
        payload["objective_trace"] = list(step.objective_trace)
    return payload


def _accounting(accounting: NormAccounting) -> dict[str, Any]:
    return {
        "order": accounting.order.value,
        "full_rank": accounting.full_rank,
        "relation": accounting.relation.value,
        "total_lhs": accounting.total_lhs,
        "total_rhs": accounting.total_rhs,
        "column_lhs": accounting.column_lhs.tolist(),
        "column_rhs": accounting.column_rhs.tolist(),
        "row_lhs": accounting.row_lhs.tolist(),
        "row_rhs": accounting.row_rhs.tolist(),
        "step_checks": [
            {"step": c.step, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds, "equality": c.equality}
            for c in accounting.step_checks
        ],
    }


def projection_report(result: ProjectionResult, x: np.ndarray, verdict: PythagoreanVerdict) -> RunReport:
    return RunReport(
        command="project",
        method=result.method.value,
        digest=_digest(np.vstack([x, result.y])),
        verdicts=[_verdict(verdict)],
        extra={
            "alpha": result.alpha,
            "fitted": result.fitted.tolist(),
            "residual": result.residual.tolist(),
            "b_coeffs": result.b_coeffs.tolist(),
            "b_valid": result.b_valid.tolist(),
        },
    )


def decomposition_report(X: RealMatrix, d: Decomposition, accounting: NormAccounting | None) -> RunReport:
    return RunReport(
        command="decompose",
        method=d.method.value,
        digest=_digest(X),
        steps=[_step(step) for step in d.steps],
        residual_trace=list(d.residual_trace),
        accounting=_accounting(accounting) if accounting else None,
        extra={
            "converged": d.converged,
            "aborted_at": d.aborted_at,
            "reconstruction_error": d.reconstruction_error,
        },
    )


def conjugation_report(X: RealMatrix, conjugate: ConjugateSet) -> RunReport:
    return RunReport(
        command="conjugate",
        method=conjugate.order.value,
        digest=_digest(X),
        extra={
            "vectors": [v.tolist() for v in conjugate.vectors],
            "gram": conjugate.gram.tolist(),
        },
    )


def verification_report(X: RealMatrix, checks: list[InvariantCheck]) -> RunReport:
    return RunReport(
        command="verify",
        method=None,
        digest=_digest(X),
        checks=[{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    )
