from __future__ import annotations

import logging
from typing import Callable, Iterator

import numpy as np

# Project
import config
from core.utils import is_close, tolerance
from core.accounting import step_checks, norm_accounting
from core.factorize import decompose, reconstruct
from core.conjugation import conjugacy_gram, conjugate_gram_schmidt
from core.projections import project, b_coefficients
from core.models import NormOrder, Relation, RealMatrix, FactorMethod, InvariantCheck, ProjectionMethod
from core.linalg import lp_norm, as_matrix, sign_vector, residual_functional, matrix_entrywise_norm
from core.exceptions import DegenerateVector, DimensionMismatch

__all__ = [
    "run_invariant_suite",
]

logger = logging.getLogger(__name__)


def _row_pairs(X: np.ndarray) -> Iterator[tuple[int, int]]:
    """Every row paired with the first nonzero row that differs from it."""
    nonzero = [i for i in range(X.shape[0]) if X[i].any()]
    if not nonzero:
        return
    anchor = nonzero[0]
    for i in range(X.shape[0]):
        if i != anchor:
            yield anchor, i


def _residual_functional_checks(X: np.ndarray) -> Iterator[InvariantCheck]:
    for p in NormOrder:
        worst = 0.0
        for anchor, i in _row_pairs(X):
            y = X[i]
            worst = max(worst, abs(residual_functional(X[anchor], y, p)) / max(lp_norm(y, p), 1.0))
        yield InvariantCheck(
            name=f"residual functional {p.value}",
            passed=worst <= config.RELATIVE_TOLERANCE,
            detail=f"max |phi(x)'(y - Q_x y)| / ||y|| = {worst:.3g}",
        )


def _projection_checks(X: np.ndarray) -> Iterator[InvariantCheck]:
    failures: list[str] = []
    pairs = 0
    for anchor, i in _row_pairs(X):
        x, y = X[anchor], X[i]
        pairs += 1
        euclidean = project(y, x, ProjectionMethod.EUCLIDEAN)
        if euclidean.verdict.relation != Relation.EQUALITY:
            failures.append(f"row {i}: euclidean split is {euclidean.verdict.relation.value}")

        operator = project(y, x, ProjectionMethod.L1_OPERATOR)
        if not is_close(lp_norm(operator.fitted, NormOrder.L1), abs(float(sign_vector(x) @ y))):
            failures.append(f"row {i}: ||Q_x y||_1 != |sgn(x)'y|")

        for method in (ProjectionMethod.L1_OPERATOR, ProjectionMethod.L1_MIN):
            result = operator if method == ProjectionMethod.L1_OPERATOR else project(y, x, method)
            _, valid = b_coefficients(result.fitted, y)
            if not valid.all():
                continue
            expected = Relation.EQUALITY if result.verdict.b_in_unit_interval else Relation.STRICT_INEQUALITY
            if result.verdict.relation != expected:
                failures.append(f"row {i}: {method.value} verdict disagrees with the b-interval test")

    yield InvariantCheck(
        name="pythagorean verdicts",
        passed=not failures,
        detail="; ".join(failures) or f"{pairs} row pairs consistent",
    )


def _conjugation_checks(X: np.ndarray) -> Iterator[InvariantCheck]:
    rows = list(X)
    for p in NormOrder:
        try:
            conjugate = conjugate_gram_schmidt(rows, p)
        except (DegenerateVector, DimensionMismatch) as e:
            yield InvariantCheck(name=f"conjugation {p.value}", passed=True, detail=f"skipped: {e}")
            continue
        gram = conjugacy_gram(conjugate.vectors, p)
        upper = np.abs(np.triu(gram, k=1)).max(initial=0.0)
        scale = max(float(np.abs(gram).max()), 1.0)
        yield InvariantCheck(
            name=f"conjugation {p.value}",
            passed=upper <= config.RELATIVE_TOLERANCE * scale,
            detail=f"max upper-triangle entry {upper:.3g}",
        )


def _decomposition_checks(X: np.ndarray) -> Iterator[InvariantCheck]:
    k = min(X.shape)
    for method in FactorMethod:
        p = method.order
        d = decompose(X, method, k)
        x_norm = matrix_entrywise_norm(X, p)
        band = config.RELATIVE_TOLERANCE * max(x_norm, 1.0)
        name = method.value

        normalised = all(
            is_close(lp_norm(step.a, p), step.delta) and is_close(lp_norm(step.b, p), step.delta)
            for step in d.steps
        )
        yield InvariantCheck(f"{name} factor normalisation", normalised, f"deltas {[f'{v:.6g}' for v in d.deltas]}")

        linear = matrix_entrywise_norm(reconstruct(d) + d.residual - X, p) <= band
        yield InvariantCheck(f"{name} linearity", linear, f"{d.rank} terms")

        checks = step_checks(X, d)
        yield InvariantCheck(
            f"{name} step triangle bound",
            all(check.holds for check in checks),
            ", ".join(f"{c.lhs:.6g}<={c.rhs:.6g}" for c in checks),
        )

        match method:
            case FactorMethod.SVD_L2:
                accounting = norm_accounting(X, d)
                yield InvariantCheck(
                    f"{name} energy identity",
                    is_close(accounting.total_lhs, accounting.total_rhs),
                    f"{accounting.total_lhs:.12g} = {accounting.total_rhs:.12g}",
                )
                conjugate = all(
                    float(np.abs((step.a / step.delta) @ residual).max()) <= band
                    for step, residual in _residuals(X, d)
                )
                yield InvariantCheck(f"{name} residual orthogonality", conjugate)
            case FactorMethod.TAXICAB_SVD:
                accounting = norm_accounting(X, d)
                yield InvariantCheck(
                    f"{name} norm inequality",
                    accounting.total_lhs <= accounting.total_rhs + tolerance(accounting.total_rhs),
                    f"{accounting.total_lhs:.12g} {accounting.relation.symbol} {accounting.total_rhs:.12g}",
                )
                conjugate = all(
                    lp_norm(residual @ np.sign(step.b), p) <= band
                    and lp_norm(np.sign(step.a) @ residual, p) <= band
                    for step, residual in _residuals(X, d)
                    if step.converged
                )
                yield InvariantCheck(f"{name} residual conjugacy", conjugate)
            case FactorMethod.L1MIN_SVD:
                descent = all(
                    later <= earlier + tolerance(earlier)
                    for step in d.steps
                    for earlier, later in zip(step.objective_trace, step.objective_trace[1:])
                )
                yield InvariantCheck(f"{name} objective descent", descent)


def _residuals(X: np.ndarray, d) -> Iterator[tuple]:
    residual = np.array(X)
    for step in d.steps:
        residual = residual - step.term
        yield step, residual


SUITE: tuple[Callable[[np.ndarray], Iterator[InvariantCheck]], ...] = (
    _residual_functional_checks,
    _projection_checks,
    _conjugation_checks,
    _decomposition_checks,
)


def run_invariant_suite(X: RealMatrix) -> list[InvariantCheck]:
    """
    Spot-checks the stated identities on X: the residual functional and the Pythagorean verdicts on its rows,
    conjugation of its rows, and normalisation, linearity, triangle bounds and conjugacy
    of its three full decompositions. Checks that do not apply are reported as skipped.
    """
    X = as_matrix(X)
    suite = SUITE if X.any() else SUITE[:3]
    results = [check for stage in suite for check in stage(X)]
    if not X.any():
        results.append(InvariantCheck("decompositions", True, "skipped: zero matrix"))
    for check in results:
        if not check.passed:
            logger.warning(f"Invariant violated: {check.name} ({check.detail})")
    return results
