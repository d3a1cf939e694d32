from __future__ import annotations

import logging

import numpy as np

# Project
import config
from core.utils import is_close, tolerance
from core.linalg import as_matrix, matrix_power_sum, matrix_entrywise_norm
from core.projections import classify_relation
from core.models import NormOrder, StepCheck, RealMatrix, FactorMethod, Decomposition, NormAccounting
from core.exceptions import MethodMismatch, DimensionMismatch

__all__ = [
    "step_checks",
    "norm_accounting",
]

logger = logging.getLogger(__name__)


def _check_shape(X: RealMatrix, d: Decomposition) -> RealMatrix:
    X = as_matrix(X)
    if X.shape != d.residual.shape:
        raise DimensionMismatch(f"Decomposition of shape {d.residual.shape} was not produced from a {X.shape} matrix")
    return X


def step_checks(X: RealMatrix, d: Decomposition) -> tuple[StepCheck, ...]:
    """
    Per-step triangle bound ||X_a||_p^p <= ||a_a b_a'||_p^p / delta_a^p + ||X_a+1||_p^p.
    Equality is reported, never required.
    """
    X = _check_shape(X, d)
    p = d.method.order
    residual = np.array(X)
    checks = []
    for index, step in enumerate(d.steps, start=1):
        term = step.term
        following = residual - term
        lhs = matrix_power_sum(residual, p)
        rhs = matrix_power_sum(term, p) + matrix_power_sum(following, p)
        checks.append(
            StepCheck(
                step=index,
                lhs=lhs,
                rhs=rhs,
                holds=lhs <= rhs + tolerance(rhs),
                equality=is_close(lhs, rhs),
            )
        )
        residual = following
    return tuple(checks)


def norm_accounting(X: RealMatrix, d: Decomposition) -> NormAccounting:
    """
    Row, column and total bookkeeping of a SVD or taxicab SVD run.

    L2:  ||X(,j)||^2 = sum_a b_a(j)^2,  ||X(i,)||^2 = sum_a a_a(i)^2,  sum x^2 = sum delta^2
    L1:  ||X(,j)||_1 <= sum_a |b_a(j)|, ||X(i,)||_1 <= sum_a |a_a(i)|, sum |x| <= sum delta

    Each right side also carries the final residual's share, which vanishes for full-rank runs.
    l1-min factors are not conjugate, so their runs are rejected.
    """
    if d.method == FactorMethod.L1MIN_SVD:
        raise MethodMismatch("Norm accounting requires conjugate factors (svd or tsvd), got l1min")
    X = _check_shape(X, d)
    p = d.method.order
    R = d.residual
    A = np.column_stack([step.a for step in d.steps]) if d.steps else np.zeros((X.shape[0], 0))
    B = np.column_stack([step.b for step in d.steps]) if d.steps else np.zeros((X.shape[1], 0))
    deltas = np.array(d.deltas)

    match p:
        case NormOrder.L2:
            measure, delta_total = np.square, float(np.square(deltas).sum())
        case NormOrder.L1:
            measure, delta_total = np.abs, float(deltas.sum())

    total_lhs = matrix_power_sum(X, p)
    total_rhs = delta_total + matrix_power_sum(R, p)
    x_norm = matrix_entrywise_norm(X, p)
    accounting = NormAccounting(
        order=p,
        full_rank=matrix_entrywise_norm(R, p) <= config.RANK_TOLERANCE * x_norm,
        column_lhs=measure(X).sum(axis=0),
        column_rhs=measure(B).sum(axis=1) + measure(R).sum(axis=0),
        row_lhs=measure(X).sum(axis=1),
        row_rhs=measure(A).sum(axis=1) + measure(R).sum(axis=1),
        total_lhs=total_lhs,
        total_rhs=total_rhs,
        relation=classify_relation(total_lhs, total_rhs, p),
        step_checks=step_checks(X, d),
    )
    logger.info(
        f"{d.method.value} accounting: {total_lhs=} {accounting.relation.symbol} {total_rhs=}, "
        f"full_rank={accounting.full_rank}"
    )
    return accounting
