from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

# Project
import config
from core.models import NormOrder, RealVector, RealMatrix, ConjugateSet
from core.linalg import lp_norm, as_vector, apply_projection
from core.exceptions import EmptyInput, DegenerateVector, DimensionMismatch

__all__ = [
    "conjugate_gram_schmidt",
    "conjugacy_gram",
]

logger = logging.getLogger(__name__)


def _common_length(vectors: Sequence[RealVector]) -> list[RealVector]:
    if not vectors:
        raise EmptyInput("At least one vector is required")
    vectors = [as_vector(v) for v in vectors]
    lengths = {v.size for v in vectors}
    if len(lengths) > 1:
        raise DimensionMismatch(f"Vectors must share one length, got lengths {sorted(lengths)}")
    return vectors


def conjugacy_gram(vectors: Sequence[RealVector], p: NormOrder) -> RealMatrix:
    """
    G[beta, alpha] = phi(y_beta)'y_alpha for L1, i.e. sgn(Y)'Y; Y'Y for L2.
    A conjugate set gives a lower triangular G for L1 and a diagonal one for L2.
    """
    Y = np.column_stack(_common_length(vectors))
    match p:
        case NormOrder.L1:
            return np.sign(Y).T @ Y
        case NormOrder.L2:
            return Y.T @ Y


def conjugate_gram_schmidt(
    xs: Sequence[RealVector],
    p: NormOrder,
    degeneracy_tolerance: float = None,
) -> ConjugateSet:
    """
    Turns independent x_1..x_k into l_p-conjugate y_1..y_k:
    y_1 = x_1, y_a+1 = (I - Q_a)...(I - Q_1) x_a+1 with Q_i = (y_i/||y_i||_p) phi(y_i)'.
    Earlier projectors are applied first; for L1 they do not commute.

    params:
    xs: vectors of one common length, at most that many
    p: NormOrder selecting the norming functional
    degeneracy_tolerance: y_a with ||y_a||_p <= tol * ||x_a||_p is rejected as dependent
    """
    tol = config.DEGENERACY_TOLERANCE if degeneracy_tolerance is None else degeneracy_tolerance
    xs = _common_length(xs)
    if len(xs) > xs[0].size:
        raise DimensionMismatch(f"Cannot conjugate {len(xs)} vectors in dimension {xs[0].size}")

    ys: list[RealVector] = []
    for index, x in enumerate(xs):
        y = np.array(x)
        for previous in ys:
            y = y - apply_projection(previous, y, p)
        if lp_norm(y, p) <= tol * lp_norm(x, p):
            raise DegenerateVector(
                f"Vector {index + 1} collapses to zero: it depends on the vectors before it"
            )
        ys.append(y)
        logger.info(f"Conjugated vector {index + 1}: ||y||={lp_norm(y, p)}")

    return ConjugateSet(vectors=tuple(ys), order=p, gram=conjugacy_gram(ys, p))
