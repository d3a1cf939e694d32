from __future__ import annotations

from typing import Iterable

import numpy as np

# Project
from core.models import NormOrder, RealVector, RealMatrix
from core.exceptions import EmptyInput, ZeroVector, NonFiniteValue, DimensionMismatch

__all__ = [
    "as_vector",
    "as_matrix",
    "lp_norm",
    "dual_norm",
    "sign_vector",
    "norming_functional",
    "hadamard",
    "matrix_entrywise_norm",
    "matrix_power_sum",
    "projection_operator",
    "apply_projection",
    "residual_functional",
]


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.flags.writeable = False
    return array


def as_vector(values: Iterable[float] | np.ndarray) -> RealVector:
    """Validated read-only float64 vector: one axis, at least one entry, all entries finite."""
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 0:
        array = array.reshape(1)
    if array.ndim != 1:
        raise DimensionMismatch(f"Expected a vector, got an array of shape {array.shape}")
    if array.size == 0:
        raise EmptyInput("A vector needs at least one entry")
    if not np.all(np.isfinite(array)):
        raise NonFiniteValue(f"Vector entries must be finite, got {array.tolist()}")
    return _freeze(array)


def as_matrix(values: Iterable[Iterable[float]] | np.ndarray) -> RealMatrix:
    """Validated read-only float64 matrix with rows >= 1, cols >= 1 and finite entries."""
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 2:
        raise DimensionMismatch(f"Expected a matrix, got an array of shape {array.shape}")
    if 0 in array.shape:
        raise EmptyInput(f"A matrix needs at least one row and one column, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise NonFiniteValue("Matrix entries must be finite")
    return _freeze(array)


def _same_length(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape:
        raise DimensionMismatch(f"Lengths differ: {u.shape} vs {v.shape}")


def lp_norm(v: RealVector, p: NormOrder) -> float:
    v = np.asarray(v, dtype=np.float64)
    if not np.isfinite(v).all():
        raise NonFiniteValue("Cannot take the norm of a vector with NaN or infinite entries")
    match p:
        case NormOrder.L1:
            return float(np.abs(v).sum())
        case NormOrder.L2:
            return float(np.linalg.norm(v))


def dual_norm(v: RealVector, p: NormOrder) -> float:
    """||v||_q for the order dual to p: q=2 for L2, q=inf for L1."""
    v = np.asarray(v, dtype=np.float64)
    match p:
        case NormOrder.L1:
            return float(np.abs(v).max())
        case NormOrder.L2:
            return float(np.linalg.norm(v))


def sign_vector(v: RealVector) -> RealVector:
    # np.sign maps 0 to 0
    return np.sign(np.asarray(v, dtype=np.float64))


def norming_functional(v: RealVector, p: NormOrder) -> RealVector:
    """
    The dual unit vector phi(v) with phi(v)'v = ||v||_p:
    v/||v||_2 for L2, sgn(v) for L1.
    """
    v = np.asarray(v, dtype=np.float64)
    match p:
        case NormOrder.L1:
            return sign_vector(v)
        case NormOrder.L2:
            norm = np.linalg.norm(v)
            if norm == 0:
                raise ZeroVector("The L2 norming functional of the zero vector is undefined")
            return v / norm


def hadamard(u: RealVector, v: RealVector) -> RealVector:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    _same_length(u, v)
    return u * v


def matrix_power_sum(X: RealMatrix, p: NormOrder) -> float:
    """||X||_p^p = sum_ij |x_ij|^p."""
    X = np.asarray(X, dtype=np.float64)
    match p:
        case NormOrder.L1:
            return float(np.abs(X).sum())
        case NormOrder.L2:
            return float(np.square(X).sum())


def matrix_entrywise_norm(X: RealMatrix, p: NormOrder) -> float:
    X = np.asarray(X, dtype=np.float64)
    match p:
        case NormOrder.L1:
            return float(np.abs(X).sum())
        case NormOrder.L2:
            return float(np.linalg.norm(X.ravel()))


def projection_operator(x: RealVector, p: NormOrder) -> RealMatrix:
    """Q_x = (x/||x||_p) phi(x)', the idempotent rank-1 projector onto the line through x."""
    x = np.asarray(x, dtype=np.float64)
    norm = lp_norm(x, p)
    if norm == 0:
        raise ZeroVector("Cannot project onto the zero vector")
    return np.outer(x / norm, norming_functional(x, p))


def apply_projection(x: RealVector, y: RealVector, p: NormOrder) -> RealVector:
    """Q_x y without forming Q_x."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _same_length(x, y)
    norm = lp_norm(x, p)
    if norm == 0:
        raise ZeroVector("Cannot project onto the zero vector")
    return x * (float(norming_functional(x, p) @ y) / norm)


def residual_functional(x: RealVector, y: RealVector, p: NormOrder) -> float:
    """phi(x)'(y - Q_x y); zero up to rounding for every y."""
    y = np.asarray(y, dtype=np.float64)
    return float(norming_functional(x, p) @ (y - apply_projection(x, y, p)))
