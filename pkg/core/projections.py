from __future__ import annotations

import logging
import dataclasses

import numpy as np
from numpy.typing import NDArray

# Project
import config
from core.utils import tolerance
from core.linalg import lp_norm, as_vector, sign_vector
from core.models import (Relation,
                         NormOrder,
                         RealVector,
                         ProjectionMethod,
                         ProjectionResult,
                         PythagoreanVerdict,)
from core.exceptions import (ZeroVector,
                             Indeterminate,
                             NegativeWeights,
                             AllZeroWeights,
                             LinearlyDependent,
                             DimensionMismatch,)

__all__ = [
    "weighted_median",
    "median_breakpoint",
    "l1_objective",
    "project_euclidean",
    "project_l1_operator",
    "project_l1_min",
    "project",
    "b_coefficients",
    "classify_relation",
    "pythagorean_check",
    "triangle_split",
    "taxicab_triangle",
    "corollary_classify",
]

logger = logging.getLogger(__name__)


def _pair(y, x) -> tuple[RealVector, RealVector]:
    y, x = as_vector(y), as_vector(x)
    if y.shape != x.shape:
        raise DimensionMismatch(f"y and x must have equal lengths, got {y.size} and {x.size}")
    return y, x


def median_breakpoint(values: np.ndarray, weights: np.ndarray) -> float:
    # ties in values merge their weights; first breakpoint reaching half of the total weight wins
    breakpoints, inverse = np.unique(values, return_inverse=True)
    cumulative = np.cumsum(np.bincount(inverse.ravel(), weights=weights))
    index = int(np.searchsorted(cumulative, cumulative[-1] / 2, side="left"))
    return float(breakpoints[min(index, breakpoints.size - 1)])


def weighted_median(values: RealVector, weights: RealVector) -> float:
    """
    Minimiser of sum_i w_i |v_i - theta|, always one of the input values.
    Among several optimal breakpoints the smallest one is returned.
    """
    values, weights = as_vector(values), as_vector(weights)
    if values.shape != weights.shape:
        raise DimensionMismatch(f"values and weights differ in length: {values.size} vs {weights.size}")
    if np.any(weights < 0):
        raise NegativeWeights("Weighted median weights must be nonnegative")
    if weights.sum() <= 0:
        raise AllZeroWeights("Weighted median needs a positive total weight")
    return median_breakpoint(values, weights)


def l1_objective(y: RealVector, x: RealVector, alpha: float) -> float:
    """||y - alpha x||_1."""
    return float(np.abs(np.asarray(y) - alpha * np.asarray(x)).sum())


def b_coefficients(fitted: RealVector, y: RealVector) -> tuple[RealVector, NDArray[np.bool_]]:
    """
    Hadamard coefficients with fitted = b∘y: b_i = fitted_i / y_i, and 0 where y_i = 0.
    An entry is invalid where y_i = 0 but fitted_i != 0, since no b_i reproduces it.
    """
    fitted, y = np.asarray(fitted, dtype=np.float64), np.asarray(y, dtype=np.float64)
    if fitted.shape != y.shape:
        raise DimensionMismatch(f"fitted and y differ in length: {fitted.size} vs {y.size}")
    nonzero = y != 0
    b = np.divide(fitted, y, out=np.zeros_like(y), where=nonzero)
    valid = nonzero | (fitted == 0)
    return b, valid


def _unit_interval(b: np.ndarray, y: np.ndarray, valid: np.ndarray | None = None) -> bool:
    considered = y != 0
    if valid is not None:
        considered &= valid
    b = b[considered]
    # rounding in alpha * x_i / y_i may push a breakpoint ratio a few ulps past 0 or 1
    slack = config.RELATIVE_TOLERANCE
    return bool(np.all((b >= -slack) & (b <= 1 + slack)))


def _terms(y: np.ndarray, fit: np.ndarray, residual: np.ndarray, p: NormOrder) -> tuple[float, float, float]:
    match p:
        case NormOrder.L1:
            return lp_norm(y, p), lp_norm(fit, p), lp_norm(residual, p)
        case NormOrder.L2:
            return float(y @ y), float(fit @ fit), float(residual @ residual)


def classify_relation(lhs: float, rhs: float, p: NormOrder) -> Relation:
    """Equality inside the dead band rtol * max(1, |rhs|), strict when rhs exceeds lhs beyond it."""
    band = tolerance(rhs)
    if abs(lhs - rhs) <= band:
        return Relation.EQUALITY
    if rhs - lhs > band:
        return Relation.STRICT_INEQUALITY
    if p == NormOrder.L2:
        return Relation.REVERSE_INEQUALITY
    raise Indeterminate(f"L1 split exceeds the triangle bound: {lhs=} > {rhs=}")


def _verdict(y, fit, residual, p: NormOrder, b_in_unit_interval: bool) -> PythagoreanVerdict:
    lhs, fit_term, residual_term = _terms(y, fit, residual, p)
    rhs = fit_term + residual_term
    return PythagoreanVerdict(
        order=p,
        relation=classify_relation(lhs, rhs, p),
        lhs=lhs,
        rhs=rhs,
        fit_term=fit_term,
        residual_term=residual_term,
        b_in_unit_interval=b_in_unit_interval,
    )


def pythagorean_check(y: RealVector, b: RealVector, p: NormOrder) -> PythagoreanVerdict:
    """
    Compares ||y|| with ||b∘y|| + ||(1-b)∘y|| (squared norms for L2).
    L2 gives equality exactly when ((1-b)∘y)'(b∘y) = 0, L1 exactly when every b_i
    on a coordinate with y_i != 0 lies in [0, 1].
    """
    y, b = _pair(y, b)
    fit = b * y
    return _verdict(y, fit, y - fit, p, _unit_interval(b, y))


def triangle_split(y: RealVector, fitted: RealVector, p: NormOrder) -> PythagoreanVerdict:
    """Same comparison for the actual split y = fitted + (y - fitted)."""
    y, fitted = _pair(y, fitted)
    b, valid = b_coefficients(fitted, y)
    return _verdict(y, fitted, y - fitted, p, _unit_interval(b, y, valid) and bool(valid.all()))


def taxicab_triangle(a: RealVector, b: RealVector) -> PythagoreanVerdict:
    """||a||_1 against ||b||_1 + ||a - b||_1, the taxicab triangle with sides a, b and a - b."""
    return triangle_split(a, b, NormOrder.L1)


def _result(method: ProjectionMethod, alpha: float, y: RealVector, x: RealVector) -> ProjectionResult:
    fitted = alpha * x
    residual = y - fitted
    b, valid = b_coefficients(fitted, y)
    verdict = _verdict(y, fitted, residual, method.order, _unit_interval(b, y, valid) and bool(valid.all()))
    logger.info(f"{method.value} projection: {alpha=}, {verdict.relation.value}")
    return ProjectionResult(
        method=method,
        alpha=alpha,
        fitted=fitted,
        residual=residual,
        b_coeffs=b,
        b_valid=valid,
        verdict=verdict,
    )


def project_euclidean(y: RealVector, x: RealVector) -> ProjectionResult:
    """alpha = x'y / ||x||_2^2, the least squares coefficient."""
    y, x = _pair(y, x)
    squared = float(x @ x)
    if squared == 0:
        raise ZeroVector("Cannot project onto the zero vector")
    return _result(ProjectionMethod.EUCLIDEAN, float(x @ y) / squared, y, x)


def project_l1_operator(y: RealVector, x: RealVector) -> ProjectionResult:
    """alpha = sgn(x)'y / ||x||_1, the taxicab projection operator coefficient."""
    y, x = _pair(y, x)
    norm = lp_norm(x, NormOrder.L1)
    if norm == 0:
        raise ZeroVector("Cannot project onto the zero vector")
    return _result(ProjectionMethod.L1_OPERATOR, float(sign_vector(x) @ y) / norm, y, x)


def project_l1_min(y: RealVector, x: RealVector) -> ProjectionResult:
    """
    alpha = argmin ||y - alpha x||_1: the weighted median of y_i/x_i with weights |x_i|.
    Coordinates with x_i = 0 add the constant |y_i| and are left out.
    """
    y, x = _pair(y, x)
    support = x != 0
    if not support.any():
        raise ZeroVector("Cannot project onto the zero vector")
    alpha = median_breakpoint(y[support] / x[support], np.abs(x[support]))
    return _result(ProjectionMethod.L1_MIN, alpha, y, x)


PROJECTORS = {
    ProjectionMethod.EUCLIDEAN: project_euclidean,
    ProjectionMethod.L1_OPERATOR: project_l1_operator,
    ProjectionMethod.L1_MIN: project_l1_min,
}


def project(y: RealVector, x: RealVector, method: ProjectionMethod) -> ProjectionResult:
    return PROJECTORS[method](y, x)


def corollary_classify(x: RealVector, y: RealVector, method: ProjectionMethod) -> PythagoreanVerdict:
    """
    Runs the projection of y onto x and returns the measured verdict, annotated with
    the relation the taxicab corollaries predict for it:
    l1-min gives equality when sgn(x) = sgn(y) and strict inequality otherwise,
    the l1 projection operator always gives strict inequality.
    Linearly dependent pairs (zero residual) are rejected, the corollaries exclude them.
    """
    result = project(y, x, method)
    order = method.order
    if lp_norm(result.residual, order) <= config.DEPENDENCE_TOLERANCE * lp_norm(result.y, order):
        raise LinearlyDependent(f"y is a multiple of x (alpha={result.alpha}), the residual vanishes")

    match method:
        case ProjectionMethod.L1_MIN:
            same_signs = np.array_equal(sign_vector(x), sign_vector(y))
            predicted = Relation.EQUALITY if same_signs else Relation.STRICT_INEQUALITY
        case ProjectionMethod.L1_OPERATOR:
            predicted = Relation.STRICT_INEQUALITY
        case ProjectionMethod.EUCLIDEAN:
            predicted = Relation.EQUALITY

    verdict = dataclasses.replace(result.verdict, predicted=predicted)
    if verdict.relation != predicted:
        logger.warning(
            f"{method.value} projection measured {verdict.relation.value} "
            f"where the corollary predicts {predicted.value}: {verdict.summary}"
        )
    return verdict
