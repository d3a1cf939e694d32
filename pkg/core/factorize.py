from __future__ import annotations

import logging

import numpy as np

# Project
import config
from core.projections import median_breakpoint
from core.linalg import as_matrix, norming_functional, matrix_entrywise_norm
from core.models import (NormOrder,
                         FactorStep,
                         RealMatrix,
                         RealVector,
                         FactorMethod,
                         InitStrategy,
                         Decomposition,
                         FactorStructure,)
from core.exceptions import (TooLarge,
                             ZeroVector,
                             ZeroMatrix,
                             InvalidRank,
                             NoConvergence,
                             NonFiniteValue,
                             DegenerateFactor,
                             DimensionMismatch,)

__all__ = [
    "transition_step",
    "first_factor",
    "tsvd_exhaustive_oracle",
    "deflate",
    "decompose",
    "l1min_alternate",
    "reconstruct",
    "factor_structure",
    "numerical_rank",
]

logger = logging.getLogger(__name__)

DEFAULT_STRATEGIES = {
    FactorMethod.SVD_L2: InitStrategy.DOMINANT,
    FactorMethod.TAXICAB_SVD: InitStrategy.ALL_COLUMNS,
    FactorMethod.L1MIN_SVD: InitStrategy.ALL_COLUMNS,
}


def _nonzero_matrix(X) -> RealMatrix:
    X = as_matrix(X)
    if not X.any():
        raise ZeroMatrix("The matrix is entrywise zero, there is nothing to factor")
    return X


def transition_step(X: RealMatrix, b: RealVector, p: NormOrder) -> tuple[RealVector, RealVector, float]:
    """
    One pass of the transition formulas: a = X phi(b), b_next = X' phi(a),
    delta = phi(a)' X phi(b). Repeating it never decreases delta.
    """
    X = _nonzero_matrix(X)
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (X.shape[1],):
        raise DimensionMismatch(f"b must have length {X.shape[1]}, got shape {b.shape}")
    if not b.any():
        raise ZeroVector("The starting vector b is zero")
    phi_b = norming_functional(b, p)
    a = X @ phi_b
    if not a.any():
        raise ZeroVector("X phi(b) vanishes, b lies in a null direction of X")
    phi_a = norming_functional(a, p)
    return a, X.T @ phi_a, float(phi_a @ X @ phi_b)


# SVD


def _power_factor(X: np.ndarray, max_iter: int, tol: float, vector_tol: float = None) -> FactorStep:
    """
    Power iteration on XX' from the column of largest l2 norm. The step is converged once
    delta = ||X'u||_2 changes by no more than tol * delta between sweeps; sweeps go on
    until u moves by no more than vector_tol as well, within the same max_iter.
    """
    vector_tol = config.POWER_VECTOR_TOLERANCE if vector_tol is None else vector_tol
    j = int(np.argmax(np.linalg.norm(X, axis=0)))
    u = X[:, j] / np.linalg.norm(X[:, j])
    delta = 0.0
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        v = X.T @ u
        delta_next = float(np.linalg.norm(v))
        a = X @ (v / delta_next)
        u_next = a / np.linalg.norm(a)
        change = float(np.linalg.norm(u_next - u))
        u = u_next
        converged = converged or abs(delta_next - delta) <= tol * delta_next
        delta = delta_next
        if converged and change <= vector_tol:
            break

    # b = X'phi(a) and a = delta phi(a) keep phi(a)'X_next = 0 exact whatever the convergence
    b = X.T @ u
    delta = float(np.linalg.norm(b))
    return FactorStep(
        delta=delta,
        a=delta * u,
        b=b,
        iterations=iterations,
        converged=converged,
        start_label=f"column {j}",
    )


# Taxicab SVD


def _taxicab_run(X: np.ndarray, a: np.ndarray, max_iter: int) -> tuple[float, np.ndarray, np.ndarray, int, bool]:
    """Sign power iteration from a: b = X'sgn(a), a = X sgn(b) until sgn(a) is reproduced."""
    seen: set[bytes] = set()
    iterations = 0
    for iterations in range(1, max_iter + 1):
        v = np.sign(a)
        b = X.T @ v
        a_next = X @ np.sign(b)
        if np.array_equal(np.sign(a_next), v):
            return float(np.abs(a_next).sum()), a_next, b, iterations, True
        key = v.tobytes()
        if key in seen:
            break
        seen.add(key)
        a = a_next

    # cycling or out of iterations: close the last half-step and balance ||b||_1 onto delta
    b = X.T @ np.sign(a)
    a = X @ np.sign(b)
    delta = float(np.abs(a).sum())
    b_norm = float(np.abs(b).sum())
    if b_norm > 0:
        b = b * (delta / b_norm)
    return delta, a, b, iterations, False


def tsvd_exhaustive_oracle(X: RealMatrix, max_columns: int = None) -> tuple[float, RealVector]:
    """
    Exact maximum of ||X u||_1 over u in {-1, +1}^J, enumerating the 2^(J-1) vectors with u_1 = +1.
    Ties go to the first vector in enumeration order (all-plus first).
    """
    max_columns = config.ORACLE_MAX_COLUMNS if max_columns is None else max_columns
    X = as_matrix(X)
    n_cols = X.shape[1]
    if n_cols > max_columns:
        raise TooLarge(f"Exhaustive search over {n_cols} columns exceeds the limit of {max_columns}")

    shifts = np.arange(n_cols - 2, -1, -1)
    total = 1 << (n_cols - 1)
    best_value, best_signs = -1.0, None
    for start in range(0, total, config.ORACLE_CHUNK_SIZE):
        codes = np.arange(start, min(start + config.ORACLE_CHUNK_SIZE, total))
        bits = (codes[:, None] >> shifts) & 1
        signs = np.hstack([np.ones((codes.size, 1)), 1.0 - 2.0 * bits])
        values = np.abs(X @ signs.T).sum(axis=0)
        index = int(np.argmax(values))
        if values[index] > best_value:
            best_value, best_signs = float(values[index]), signs[index]
    return best_value, best_signs


def _taxicab_starts(X: np.ndarray, strategy: InitStrategy) -> list[tuple[str, np.ndarray]]:
    column_norms = np.abs(X).sum(axis=0)
    match strategy:
        case InitStrategy.DOMINANT:
            j = int(np.argmax(column_norms))
            return [(f"column {j}", X[:, j])]
        case InitStrategy.ALL_COLUMNS:
            return [(f"column {j}", X[:, j]) for j in range(X.shape[1]) if column_norms[j] > 0]
        case InitStrategy.EXHAUSTIVE:
            _, signs = tsvd_exhaustive_oracle(X)
            return [("exhaustive", X @ signs)]


def _taxicab_factor(X: np.ndarray, strategy: InitStrategy, max_iter: int) -> FactorStep:
    best: FactorStep | None = None
    for label, start in _taxicab_starts(X, strategy):
        delta, a, b, iterations, converged = _taxicab_run(X, start, max_iter)
        logger.info(f"Taxicab start {label}: {delta=}, {iterations=}, {converged=}")
        # strict comparison keeps the earliest start among equal deltas
        if best is None or delta > best.delta:
            best = FactorStep(
                delta=delta,
                a=a,
                b=b,
                iterations=iterations,
                converged=converged,
                start_label=label,
            )
    return best


# l1-min SVD


def _regress_rows(M: np.ndarray, w: np.ndarray) -> np.ndarray:
    """theta_i = argmin ||M(i,) - theta w||_1 for every row, by weighted medians."""
    support = w != 0
    if not support.any():
        raise DegenerateFactor("The regressor vector collapsed to zero")
    ratios = M[:, support] / w[support]
    weights = np.abs(w[support])
    return np.array([median_breakpoint(row, weights) for row in ratios])


def _l1_fit_objective(X: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(X - np.outer(a, b)).sum())


def l1min_alternate(
    X: RealMatrix,
    b0: RealVector,
    tol: float = None,
    max_iter: int = None,
    start_label: str = "b0",
) -> FactorStep:
    """
    Rank-1 fit minimising sum_ij |x_ij - a_i b_j| by alternating weighted-median regressions:
    rows of X on b, then columns of X on a. After each sweep b is scaled to unit l1 norm
    (a absorbs the factor, the fit is unchanged). Stops when a sweep lowers the objective
    by no more than tol * (1 + objective).

    The emitted step has delta = ||a_raw||_1 ||b_raw||_1 and ||a||_1 = ||b||_1 = delta,
    so a b'/delta equals the fitted a_raw b_raw'.
    """
    tol = config.L1MIN_TOLERANCE if tol is None else tol
    max_iter = config.L1MIN_MAX_ITER if max_iter is None else max_iter
    X = as_matrix(X)
    b = np.array(b0, dtype=np.float64)
    if b.shape != (X.shape[1],):
        raise DimensionMismatch(f"b0 must have length {X.shape[1]}, got shape {b.shape}")
    if not np.isfinite(b).all():
        raise NonFiniteValue("The starting vector b0 holds NaN or infinite entries")
    if not b.any():
        raise ZeroVector("The starting vector b0 is zero")

    trace: list[float] = []
    previous = np.inf
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        a = _regress_rows(X, b)
        trace.append(_l1_fit_objective(X, a, b))
        b = _regress_rows(X.T, a)
        if not b.any():
            raise DegenerateFactor("The column regression returned a zero vector")
        current = _l1_fit_objective(X, a, b)
        trace.append(current)

        scale = float(np.abs(b).sum())
        b, a = b / scale, a * scale
        if current <= 0 or previous - current <= tol * (1 + current):
            converged = True
            break
        previous = current

    if not converged:
        logger.warning(f"Alternating l1 regression stopped after {sweeps} sweeps without converging")

    a_norm, b_norm = float(np.abs(a).sum()), float(np.abs(b).sum())
    if a_norm == 0:
        raise DegenerateFactor("The row regression returned a zero vector")
    delta = a_norm * b_norm
    return FactorStep(
        delta=delta,
        a=a * (delta / a_norm),
        b=b * (delta / b_norm),
        iterations=sweeps,
        converged=converged,
        start_label=start_label,
        raw_a=a,
        raw_b=b,
        objective_trace=tuple(trace),
    )


def _l1min_factor(X: np.ndarray, strategy: InitStrategy, tol: float, max_iter: int) -> FactorStep:
    if strategy != InitStrategy.DOMINANT:
        try:
            seed = _taxicab_factor(X, strategy, config.TAXICAB_MAX_ITER)
            return l1min_alternate(X, seed.b, tol, max_iter, start_label=f"taxicab {seed.start_label}")
        except DegenerateFactor as e:
            logger.warning(f"Taxicab seed failed ({e}), falling back to the dominant row")
    i = int(np.argmax(np.abs(X).sum(axis=1)))
    return l1min_alternate(X, X[i], tol, max_iter, start_label=f"row {i}")


def first_factor(
    X: RealMatrix,
    method: FactorMethod,
    strategy: InitStrategy = None,
    tol: float = None,
    max_iter: int = None,
    strict: bool = False,
) -> FactorStep:
    """
    Extracts the leading rank-1 term of X for the given method.

    params:
    strategy: starting values; DOMINANT (largest column), ALL_COLUMNS (one start per column,
        largest delta wins) or EXHAUSTIVE (taxicab start from the exact sign-vector maximiser)
    tol, max_iter: stopping rule of the iteration (relative delta change for SVD, objective decrease
        for l1-min); the taxicab iteration stops on a repeated sign vector and only reads max_iter
    strict: raise NoConvergence instead of returning a step flagged converged=False
    """
    X = _nonzero_matrix(X)
    strategy = DEFAULT_STRATEGIES[method] if strategy is None else strategy
    match method:
        case FactorMethod.SVD_L2:
            step = _power_factor(
                X,
                config.POWER_MAX_ITER if max_iter is None else max_iter,
                config.POWER_TOLERANCE if tol is None else tol,
            )
        case FactorMethod.TAXICAB_SVD:
            step = _taxicab_factor(X, strategy, config.TAXICAB_MAX_ITER if max_iter is None else max_iter)
        case FactorMethod.L1MIN_SVD:
            step = _l1min_factor(X, strategy, tol, max_iter)

    if not step.converged:
        if strict:
            raise NoConvergence(f"{method.value} factor did not converge in {step.iterations} iterations")
        logger.warning(f"{method.value} factor did not converge in {step.iterations} iterations")
    logger.info(f"{method.value} factor: delta={step.delta}, start={step.start_label}, iterations={step.iterations}")
    return step


def deflate(X: RealMatrix, step: FactorStep) -> RealMatrix:
    """X - a b'/delta."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape != (step.a.size, step.b.size):
        raise DimensionMismatch(f"Factor of shape {(step.a.size, step.b.size)} does not fit a matrix of shape {X.shape}")
    if step.delta <= 0:
        raise DegenerateFactor(f"Cannot deflate by a factor with delta={step.delta}")
    return X - step.term


def _sum_terms(steps, shape: tuple[int, int]) -> RealMatrix:
    reconstruction = np.zeros(shape)
    for step in steps:
        reconstruction += step.term
    return reconstruction


def reconstruct(d: Decomposition) -> RealMatrix:
    """sum_a a_a b_a'/delta_a."""
    return _sum_terms(d.steps, d.residual.shape)


def decompose(
    X: RealMatrix,
    method: FactorMethod,
    k: int,
    strategy: InitStrategy = None,
    tol: float = None,
    max_iter: int = None,
    rank_tolerance: float = None,
) -> Decomposition:
    """
    Stepwise decomposition X = sum_a a_a b_a'/delta_a + residual, extracting at most k
    terms by repeated first_factor and deflation. Stops early once the residual's
    entrywise norm drops to rank_tolerance * ||X||_p. A degenerate step, either an l1-min
    factor that collapses or any factor whose deflation does not lower the residual norm,
    is not kept: the run ends with converged=False and `aborted_at` set to its 1-based index.
    """
    X = _nonzero_matrix(X)
    if not 1 <= k <= min(X.shape):
        raise InvalidRank(f"k must lie between 1 and {min(X.shape)}, got {k}")
    rank_tolerance = config.RANK_TOLERANCE if rank_tolerance is None else rank_tolerance
    p = method.order

    x_norm = matrix_entrywise_norm(X, p)
    residual = np.array(X)
    steps: list[FactorStep] = []
    trace = [x_norm]
    aborted_at = None
    for index in range(1, k + 1):
        try:
            step = first_factor(residual, method, strategy, tol, max_iter)
        except DegenerateFactor as e:
            logger.warning(f"Step {index} of the {method.value} decomposition aborted: {e}")
            aborted_at = index
            break
        deflated = deflate(residual, step)
        residual_norm = matrix_entrywise_norm(deflated, p)
        if residual_norm >= trace[-1] * (1 - config.RELATIVE_TOLERANCE):
            logger.warning(
                f"Step {index} of the {method.value} decomposition aborted: "
                f"residual norm {residual_norm} does not drop below {trace[-1]}"
            )
            aborted_at = index
            break
        residual = deflated
        steps.append(step)
        trace.append(residual_norm)
        logger.info(f"Step {index}: delta={step.delta}, residual norm={residual_norm}")
        if trace[-1] <= rank_tolerance * x_norm:
            break

    return Decomposition(
        method=method,
        steps=tuple(steps),
        residual_trace=tuple(trace),
        reconstruction_error=matrix_entrywise_norm(X - _sum_terms(steps, X.shape), p),
        residual=residual,
        converged=aborted_at is None and all(step.converged for step in steps),
        aborted_at=aborted_at,
    )


def numerical_rank(M: RealMatrix, tol: float = None) -> int:
    """Number of singular values of M above tol * max(max|M|, 1)."""
    tol = config.STRUCTURE_TOLERANCE if tol is None else tol
    M = np.asarray(M, dtype=np.float64)
    return int(np.linalg.matrix_rank(M, tol=tol * max(float(np.abs(M).max(initial=0.0)), 1.0)))


def factor_structure(d: Decomposition) -> FactorStructure:
    """A'A, B'B and the ranks of A = [a_1..a_k], B = [b_1..b_k]."""
    if not d.steps:
        raise InvalidRank("The decomposition holds no factors")
    A = np.column_stack([step.a for step in d.steps])
    B = np.column_stack([step.b for step in d.steps])
    return FactorStructure(
        a_gram=A.T @ A,
        b_gram=B.T @ B,
        a_rank=numerical_rank(A),
        b_rank=numerical_rank(B),
    )
