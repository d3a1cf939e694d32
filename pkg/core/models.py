from __future__ import annotations

import math
from enum import Enum
from dataclasses import field, dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "RealVector",
    "RealMatrix",
    "NormOrder",
    "ProjectionMethod",
    "FactorMethod",
    "InitStrategy",
    "Relation",
    "PythagoreanVerdict",
    "ProjectionResult",
    "ConjugateSet",
    "FactorStep",
    "Decomposition",
    "StepCheck",
    "NormAccounting",
    "FactorStructure",
    "InvariantCheck",
]

# dense containers, validated by core.linalg.as_vector / as_matrix
RealVector = NDArray[np.float64]
RealMatrix = NDArray[np.float64]


def _read_only(*arrays) -> None:
    for array in arrays:
        if isinstance(array, np.ndarray):
            array.setflags(write=False)


# enum
class NormOrder(Enum):
    L1 = "L1", 1, math.inf
    L2 = "L2", 2, 2

    def __new__(cls, value, p: int, dual: float):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.p = p
        obj.dual = dual
        return obj

    @classmethod
    def from_p(cls, p: int | str) -> NormOrder:
        for order in cls:
            if str(order.p) == str(p):
                return order
        raise ValueError(f"Norm order must be 1 or 2, got {p!r}")


class ProjectionMethod(Enum):
    EUCLIDEAN = "eucl", NormOrder.L2
    L1_OPERATOR = "l1op", NormOrder.L1
    L1_MIN = "l1min", NormOrder.L1

    def __new__(cls, value, order: NormOrder):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.order = order
        return obj


class FactorMethod(Enum):
    SVD_L2 = "svd", NormOrder.L2
    TAXICAB_SVD = "tsvd", NormOrder.L1
    L1MIN_SVD = "l1min", NormOrder.L1

    def __new__(cls, value, order: NormOrder):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.order = order
        return obj


class InitStrategy(Enum):
    DOMINANT = "DOMINANT"
    ALL_COLUMNS = "ALL_COLUMNS"
    EXHAUSTIVE = "EXHAUSTIVE"


class Relation(Enum):
    EQUALITY = "EQUALITY", "="
    STRICT_INEQUALITY = "STRICT_INEQUALITY", "<"
    # p=2 only: positive cross term ((1-b)∘y)'(b∘y) makes the squared sum smaller than ||y||²
    REVERSE_INEQUALITY = "REVERSE_INEQUALITY", ">"

    def __new__(cls, value, symbol: str):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.symbol = symbol
        return obj


# dto
@dataclass(frozen=True)
class PythagoreanVerdict:
    """
    Outcome of comparing ||y|| against the sum of the fitted and residual terms.
    For L2 the terms are squared norms, for L1 plain norms.

    fit_term, residual_term: the two summands of `rhs`
    b_in_unit_interval: every valid Hadamard coefficient lies in [0, 1]
    predicted: the relation a corollary predicts, when one was consulted
    """
    order: NormOrder
    relation: Relation
    lhs: float
    rhs: float
    fit_term: float
    residual_term: float
    b_in_unit_interval: bool
    predicted: Relation | None = None

    @property
    def summary(self) -> str:
        return (
            f"{self.relation.value.lower().replace('_', ' ')}: "
            f"{self.lhs:.12g} {self.relation.symbol} {self.fit_term:.12g} + {self.residual_term:.12g}"
        )


@dataclass(frozen=True)
class ProjectionResult:
    method: ProjectionMethod
    alpha: float
    fitted: RealVector
    residual: RealVector
    b_coeffs: RealVector
    b_valid: NDArray[np.bool_]
    verdict: PythagoreanVerdict

    def __post_init__(self):
        _read_only(self.fitted, self.residual, self.b_coeffs, self.b_valid)

    @property
    def y(self) -> RealVector:
        return self.fitted + self.residual


@dataclass(frozen=True)
class ConjugateSet:
    vectors: tuple[RealVector, ...]
    order: NormOrder
    gram: RealMatrix

    def __post_init__(self):
        _read_only(*self.vectors, self.gram)


@dataclass(frozen=True)
class FactorStep:
    """
    One rank-1 term a b'/delta of a stepwise decomposition, with ||a||_p = ||b||_p = delta.
    raw_a, raw_b hold the unnormalised alternating pair of the l1-min method (a_raw b_raw' = a b'/delta).
    objective_trace holds the l1-min objective after every half-sweep.
    """
    delta: float
    a: RealVector
    b: RealVector
    iterations: int
    converged: bool
    start_label: str
    raw_a: RealVector | None = None
    raw_b: RealVector | None = None
    objective_trace: tuple[float, ...] = ()

    def __post_init__(self):
        _read_only(self.a, self.b, self.raw_a, self.raw_b)

    @property
    def term(self) -> RealMatrix:
        return np.outer(self.a, self.b) / self.delta


@dataclass(frozen=True)
class Decomposition:
    method: FactorMethod
    steps: tuple[FactorStep, ...]
    residual_trace: tuple[float, ...]
    reconstruction_error: float
    residual: RealMatrix
    converged: bool = True
    aborted_at: int | None = None

    def __post_init__(self):
        _read_only(self.residual)

    @property
    def deltas(self) -> tuple[float, ...]:
        return tuple(step.delta for step in self.steps)

    @property
    def rank(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class StepCheck:
    """Triangle-inequality bound on one deflation step: ||X_a||^p <= ||a b'||^p/delta^p + ||X_a+1||^p."""
    step: int
    lhs: float
    rhs: float
    holds: bool
    equality: bool


@dataclass(frozen=True)
class NormAccounting:
    """
    Row/column/total norm bookkeeping of a decomposition.
    For L2 the `*_lhs` and `*_rhs` pairs are equal, for L1 lhs <= rhs.
    The final residual's share is included in every rhs, so partial runs stay valid.
    """
    order: NormOrder
    full_rank: bool
    column_lhs: RealVector
    column_rhs: RealVector
    row_lhs: RealVector
    row_rhs: RealVector
    total_lhs: float
    total_rhs: float
    relation: Relation
    step_checks: tuple[StepCheck, ...] = field(default_factory=tuple)

    def __post_init__(self):
        _read_only(self.column_lhs, self.column_rhs, self.row_lhs, self.row_rhs)

    @property
    def margin(self) -> float:
        return self.total_rhs - self.total_lhs


@dataclass(frozen=True)
class FactorStructure:
    a_gram: RealMatrix
    b_gram: RealMatrix
    a_rank: int
    b_rank: int

    def __post_init__(self):
        _read_only(self.a_gram, self.b_gram)


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    passed: bool
    detail: str = ""
