__all__ = [
    "TaxicabError",
    "NonFiniteValue",
    "DimensionMismatch",
    "ZeroVector",
    "ZeroMatrix",
    "EmptyInput",
    "AllZeroWeights",
    "NegativeWeights",
    "Indeterminate",
    "LinearlyDependent",
    "DegenerateVector",
    "DegenerateFactor",
    "NoConvergence",
    "TooLarge",
    "InvalidRank",
    "MethodMismatch",
    "MatrixIOError",
    "ParseError",
    "RaggedRows",
]


class TaxicabError(Exception):
    """Base class for every error raised by the package. `exit_code` is what the CLI returns for it."""
    exit_code = 2
    alias = "generic"


class NonFiniteValue(TaxicabError):
    alias = "non_finite"


class DimensionMismatch(TaxicabError):
    alias = "dimension_mismatch"


class ZeroVector(TaxicabError):
    alias = "zero_vector"


class ZeroMatrix(TaxicabError):
    alias = "zero_matrix"


class EmptyInput(TaxicabError):
    alias = "empty_input"


class AllZeroWeights(TaxicabError):
    alias = "zero_weights"


class NegativeWeights(TaxicabError):
    alias = "negative_weights"


class Indeterminate(TaxicabError):
    """The equality/strict decision falls outside the tolerance dead band on the wrong side."""
    exit_code = 1
    alias = "indeterminate"


class LinearlyDependent(TaxicabError):
    alias = "linearly_dependent"


class DegenerateVector(TaxicabError):
    alias = "degenerate_vector"


class DegenerateFactor(TaxicabError):
    alias = "degenerate_factor"


class NoConvergence(TaxicabError):
    exit_code = 1
    alias = "no_convergence"


class TooLarge(TaxicabError):
    alias = "too_large"


class InvalidRank(TaxicabError):
    alias = "invalid_rank"


class MethodMismatch(TaxicabError):
    alias = "method_mismatch"


class MatrixIOError(TaxicabError):
    exit_code = 3
    alias = "io"


class ParseError(TaxicabError):
    exit_code = 3
    alias = "parse"

    def __init__(self, row: int, col: int, cell: str):
        self.row = row
        self.col = col
        self.cell = cell
        super().__init__(f"cannot parse {cell!r} as a finite real at row {row}, column {col}")


class RaggedRows(TaxicabError):
    exit_code = 3
    alias = "ragged"
