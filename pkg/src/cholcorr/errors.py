"""Exception types shared across the library."""


class NotPositiveDefinite(ValueError):
    """A factorization pivot fell at or below the acceptance tolerance.

    The offending pivot is the Schur complement of the leading block at
    ``pivot_index`` (1-based), i.e. the square of the diagonal entry the
    factorization was about to produce. It may be negative.
    """

    def __init__(self, pivot_index: int, pivot_value: float):
        self.pivot_index = int(pivot_index)
        self.pivot_value = float(pivot_value)
        super().__init__(
            f"matrix is not positive-definite: pivot {self.pivot_index} "
            f"is {self.pivot_value:.6e}"
        )


class SchurNonPositive(ValueError):
    """Blockwise inversion was handed a non-positive Schur complement."""

    def __init__(self, value: float):
        self.value = float(value)
        super().__init__(f"Schur complement {self.value:.6e} is not positive")


class NegativeRadicand(ValueError):
    """A difference of successive determinant ratios was negative beyond
    tolerance, which signals a non-positive-definite or corrupted input.

    ``i`` and ``j`` locate the factor entry (1-based, row ``j``, column
    ``i``); ``value`` is the offending difference.
    """

    def __init__(self, i: int, j: int, value: float):
        self.i = int(i)
        self.j = int(j)
        self.value = float(value)
        super().__init__(
            f"negative radicand {self.value:.6e} at factor entry "
            f"(row {self.j}, column {self.i})"
        )


class DegenerateColumn(ValueError):
    """A data column has (numerically) zero sample variance."""

    def __init__(self, index: int):
        self.index = int(index)
        super().__init__(f"column {self.index} has no sample variance")


class NearSingular(ValueError):
    """An estimated correlation matrix failed positive-definite construction."""


class InvalidSemiPartial(ValueError):
    """A semi-partial estimate with magnitude >= 1 cannot form a t statistic."""
