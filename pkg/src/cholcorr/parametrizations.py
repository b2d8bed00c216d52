"""Two closed-form routes to the Cholesky factor of a correlation matrix,
plus the covariance extension.

The first route fills entry (j, i) with the semi-partial correlation
between variables i and j given 1..i-1,

    l_ji = (rho_ij - q_ij) / sqrt(1 - q_ii),   q_ij = rho_i^{*j} R_{i-1}^{-1} rho_i^T,

where ``rho_i^{*j}`` is the prefix of column j above row i. The second
route takes each squared off-diagonal entry as the difference between two
successive ratios of bordered principal minors,

    l_ji = s_ij sqrt( |B_i^j| / |R_{i-1}| - |B_{i+1}^j| / |R_i| ),

with ``B_i^j`` the leading (i-1)-block bordered by column j's prefix and
``s_ij`` an externally supplied sign (the determinants fix magnitudes
only). Both routes must agree with the reference factorization entrywise;
the test suite holds them to ``TOL_EQ``.

Quadratic forms are evaluated by triangular solves against the reference
factor of the leading block rather than explicit inversion; explicit
blockwise inverses live in the ``identities`` verifiers where they are
the point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NegativeRadicand, NotPositiveDefinite
from .matrix_core import (
    TOL_PD,
    CholeskyFactor,
    CorrelationMatrix,
    CovarianceMatrix,
    _cholesky_pivots,
    _freeze,
    bordered_minor_column,
    leading_minor_determinants,
)


@dataclass(frozen=True)
class SemiPartialTable:
    """Lower-triangular table of semi-partial correlation coefficients.

    ``coeffs[j-1, i-1]`` (1-based i <= j) is the semi-partial correlation
    between variables i and j given variables 1..i-1; the diagonal entry
    is the residual standard deviation sqrt(1 - q_ii), which lies in
    (0, 1] with entry (1, 1) equal to 1.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=float)
        if a.shape != (self.n, self.n):
            raise ValueError(f"coefficient table must be {self.n} x {self.n}")
        if np.any(np.triu(a, 1) != 0.0):
            raise ValueError("table must be lower-triangular")
        d = np.diag(a)
        if a[0, 0] != 1.0 or np.any(d <= 0.0) or np.any(d > 1.0):
            raise ValueError("diagonal must lie in (0, 1] with entry (1,1) = 1")
        low = a[np.tril_indices(self.n, -1)]
        if low.size and np.max(np.abs(low)) >= 1.0:
            raise ValueError("off-diagonal coefficients must lie inside (-1, 1)")
        object.__setattr__(self, "coeffs", _freeze(a))

    def coefficient(self, i: int, j: int) -> float:
        """Semi-partial coefficient for column i toward row j (1-based, i <= j)."""
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"need 1 <= i <= j <= {self.n}, got i={i}, j={j}")
        return float(self.coeffs[j - 1, i - 1])


@dataclass(frozen=True)
class SignPattern:
    """Strictly-lower-triangular table of factor-entry signs (+1 or -1)."""

    n: int
    signs: np.ndarray

    def __post_init__(self):
        s = np.array(self.signs, dtype=int)
        if s.shape != (self.n, self.n):
            raise ValueError(f"sign table must be {self.n} x {self.n}")
        if np.any(np.triu(s) != 0):
            raise ValueError("signs are defined on strictly-lower positions only")
        low = s[np.tril_indices(self.n, -1)]
        if low.size and not np.all(np.abs(low) == 1):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", _freeze(s).astype(int))

    def sign(self, i: int, j: int) -> int:
        """Sign attached to factor entry (row j, column i), 1-based i < j."""
        if not 1 <= i < j <= self.n:
            raise IndexError(f"need 1 <= i < j <= {self.n}, got i={i}, j={j}")
        return int(self.signs[j - 1, i - 1])


def semipartial_table(r: CorrelationMatrix) -> SemiPartialTable:
    """All semi-partial coefficients of a correlation matrix in one pass.

    Column i is produced from one triangular solve against the reference
    factor of the leading (i-1)-block (which is the leading block of the
    full reference factor), so the whole table costs O(n^3).
    """
    a = r.values
    n = r.n
    ref = _cholesky_pivots(a, TOL_PD)[0]
    coeffs = np.zeros((n, n))
    coeffs[:, 0] = a[:, 0]
    coeffs[0, 0] = 1.0
    for i in range(2, n + 1):
        block = ref[: i - 1, : i - 1]
        rhs = a[: i - 1, i - 1:]
        w = solve_triangular(block, rhs, lower=True, check_finite=False)
        z = w[:, 0]
        schur = 1.0 - z @ z
        if not schur > TOL_PD:
            raise NotPositiveDefinite(i, schur)
        root = np.sqrt(schur)
        coeffs[i - 1, i - 1] = root
        if i < n:
            coeffs[i:, i - 1] = (a[i - 1, i:] - z @ w[:, 1:]) / root
    return SemiPartialTable(n=n, coeffs=coeffs)


def semipartial_coefficient(r: CorrelationMatrix, i: int, j: int) -> float:
    """Semi-partial correlation between variables i and j given 1..i-1
    (1-based, 1 <= i <= j <= n).

    For i = 1 this is the plain correlation rho_1j; for i = j it is the
    residual standard deviation sqrt(1 - q_ii).
    """
    n = r.n
    if not 1 <= i <= j <= n:
        raise IndexError(f"need 1 <= i <= j <= {n}, got i={i}, j={j}")
    a = r.values
    if i == 1:
        return 1.0 if j == 1 else float(a[0, j - 1])
    block = _cholesky_pivots(a[: i - 1, : i - 1], TOL_PD)[0]
    z = solve_triangular(block, a[: i - 1, i - 1], lower=True, check_finite=False)
    schur = 1.0 - z @ z
    if not schur > TOL_PD:
        raise NotPositiveDefinite(i, schur)
    if i == j:
        return float(np.sqrt(schur))
    w = solve_triangular(block, a[: i - 1, j - 1], lower=True, check_finite=False)
    return float((a[i - 1, j - 1] - w @ z) / np.sqrt(schur))


def chol_semipartial(r: CorrelationMatrix) -> CholeskyFactor:
    """Cholesky factor built entrywise from semi-partial coefficients."""
    return CholeskyFactor(semipartial_table(r).coeffs, "semipartial")


def extract_signs(l: CholeskyFactor) -> SignPattern:
    """Signs of the strictly-lower factor entries; zeros map to +1 so the
    extraction is total and reconstruction is unaffected."""
    low = np.tril(np.ones((l.n, l.n), dtype=int), -1)
    s = np.where(l.entries < 0.0, -1, 1) * low
    return SignPattern(n=l.n, signs=s)


def chol_detratio(r: CorrelationMatrix, signs: SignPattern) -> CholeskyFactor:
    """Cholesky factor with magnitudes from determinant-ratio differences
    and signs supplied externally.

    For row j the ratios |B_i^j| / |R_{i-1}| (i = 1..j, starting at 1 and
    ending at |R_j|/|R_{j-1}|) come from a single reordered factorization;
    successive differences are the squared entries. Differences below
    -TOL_PD raise ``NegativeRadicand``; tiny negative values produced by
    rounding are clamped to zero. The diagonal does not depend on signs.
    """
    n = r.n
    if signs.n != n:
        raise ValueError(f"sign pattern is for n={signs.n}, matrix has n={n}")
    minors = leading_minor_determinants(r)
    prev = np.concatenate(([1.0], minors[:-1]))
    entries = np.zeros((n, n))
    entries[0, 0] = 1.0
    for j in range(2, n + 1):
        ladder = bordered_minor_column(r, j) / prev[:j]
        diffs = ladder[:-1] - ladder[1:]
        low = np.min(diffs) if diffs.size else 0.0
        if low < -TOL_PD:
            i_bad = int(np.argmin(diffs)) + 1
            raise NegativeRadicand(i_bad, j, float(low))
        np.clip(diffs, 0.0, None, out=diffs)
        entries[j - 1, : j - 1] = signs.signs[j - 1, : j - 1] * np.sqrt(diffs)
        entries[j - 1, j - 1] = np.sqrt(ladder[-1])
    return CholeskyFactor(entries, "detratio")


def chol_covariance(s: CovarianceMatrix) -> CholeskyFactor:
    """Cholesky factor of a covariance matrix from determinant ratios.

    Same ladder construction as ``chol_detratio`` with the bordered minors
    taken on the covariance itself, so the first ratio of row j starts at
    sigma_j^2 instead of 1. Signs come from the semi-partial factor of the
    underlying correlation matrix. Row j equals sigma_j times row j of the
    correlation factor.
    """
    n = s.n
    signs = extract_signs(chol_semipartial(s.correlation())).signs
    minors = leading_minor_determinants(s)
    prev = np.concatenate(([1.0], minors[:-1]))
    entries = np.zeros((n, n))
    entries[0, 0] = float(s.sigmas[0])
    scale = float(np.max(s.sigmas)) ** 2
    for j in range(2, n + 1):
        ladder = bordered_minor_column(s, j) / prev[:j]
        diffs = ladder[:-1] - ladder[1:]
        low = np.min(diffs) if diffs.size else 0.0
        if low < -TOL_PD * scale:
            i_bad = int(np.argmin(diffs)) + 1
            raise NegativeRadicand(i_bad, j, float(low))
        np.clip(diffs, 0.0, None, out=diffs)
        entries[j - 1, : j - 1] = signs[j - 1, : j - 1] * np.sqrt(diffs)
        entries[j - 1, j - 1] = np.sqrt(ladder[-1])
    return CholeskyFactor(entries, "covariance")
