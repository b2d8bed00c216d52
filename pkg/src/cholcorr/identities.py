"""Numeric verifiers for the determinant and semi-partial identities that
make the two factor constructions interchangeable.

Each verifier computes both sides of an identity through deliberately
different code paths (explicit blockwise inverses against triangular
solves, LU determinants against pivot products) and reports the worst
absolute residual with its location, so a shared bug cannot cancel.

``check_order_conditions`` is the odd one out: it does not assume
positive-definiteness. It evaluates the two determinant orderings that
hold exactly when the matrix is positive-definite, which makes it a
diagnostic usable on arbitrary symmetric unit-diagonal input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_core import (
    TOL_SYM,
    CorrelationMatrix,
    _freeze,
    as_array,
    banachiewicz_inverse,
    bordered_minor_column,
    leading_minor_determinants,
    symmetry_error,
)
from .parametrizations import semipartial_table

TOL_ORD = 1e-10  # slack for order comparisons; exact ties are legitimate


@dataclass(frozen=True)
class IdentityReport:
    """Worst absolute residual of one identity over all index choices.

    ``location`` is the 1-based (i, j, l) triple of the worst case; l is 0
    for identities indexed by (i, j) only.
    """

    name: str
    max_residual: float
    location: tuple[int, int, int]

    def __post_init__(self):
        if self.max_residual < 0:
            raise ValueError("residual must be non-negative")


@dataclass(frozen=True)
class DeterminantLadder:
    """Per-column sequence of bordered-minor ratios.

    ``ratios[i-1]`` is |B_i^j| / |R_{i-1}| for i = 1..j, starting at 1 and
    ending at |R_j| / |R_{j-1}|. For a positive-definite matrix the
    sequence lies in (0, 1] and is non-increasing; successive differences
    are squared factor entries and therefore non-negative.
    """

    j: int
    ratios: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ratios", _freeze(self.ratios))

    def satisfies_order(self, tol: float = TOL_ORD) -> bool:
        r = self.ratios
        if not np.all(np.isfinite(r)):
            return False
        if np.any(r <= tol) or np.any(r > 1.0 + tol):
            return False
        return bool(np.all(np.diff(r) <= tol))


def determinant_ladders(r: CorrelationMatrix) -> list[DeterminantLadder]:
    """Ladders for every column j = 2..n of a valid correlation matrix,
    computed from factorization pivots."""
    minors = leading_minor_determinants(r)
    prev = np.concatenate(([1.0], minors[:-1]))
    return [
        DeterminantLadder(j=j, ratios=bordered_minor_column(r, j) / prev[:j])
        for j in range(2, r.n + 1)
    ]


def _inverse_chain(a: np.ndarray, upto: int) -> list[np.ndarray]:
    """Inverses of all leading blocks up to size ``upto`` by blockwise
    extension; element k is the inverse of the leading k-block, with the
    empty 0-block at index 0 so prefix quadratic forms vanish naturally."""
    invs = [np.zeros((0, 0))]
    if upto >= 1:
        invs.append(np.array([[1.0 / a[0, 0]]]))
    for i in range(2, upto + 1):
        prev = invs[-1]
        rho = a[: i - 1, i - 1]
        c = a[i - 1, i - 1] - rho @ prev @ rho
        invs.append(banachiewicz_inverse(prev, rho, c))
    return invs


def verify_product_sums(r: CorrelationMatrix) -> IdentityReport:
    """Residual of: the bordered quadratic form toward column j equals the
    running sum of products of semi-partial coefficients,

        rho_{i+1}^{*j} R_i^{-1} rho_{i+1}^T = sum_{k<=i} c[k, i+1] c[k, j],

    for 1 <= i < j <= n. Left side via blockwise inverses, right side via
    the triangular-solve table.
    """
    n = r.n
    if n < 2:
        raise ValueError("need n >= 2")
    a = r.values
    invs = _inverse_chain(a, n - 1)
    coeffs = semipartial_table(r).coeffs
    worst, where = -1.0, (0, 0, 0)
    for i in range(1, n):
        w = invs[i] @ a[:i, i]
        lhs = a[:i, :].T @ w
        rhs = coeffs[:, :i] @ coeffs[i, :i]
        res = np.abs(lhs - rhs)
        jbad = int(np.argmax(res[i:])) + i
        if res[jbad] > worst:
            worst, where = float(res[jbad]), (i, jbad + 1, 0)
    return IdentityReport("product_sums", worst, where)


def verify_recursion(r: CorrelationMatrix) -> IdentityReport:
    """Residual of the one-step recursion that grows the bordered quadratic
    form from block i-1 to block i,

        Q_{i+1}(j) = rho_i^{*j} R_{i-1}^{-1} (rho_i^{*i+1})^T
                     + (rho_{i,i+1} - q_{i,i+1})(rho_ij - q_ij) / (1 - q_ii),

    for 1 <= i < j <= n.
    """
    n = r.n
    if n < 3:
        raise ValueError("need n >= 3")
    a = r.values
    invs = _inverse_chain(a, n - 1)
    worst, where = -1.0, (0, 0, 0)
    for i in range(1, n):
        lhs = a[:i, :].T @ (invs[i] @ a[:i, i])
        pcols = a[: i - 1, :]
        base = pcols.T @ (invs[i - 1] @ pcols[:, i])
        v = invs[i - 1] @ a[: i - 1, i - 1]
        num1 = a[i - 1, i] - pcols[:, i] @ v
        num2 = a[i - 1, :] - pcols.T @ v
        den = 1.0 - a[: i - 1, i - 1] @ v
        rhs = base + num1 * num2 / den
        res = np.abs(lhs - rhs)
        jbad = int(np.argmax(res[i:])) + i
        if res[jbad] > worst:
            worst, where = float(res[jbad]), (i, jbad + 1, 0)
    return IdentityReport("recursion", worst, where)


def verify_ratio_differences(r: CorrelationMatrix) -> IdentityReport:
    """Residual of: the difference between two successive bordered-minor
    ratios equals the squared semi-partial numerator scaled by a minor
    ratio,

        |B_i^j|/|R_{i-1}| - |B_{i+1}^j|/|R_i|
            = (rho_ij - q_ij)^2 |R_{i-1}| / |R_i|,

    for j >= i+1 >= 3. Left side via LU determinants of principal
    submatrices, right side via the semi-partial table and pivot-product
    minors.
    """
    n = r.n
    if n < 3:
        raise ValueError("need n >= 3")
    a = r.values
    lead_lu = np.array([np.linalg.det(a[:k, :k]) for k in range(1, n + 1)])
    prev_lu = np.concatenate(([1.0], lead_lu[:-1]))
    minors = leading_minor_determinants(r)
    prev = np.concatenate(([1.0], minors[:-1]))
    coeffs = semipartial_table(r).coeffs
    worst, where = -1.0, (0, 0, 0)
    for i in range(2, n):
        for j in range(i + 1, n + 1):
            bi = _principal_det(a, i, j)
            bnext = _principal_det(a, i + 1, j)
            lhs = bi / prev_lu[i - 1] - bnext / lead_lu[i - 1]
            num = coeffs[j - 1, i - 1] * coeffs[i - 1, i - 1]
            rhs = num * num * prev[i - 1] / minors[i - 1]
            res = abs(lhs - rhs)
            if res > worst:
                worst, where = float(res), (i, j, 0)
    return IdentityReport("ratio_differences", worst, where)


def verify_general_recursion(r: CorrelationMatrix) -> IdentityReport:
    """Residual of the two-column generalization of the recursion,

        rho_{i+1}^{*j} R_i^{-1} (rho_{i+1}^{*l})^T
            = rho_i^{*j} R_{i-1}^{-1} (rho_i^{*l})^T
              + (rho_ij - q_ij)(rho_il - q_il) / (1 - q_ii),

    for j >= l >= i+1.
    """
    n = r.n
    if n < 3:
        raise ValueError("need n >= 3")
    a = r.values
    invs = _inverse_chain(a, n - 1)
    worst, where = -1.0, (0, 0, 0)
    for i in range(1, n):
        cols = a[:i, :]
        lhs = cols.T @ (invs[i] @ cols)
        pcols = a[: i - 1, :]
        qprev = pcols.T @ (invs[i - 1] @ pcols)
        v = invs[i - 1] @ a[: i - 1, i - 1]
        num = a[i - 1, :] - pcols.T @ v
        den = 1.0 - a[: i - 1, i - 1] @ v
        rhs = qprev + np.outer(num, num) / den
        res = np.abs(lhs - rhs)[i:, i:]
        res = np.tril(res)
        flat = int(np.argmax(res))
        row, col = divmod(flat, res.shape[1])
        if res[row, col] > worst:
            worst = float(res[row, col])
            where = (i, row + i + 1, col + i + 1)
    return IdentityReport("general_recursion", worst, where)


ALL_VERIFIERS = (
    ("product_sums", verify_product_sums, 2),
    ("recursion", verify_recursion, 3),
    ("ratio_differences", verify_ratio_differences, 3),
    ("general_recursion", verify_general_recursion, 3),
)


def _principal_det(a: np.ndarray, i: int, j: int) -> float:
    """LU determinant of the principal submatrix on {1..i-1, j} (1-based)."""
    idx = np.r_[np.arange(i - 1), j - 1]
    return float(np.linalg.det(a[np.ix_(idx, idx)]))


def check_order_conditions(m, *, tol_ord: float = TOL_ORD, tol_sym: float = TOL_SYM):
    """Evaluate the two determinant orderings on a symmetric unit-diagonal
    matrix without assuming positive-definiteness.

    Returns ``(det_order_ok, ratio_order_ok, ladders)`` where the first
    flag asserts that the leading-minor sequence stays positive and
    non-increasing (within ``tol_ord``), the second asserts the same for
    every per-column ladder of bordered-minor ratios, and ``ladders``
    holds the computed ladders for columns j = 2..n. The two flags are
    both true exactly when the matrix is positive-definite, up to the
    tolerance band around zero.

    All determinants are computed by LU so the diagnostic works on
    indefinite input; feeding it anything asymmetric or with a non-unit
    diagonal raises ``ValueError``.
    """
    a = as_array(m)
    n = a.shape[0]
    if symmetry_error(a) > tol_sym:
        raise ValueError("order conditions are defined for symmetric matrices")
    if np.max(np.abs(np.diag(a) - 1.0)) > tol_sym:
        raise ValueError("order conditions are defined for unit-diagonal matrices")
    a = 0.5 * (a + a.T)
    np.fill_diagonal(a, 1.0)

    leading = np.array([np.linalg.det(a[:k, :k]) for k in range(1, n + 1)])
    det_ok = bool(
        np.all(leading > tol_ord)
        and np.all(np.diff(leading) <= tol_ord)
        and leading[0] <= 1.0 + tol_ord
    )

    prev = np.concatenate(([1.0], leading[:-1]))
    ladders = []
    ratio_ok = True
    with np.errstate(divide="ignore", invalid="ignore"):
        for j in range(2, n + 1):
            bordered = np.array([_principal_det(a, i, j) for i in range(1, j + 1)])
            ladder = DeterminantLadder(j=j, ratios=bordered / prev[:j])
            ladders.append(ladder)
            if not ladder.satisfies_order(tol_ord):
                ratio_ok = False
    return det_ok, ratio_ok, ladders
