"""Dense complex-matrix subspace toolkit.

Numerical rank, right/left null spaces, span dimension and span equality,
and general (non-Hermitian) eigendecomposition with a fixed deterministic
ordering.  All routines are pure functions of their inputs and safe to call
from concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpanError,
    DimensionMismatchError,
    InvalidInputError,
    NumericalFailureError,
)

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "numerical_rank",
    "right_null_basis",
    "left_null_basis",
    "span_dimension",
    "spans_equal",
    "general_eig",
]

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for rank decisions and leakage verdicts.

    ``relative_rank_tol`` multiplies the largest singular value; ``None``
    selects the size-dependent default ``max(rows, cols) * eps * 4096``
    (headroom for chained inverse products, whose residual singular values
    can reach ~1e-12 relative).  ``leakage_tol`` bounds
    relative Frobenius-norm leakage of zero-forcing filters.
    """

    relative_rank_tol: float | None = None
    leakage_tol: float = 1e-8

    def __post_init__(self):
        if self.relative_rank_tol is not None and not (
            0.0 < self.relative_rank_tol < 1.0
        ):
            raise InvalidInputError(
                f"relative_rank_tol must be in (0, 1), got {self.relative_rank_tol}"
            )
        if not 0.0 < self.leakage_tol < 1.0:
            raise InvalidInputError(
                f"leakage_tol must be in (0, 1), got {self.leakage_tol}"
            )

    def rank_tol_for(self, shape: tuple[int, int]) -> float:
        if self.relative_rank_tol is not None:
            return self.relative_rank_tol
        return max(shape) * _EPS * 4096


DEFAULT_TOL = Tolerance()


def as_matrix(A) -> np.ndarray:
    """Validate and coerce input to a finite 2-D complex128 array."""
    A = np.asarray(A)
    if A.ndim != 2 or A.size == 0:
        raise InvalidInputError(f"expected a nonempty 2-D matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise InvalidInputError("matrix contains non-finite entries")
    return A.astype(np.complex128, copy=False)


def numerical_rank(A, tol: Tolerance = DEFAULT_TOL) -> int:
    """Count of singular values exceeding ``rank_tol * sigma_max``."""
    A = as_matrix(A)
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_tol_for(A.shape) * s[0]))


def right_null_basis(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of {x : A x = 0}, smallest singular directions first.

    Returns a cols(A) x (cols(A) - rank(A)) matrix; 0 columns if A has full
    column rank.  Deterministic given (A, tol).
    """
    A = as_matrix(A)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol.rank_tol_for(A.shape) * s[0]))
    # vh rows are ordered by descending singular value; reverse so the
    # smallest singular directions come first.
    return vh[rank:][::-1].conj().T


def left_null_basis(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns y with y^H A = 0; rows(A) - rank(A) of them."""
    A = as_matrix(A)
    return right_null_basis(A.conj().T, tol)


def span_dimension(columns, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of the horizontal concatenation of the given matrices."""
    if not columns:
        raise InvalidInputError("need at least one matrix")
    mats = [as_matrix(c) for c in columns]
    rows = mats[0].shape[0]
    for m in mats:
        if m.shape[0] != rows:
            raise DimensionMismatchError(
                f"row counts differ: {rows} vs {m.shape[0]}"
            )
    return numerical_rank(np.hstack(mats), tol)


def spans_equal(A, B, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff rank([A B]) = rank(A) = rank(B).

    Both inputs must have full column rank; rank-deficient input raises
    DegenerateSpanError.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatchError(
            f"row counts differ: {A.shape[0]} vs {B.shape[0]}"
        )
    rank_a = numerical_rank(A, tol)
    rank_b = numerical_rank(B, tol)
    if rank_a < A.shape[1] or rank_b < B.shape[1]:
        raise DegenerateSpanError("span comparison on a rank-deficient matrix")
    if rank_a != rank_b:
        return False
    return numerical_rank(np.hstack([A, B]), tol) == rank_a


def general_eig(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a square complex matrix.

    Returns (eigenvalues, eigenvectors) with unit-norm eigenvector columns,
    ordered by descending |lambda|, ties broken by descending real part,
    then descending imaginary part.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"matrix is not square: {A.shape}")
    try:
        w, v = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((-w.imag, -w.real, -np.abs(w)))
    w = w[order]
    v = v[:, order]
    v = v / np.linalg.norm(v, axis=0)
    return w, v
