"""Minimum-norm least squares for possibly rank-deficient sparse systems."""
from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import lsqr

#: systems with at most this many matrix entries are solved densely via SVD
DENSE_LIMIT = 4_000_000

#: singular values below ``RCOND * sigma_max`` are treated as zero
RCOND = 1e-10


def min_norm_solve(W, z: np.ndarray, *, rcond: float = RCOND, tol: float = 1e-13,
                   dense_limit: int = DENSE_LIMIT) -> tuple[np.ndarray, str]:
    """Minimum-norm minimiser of ``||W x - z||_2``.

    Small systems use the SVD-based LAPACK driver with cutoff ``rcond``.
    Large ones use LSQR started from zero, whose iterates stay in the row
    space of ``W`` and therefore converge to the minimum-norm solution.

    Returns:
        ``(x, method)`` where method is ``"svd"`` or ``"lsqr"``.
    """
    m, n = W.shape
    z = np.asarray(z, dtype=float)
    if m * n <= dense_limit:
        dense = W.toarray() if sp.issparse(W) else np.asarray(W, dtype=float)
        if m == 0 or n == 0:
            return np.zeros(n), "svd"
        x, *_ = scipy.linalg.lstsq(dense, z, cond=rcond, lapack_driver="gelsd")
        return x, "svd"
    W = sp.csr_matrix(W, dtype=float)
    x = lsqr(W, z, atol=tol, btol=tol, iter_lim=max(20 * n, 10_000))[0]
    return x, "lsqr"


def least_squares_residual(W, z: np.ndarray, **kwargs) -> float:
    """``min_x ||W x - z||_2``."""
    x, _ = min_norm_solve(W, z, **kwargs)
    return float(np.linalg.norm(W @ x - z))
