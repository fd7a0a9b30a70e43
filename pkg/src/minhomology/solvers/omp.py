"""Orthogonal matching pursuit on a sparse dictionary.

The least-squares fit on the selected support is kept as the inverse ``M`` of
the Cholesky factor of the support's Gram matrix, so that ``W_S M^T`` has
orthonormal columns. Adding a column costs one dense matrix-vector product
with ``M`` plus a few sparse products with ``W``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass
class OmpInfo:
    iterations: int
    support: list[int]
    residual: float
    stopped: str
    skipped: int


def _col(W: sp.csc_matrix, j: int) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = W.indptr[j], W.indptr[j + 1]
    return W.indices[lo:hi], W.data[lo:hi]


def omp(W: sp.csc_matrix, z: np.ndarray, *, tol: float, max_support: int,
        refine_steps: int = 3) -> tuple[np.ndarray, OmpInfo]:
    """Greedy sparse solution of ``W x = z``.

    Each iteration selects the column with the largest ``|w_j . r|`` (no column
    normalisation) and refits every selected coefficient by least squares.

    Args:
        W: sparse ``(m, n)`` dictionary.
        z: target vector of length ``m``.
        tol: stop once ``||z - W x||_2 <= tol`` (absolute).
        max_support: cap on the number of selected columns.

    Returns:
        ``(x, info)``; ``info.stopped`` is ``"residual"``, ``"max_support"`` or ``"stalled"``.
    """
    W = sp.csc_matrix(W, dtype=float)
    W.sort_indices()
    m, n = W.shape
    WT = W.T.tocsr()
    z = np.asarray(z, dtype=float)
    max_support = min(max_support, n)

    cap = 64
    M = np.zeros((cap, cap))
    u = np.zeros(cap)  # M @ (W_S^T z)
    selected: list[int] = []
    blocked = np.zeros(n, dtype=bool)
    skipped = 0
    r = z.copy()
    scale = float(abs(W).max()) if W.nnz else 1.0
    stopped = "residual"
    iterations = 0

    def coefficients() -> np.ndarray:
        k = len(selected)
        x = np.zeros(n)
        if k:
            x[selected] = M[:k, :k].T @ u[:k]
        return x

    def refine(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        res = z - W @ x
        k = len(selected)
        for _ in range(refine_steps if k else 0):
            g = (WT @ res)[selected]
            dx = M[:k, :k].T @ (M[:k, :k] @ g)
            x[selected] += dx
            new = z - W @ x
            if np.linalg.norm(new) >= np.linalg.norm(res):
                x[selected] -= dx
                break
            res = new
        return x, res

    while True:
        rn = np.linalg.norm(r)
        if rn <= tol:
            x, res = refine(coefficients())
            if np.linalg.norm(res) <= tol:
                stopped = "residual"
                break
            r = res
            rn = np.linalg.norm(r)
        if len(selected) >= max_support:
            stopped = "max_support"
            break
        corr = WT @ r
        corr[blocked] = 0.0
        j = int(np.argmax(np.abs(corr)))
        if abs(corr[j]) <= 1e-14 * scale * max(rn, 1e-300) or not np.isfinite(corr[j]):
            stopped = "stalled"
            break
        iterations += 1
        rows, vals = _col(W, j)
        wj = np.zeros(m)
        wj[rows] = vals
        k = len(selected)
        # Gram entries against the current support
        g_full = WT @ wj
        if k:
            g = g_full[selected]
            nz = np.flatnonzero(g)
            l = M[:k, :k][:, nz] @ g[nz]
        else:
            l = np.zeros(0)
        norm2 = float(vals @ vals)
        d2 = norm2 - float(l @ l)
        blocked[j] = True
        if d2 <= 1e-12 * norm2:
            skipped += 1
            continue
        d = np.sqrt(d2)
        if k + 1 > cap:
            cap *= 2
            M2 = np.zeros((cap, cap))
            M2[:k, :k] = M[:k, :k]
            M = M2
            u = np.concatenate([u, np.zeros(cap - len(u))])
        new_row = np.zeros(k + 1)
        if k:
            new_row[:k] = -(l @ M[:k, :k]) / d
        new_row[k] = 1.0 / d
        M[k, :k + 1] = new_row
        selected.append(j)
        bj = float(vals @ z[rows])
        u[k] = (bj - float(l @ u[:k])) / d
        # orthonormal direction q = W_S M[k]^T
        coef = np.zeros(n)
        coef[selected] = new_row
        q = W @ coef
        r = r - q * float(q @ r)

    x, res = refine(coefficients())
    info = OmpInfo(iterations, list(selected), float(np.linalg.norm(res)), stopped, skipped)
    return x, info
