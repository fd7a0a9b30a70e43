"""Dense two-phase tableau simplex for ``min sum_j c_j |x_j|  s.t.  D x = b``.

Free variables are split as ``x = x+ - x-``. The tableau only stores the
``x+`` columns: the ``x-`` column of variable ``j`` is always the negation of
the ``x+`` column, so its reduced cost is ``c_j + y_j`` where ``c_j - y_j`` is
the reduced cost of ``x+_j``.

Entering variables are chosen by Dantzig's largest-decrease rule; after a run
of degenerate pivots the solver switches to Bland's smallest-index rule until
the objective strictly improves, which rules out cycling.

Phase 1 starts from an all-artificial basis. Artificial variables left basic at
level zero after phase 1 are never re-entered; in phase 2 they are treated as
variables fixed at zero, so any entering column touching their row pivots
them out (a degenerate step). Rows whose artificial is never pivoted out are
linearly dependent on the others and are simply ignored.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ARTIFICIAL = -1


@dataclass
class SimplexInfo:
    status: str
    pivots: int
    phase1_pivots: int
    bland_pivots: int
    objective: float
    infeasibility: float


class SimplexFailure(RuntimeError):
    pass


class Infeasible(RuntimeError):
    def __init__(self, infeasibility: float):
        self.infeasibility = infeasibility
        super().__init__(f"phase 1 ended with infeasibility {infeasibility:.3e}")


def _var_code(j: int, negative: bool, n: int) -> int:
    return j + n if negative else j


class _Tableau:
    def __init__(self, D: np.ndarray, b: np.ndarray, pivot_tol: float, degenerate_limit: int):
        m, n = D.shape
        sign = np.where(b < 0, -1.0, 1.0)
        self.T = D * sign[:, None]
        self.b = np.abs(b)
        self.m, self.n = m, n
        # basis[i] in 0..2n-1 for x+/x- variables, ARTIFICIAL otherwise
        self.basis = np.full(m, ARTIFICIAL, dtype=np.int64)
        self.basic_var = np.zeros(n, dtype=bool)
        self.pivot_tol = pivot_tol
        self.degenerate_limit = degenerate_limit
        self.pivots = 0
        self.bland_pivots = 0

    def column(self, q: int) -> np.ndarray:
        j = q % self.n
        col = self.T[:, j]
        return -col if q >= self.n else col

    def pivot(self, r: int, q: int, y: np.ndarray, d_q: float):
        n = self.n
        j = q % n
        t = self.column(q).copy()
        p = t[r]
        row = self.T[r] / p
        br = self.b[r] / p
        if abs(br) < 1e-300 or br < 0:
            br = max(br, 0.0)
        rows = np.flatnonzero(t)
        rows = rows[rows != r]
        if len(rows):
            cols = np.flatnonzero(row)
            if len(cols) * 4 < n:
                self.T[np.ix_(rows, cols)] -= np.outer(t[rows], row[cols])
            else:
                self.T[rows] -= np.outer(t[rows], row)
            self.b[rows] -= t[rows] * br
        self.T[r] = row
        self.b[r] = br
        # the entering column becomes +-e_r exactly
        self.T[:, j] = 0.0
        self.T[r, j] = -1.0 if q >= n else 1.0
        neg = self.b < 0
        if neg.any():
            # ratio-test round-off; values are feasible up to tolerance
            self.b[neg] = 0.0
        y += d_q * row
        old = self.basis[r]
        if old != ARTIFICIAL:
            self.basic_var[old % n] = False
        self.basis[r] = q
        self.basic_var[j] = True
        self.pivots += 1

    def run(self, c: np.ndarray, y: np.ndarray, phase: int, cost_tol: float, max_pivots: int) -> None:
        """Pivot until no column has reduced cost below ``-cost_tol``.

        ``y`` holds ``c_B^T T`` restricted to the x+ columns and is updated in place.
        """
        n = self.n
        degenerate_run = 0
        bland = False
        while True:
            if self.pivots >= max_pivots:
                raise SimplexFailure(f"pivot limit {max_pivots} reached")
            d_plus = c - y
            d_minus = c + y
            d_plus[self.basic_var] = 0.0
            d_minus[self.basic_var] = 0.0
            if bland:
                cand = np.flatnonzero(np.concatenate([d_plus, d_minus]) < -cost_tol)
                if len(cand) == 0:
                    return
                q = int(cand[0])
            else:
                jp = int(np.argmin(d_plus))
                jm = int(np.argmin(d_minus))
                if d_plus[jp] <= d_minus[jm]:
                    q, best = jp, d_plus[jp]
                else:
                    q, best = jm + n, d_minus[jm]
                if best >= -cost_tol:
                    return
            d_q = d_plus[q] if q < n else d_minus[q - n]
            t = self.column(q)
            r = self._ratio_test(t, phase, bland)
            if r < 0:
                raise SimplexFailure("unbounded direction in a bounded problem")
            step = self.b[r] / t[r] if t[r] > 0 else 0.0
            if bland:
                self.bland_pivots += 1
            self.pivot(r, q, y, d_q)
            if step * -d_q > cost_tol * 1e-3:
                degenerate_run = 0
                bland = False
            else:
                degenerate_run += 1
                if degenerate_run >= self.degenerate_limit:
                    bland = True

    def _ratio_test(self, t: np.ndarray, phase: int, bland: bool) -> int:
        tol = self.pivot_tol
        art = self.basis == ARTIFICIAL
        if phase == 2:
            # artificial rows are pinned at zero: any nonzero entry blocks the step
            stuck = np.flatnonzero(art & (np.abs(t) > tol))
            if len(stuck):
                return int(stuck[np.argmax(np.abs(t[stuck]))])
            eligible = np.flatnonzero((t > tol) & ~art)
        else:
            eligible = np.flatnonzero(t > tol)
        if len(eligible) == 0:
            return -1
        ratios = self.b[eligible] / t[eligible]
        best = ratios.min()
        ties = eligible[ratios <= best + 1e-12 * max(1.0, best)]
        if len(ties) == 1:
            return int(ties[0])
        tie_art = ties[art[ties]]
        if len(tie_art):
            ties = tie_art
        if bland:
            codes = self.basis[ties]
            return int(ties[np.argmin(codes)])
        return int(ties[np.argmax(t[ties])])


def solve_weighted_l1(D: np.ndarray, b: np.ndarray, c: np.ndarray, *, feasibility_tol: float = 1e-6,
                      pivot_tol: float = 1e-9, max_pivots: int | None = None,
                      degenerate_limit: int = 50) -> tuple[np.ndarray, SimplexInfo]:
    """Minimise ``sum_j c_j |x_j|`` subject to ``D x = b`` with ``c > 0``.

    Args:
        D: dense ``(m, n)`` constraint matrix.
        b: right-hand side of length ``m``.
        c: positive cost per variable.
        feasibility_tol: phase-1 objective above ``feasibility_tol * max(1, ||b||_2)``
            declares the system infeasible.

    Returns:
        ``(x, info)``.

    Raises:
        Infeasible: if ``D x = b`` has no solution.
        SimplexFailure: on pivot-limit exhaustion or an unbounded ray.
    """
    D = np.asarray(D, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = D.shape
    if max_pivots is None:
        max_pivots = 50 * (m + n) + 1000
    scale_b = max(1.0, float(np.linalg.norm(b)))

    live = np.flatnonzero(np.any(D != 0, axis=1))
    dead = np.setdiff1d(np.arange(m), live)
    if len(dead) and np.abs(b[dead]).max() > feasibility_tol * scale_b:
        raise Infeasible(float(np.abs(b[dead]).sum()))
    tab = _Tableau(D[live], b[live], pivot_tol, degenerate_limit)

    # phase 1: minimise the sum of artificials
    zero = np.zeros(n)
    y = tab.T.sum(axis=0)
    tab.run(zero, y, phase=1, cost_tol=1e-11, max_pivots=max_pivots)
    art = tab.basis == ARTIFICIAL
    infeas = float(tab.b[art].sum())
    if infeas > feasibility_tol * scale_b:
        raise Infeasible(infeas)
    tab.b[art] = 0.0
    phase1 = tab.pivots

    # phase 2
    cB = np.zeros(tab.m)
    real = ~art
    cB[real] = c[tab.basis[real] % n]
    y = cB @ tab.T
    tab.run(c, y, phase=2, cost_tol=1e-11 * max(1.0, float(c.max(initial=0.0))), max_pivots=max_pivots)

    x = np.zeros(n)
    for i in np.flatnonzero(tab.basis != ARTIFICIAL):
        q = tab.basis[i]
        if q < n:
            x[q] += tab.b[i]
        else:
            x[q - n] -= tab.b[i]
    info = SimplexInfo("optimal", tab.pivots, phase1, tab.bland_pivots,
                       float(np.dot(c, np.abs(x))), infeas)
    return x, info
