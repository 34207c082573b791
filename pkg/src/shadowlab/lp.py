"""Small dense linear programs: two-phase tableau simplex with Bland's rule.

This is the feasibility oracle behind edge detection, extreme-point
filtering and zonotope sign-vector realisability. Problems here have at
most a few hundred rows and columns, so clarity wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .constants import LP_FEAS_TOL, LP_MAX_ITER, LP_PIVOT_TOL

RELATIONS = ("<=", "=", ">=")


class SolverStalled(RuntimeError):
    """Raised when the iteration cap is hit; the LP has no trustworthy answer."""


@dataclass
class LinearProgram:
    """``constraints`` is a list of ``(coefficients, relation, rhs)`` rows.

    Variables are free unless ``nonnegative`` is set. With ``objective``
    left as None the program is a pure feasibility question.
    """

    constraints: list
    objective: Optional[Sequence[float]] = None
    maximize: bool = True
    nonnegative: bool = False

    @property
    def num_vars(self) -> int:
        if self.objective is not None:
            return len(self.objective)
        if not self.constraints:
            raise ValueError("an LP without objective needs at least one constraint")
        return len(self.constraints[0][0])


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[np.ndarray] = None
    value: Optional[float] = None
    iterations: int = field(default=0, repr=False)

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _standardize(lp: LinearProgram):
    m_vars = lp.num_vars
    rows, rels, rhs = [], [], []
    for coef, rel, b in lp.constraints:
        a = np.asarray(coef, dtype=float)
        if a.shape != (m_vars,):
            raise ValueError(f"constraint has {a.size} coefficients, expected {m_vars}")
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        if not (np.all(np.isfinite(a)) and np.isfinite(b)):
            raise ValueError("non-finite constraint data")
        rows.append(a)
        rels.append(rel)
        rhs.append(float(b))
    A = np.array(rows, dtype=float).reshape(len(rows), m_vars)
    b = np.array(rhs, dtype=float)

    # scale rows to unit max-norm; all-zero rows are checked directly
    keep = []
    for i in range(len(b)):
        s = np.max(np.abs(A[i])) if m_vars else 0.0
        if s == 0.0:
            ok = {"<=": 0 <= b[i] + LP_FEAS_TOL, "=": abs(b[i]) <= LP_FEAS_TOL, ">=": 0 >= b[i] - LP_FEAS_TOL}[rels[i]]
            if not ok:
                return None
            continue
        A[i] /= s
        b[i] /= s
        keep.append(i)
    A = A[keep]
    b = b[keep]
    rels = [rels[i] for i in keep]

    if not lp.nonnegative:
        A = np.hstack([A, -A])
    # make rhs nonnegative
    for i in range(len(b)):
        if b[i] < 0:
            A[i] = -A[i]
            b[i] = -b[i]
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]
    return A, b, rels


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int]):
        self.T = T
        self.basis = basis
        self.iterations = 0

    def pivot(self, r: int, c: int):
        T = self.T
        T[r] /= T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = c

    def minimize(self, cost: np.ndarray, ncols: int) -> str:
        """Run Bland-rule simplex for min cost.x over the first ncols columns."""
        T = self.T
        obj = cost[:ncols] - cost[self.basis] @ T[:, :ncols]
        while True:
            if self.iterations >= LP_MAX_ITER:
                raise SolverStalled(f"simplex exceeded {LP_MAX_ITER} iterations")
            neg = np.nonzero(obj < -LP_PIVOT_TOL)[0]
            if neg.size == 0:
                return "optimal"
            c = int(neg[0])
            colv = T[:, c]
            pos = np.nonzero(colv > LP_PIVOT_TOL)[0]
            if pos.size == 0:
                return "unbounded"
            ratios = T[pos, -1] / colv[pos]
            best = ratios.min()
            tied = pos[ratios <= best + LP_PIVOT_TOL * max(1.0, abs(best))]
            r = int(min(tied, key=lambda i: self.basis[i]))
            self.pivot(r, c)
            obj = obj - obj[c] * T[r, :ncols]
            self.iterations += 1


def solve(lp: LinearProgram) -> LPResult:
    """Solve a small dense LP exactly enough for oracle use.

    Returns an `LPResult` with status ``optimal`` (with the optimal basic
    solution and value), ``infeasible`` or ``unbounded``. Raises
    `SolverStalled` if the iteration cap is exceeded.
    """
    m_vars = lp.num_vars
    if lp.objective is not None:
        c_orig = np.asarray(lp.objective, dtype=float)
        if c_orig.shape != (m_vars,):
            raise ValueError("objective dimension mismatch")
    else:
        c_orig = np.zeros(m_vars)

    std = _standardize(lp)
    if std is None:
        return LPResult("infeasible")
    A, b, rels = std
    m, nx = A.shape

    n_slack = sum(r != "=" for r in rels)
    art_rows = [i for i, r in enumerate(rels) if r in ("=", ">=")]
    n_art = len(art_rows)
    ncols = nx + n_slack + n_art
    T = np.zeros((m, ncols + 1))
    T[:, :nx] = A
    T[:, -1] = b
    basis = [-1] * m
    s = nx
    for i, r in enumerate(rels):
        if r == "<=":
            T[i, s] = 1.0
            basis[i] = s
            s += 1
        elif r == ">=":
            T[i, s] = -1.0
            s += 1
    a0 = nx + n_slack
    for k, i in enumerate(art_rows):
        T[i, a0 + k] = 1.0
        basis[i] = a0 + k

    tab = _Tableau(T, basis)
    if n_art:
        cost1 = np.zeros(ncols)
        cost1[a0:] = 1.0
        tab.minimize(cost1, ncols)
        if float(cost1[tab.basis] @ tab.T[:, -1]) > LP_FEAS_TOL:
            return LPResult("infeasible", iterations=tab.iterations)
        # drive artificials out of the basis; drop redundant rows
        r = 0
        while r < len(tab.basis):
            if tab.basis[r] >= a0:
                cand = np.nonzero(np.abs(tab.T[r, :a0]) > LP_PIVOT_TOL)[0]
                if cand.size:
                    tab.pivot(r, int(cand[0]))
                else:
                    tab.T = np.delete(tab.T, r, axis=0)
                    del tab.basis[r]
                    continue
            r += 1
        tab.T = np.hstack([tab.T[:, :a0], tab.T[:, -1:]])
    ncols = a0

    if lp.objective is None:
        status = "optimal"
    else:
        sign = -1.0 if lp.maximize else 1.0
        cost2 = np.zeros(ncols)
        cost2[:nx] = sign * (c_orig if lp.nonnegative else np.concatenate([c_orig, -c_orig]))
        status = tab.minimize(cost2, ncols)
        if status == "unbounded":
            return LPResult("unbounded", iterations=tab.iterations)

    z = np.zeros(ncols)
    for i, j in enumerate(tab.basis):
        z[j] = tab.T[i, -1]
    x = z[:m_vars] if lp.nonnegative else z[:m_vars] - z[m_vars:2 * m_vars]
    return LPResult(status, x=x, value=float(c_orig @ x), iterations=tab.iterations)


def _check_indices(k: int, *idx: int):
    for i in idx:
        if not 0 <= i < k:
            raise IndexError(f"vertex index {i} out of range for {k} points")


def is_edge(vertices, i: int, j: int) -> bool:
    """True iff conv(v_i, v_j) is an edge of conv(vertices).

    Feasibility of c.v_i = c.v_j = t and c.w <= t - 1 for every other
    listed point w (the unit gap is free by scaling c).
    """
    V = np.asarray(vertices, dtype=float)
    k, n = V.shape
    _check_indices(k, i, j)
    if i == j:
        raise ValueError("an edge needs two distinct vertices")
    cons = []
    for idx in (i, j):
        cons.append((np.append(V[idx], -1.0), "=", 0.0))
    for w in range(k):
        if w not in (i, j):
            cons.append((np.append(V[w], -1.0), "<=", -1.0))
    return solve(LinearProgram(cons)).feasible


def is_extreme(points, i: int) -> bool:
    """True iff points[i] is not a convex combination of the other points."""
    P = np.asarray(points, dtype=float)
    k, n = P.shape
    _check_indices(k, i)
    others = np.delete(P, i, axis=0)
    if len(others) == 0:
        return True
    cons = [(others[:, d], "=", P[i, d]) for d in range(n)]
    cons.append((np.ones(len(others)), "=", 1.0))
    res = solve(LinearProgram(cons, nonnegative=True))
    return not res.feasible
