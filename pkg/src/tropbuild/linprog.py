"""Exact linear programming over the rationals.

Two-phase dense simplex with exact Fraction pivots.  Pivoting uses the
largest-reduced-cost rule for speed and switches permanently to Bland's
rule once the objective stalls, which restores the termination guarantee
while keeping everything deterministic.  Problems are stated as

    maximize c.x   subject to   A_ub x <= b_ub,  A_eq x = b_eq,

with every variable either free (split internally into a difference of
nonnegative ones) or declared nonnegative via ``nonneg``.  Sizes here are
tiny (tens of rows and columns), so no factorization is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rationals import frac

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None
    value: Fraction | None


class _Tableau:
    """Dense tableau with a maintained objective row."""

    def __init__(self, rows, rhs, ncols):
        self.A = rows
        self.b = rhs
        self.ncols = ncols
        self.basis = [None] * len(rows)
        self.z = [_ZERO] * ncols  # reduced costs (cost - c_B . A)
        self.obj = _ZERO

    def load_cost(self, cost):
        z = list(cost)
        obj = _ZERO
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb:
                Ai = self.A[i]
                for j in range(self.ncols):
                    if Ai[j]:
                        z[j] -= cb * Ai[j]
                obj += cb * self.b[i]
        self.z = z
        self.obj = obj

    def pivot(self, r, c):
        A, b = self.A, self.b
        piv = A[r][c]
        if piv != 1:
            inv = 1 / piv
            A[r] = [a * inv for a in A[r]]
            b[r] *= inv
        Ar = A[r]
        for i in range(len(A)):
            if i != r:
                f = A[i][c]
                if f:
                    A[i] = [a - f * ar for a, ar in zip(A[i], Ar)]
                    b[i] -= f * b[r]
        f = self.z[c]
        if f:
            self.z = [a - f * ar for a, ar in zip(self.z, Ar)]
            self.obj += f * b[r]
        self.basis[r] = c

    def run(self, blocked):
        """Maximize the loaded cost; columns with blocked[j] never enter."""
        stall = 0
        stall_limit = 4 * (len(self.A) + self.ncols)
        bland = False
        while True:
            enter = None
            if not bland:
                best = _ZERO
                for j in range(self.ncols):
                    if not blocked[j] and self.z[j] > best:
                        best = self.z[j]
                        enter = j
            else:
                for j in range(self.ncols):
                    if not blocked[j] and self.z[j] > 0:
                        enter = j
                        break
            if enter is None:
                return OPTIMAL
            leave = None
            best_ratio = None
            for i in range(len(self.A)):
                a = self.A[i][enter]
                if a > 0:
                    ratio = self.b[i] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[leave])
                    ):
                        best_ratio = ratio
                        leave = i
            if leave is None:
                return UNBOUNDED
            before = self.obj
            self.pivot(leave, enter)
            if not bland:
                if self.obj == before:
                    stall += 1
                    if stall > stall_limit:
                        bland = True
                else:
                    stall = 0


def solve_lp(c, a_ub=(), b_ub=(), a_eq=(), b_eq=(), nonneg=None) -> LPResult:
    """Maximize c.x with A_ub x <= b_ub, A_eq x = b_eq.

    ``nonneg[j]`` marks x_j >= 0; unmarked variables are free and get the
    plus/minus split.
    """
    n = len(c)
    c = [frac(v) for v in c]
    if nonneg is None:
        nonneg = [False] * n
    rows = []
    kinds = []
    for row, rhs in zip(a_ub, b_ub):
        rows.append(([frac(v) for v in row], frac(rhs)))
        kinds.append("ub")
    for row, rhs in zip(a_eq, b_eq):
        rows.append(([frac(v) for v in row], frac(rhs)))
        kinds.append("eq")

    col_of = []  # per original var: (plus_col, minus_col or None)
    ncols = 0
    for j in range(n):
        if nonneg[j]:
            col_of.append((ncols, None))
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))
            ncols += 2
    slack_of = {}
    for i, kind in enumerate(kinds):
        if kind == "ub":
            slack_of[i] = ncols
            ncols += 1

    tab_rows = []
    tab_rhs = []
    need_artificial = []
    for i, (row, rhs) in enumerate(rows):
        full = [_ZERO] * ncols
        for j, v in enumerate(row):
            if v:
                plus, minus = col_of[j]
                full[plus] = v
                if minus is not None:
                    full[minus] = -v
        if i in slack_of:
            full[slack_of[i]] = _ONE
        if rhs < 0:
            full = [-v for v in full]
            rhs = -rhs
        tab_rows.append(full)
        tab_rhs.append(rhs)
        need_artificial.append(not (i in slack_of and full[slack_of[i]] == 1))

    art_cols = {}
    for i, need in enumerate(need_artificial):
        if need:
            art_cols[i] = ncols
            ncols += 1
    for i, row in enumerate(tab_rows):
        row.extend([_ZERO] * (ncols - len(row)))
        if i in art_cols:
            row[art_cols[i]] = _ONE

    tab = _Tableau(tab_rows, tab_rhs, ncols)
    for i in range(len(tab_rows)):
        tab.basis[i] = art_cols[i] if i in art_cols else slack_of[i]

    art_set = set(art_cols.values())
    blocked_none = [False] * ncols
    if art_set:
        phase1 = [_ZERO] * ncols
        for j in art_set:
            phase1[j] = Fraction(-1)
        tab.load_cost(phase1)
        status = tab.run(blocked_none)
        assert status == OPTIMAL  # phase 1 is always bounded
        if tab.obj != 0:
            return LPResult(INFEASIBLE, None, None)
        for i in range(len(tab.A) - 1, -1, -1):
            if tab.basis[i] in art_set:
                for j in range(ncols):
                    if j not in art_set and tab.A[i][j]:
                        tab.pivot(i, j)
                        break
                else:
                    del tab.A[i]
                    del tab.b[i]
                    del tab.basis[i]

    cost = [_ZERO] * ncols
    for j in range(n):
        plus, minus = col_of[j]
        cost[plus] = c[j]
        if minus is not None:
            cost[minus] = -c[j]
    tab.load_cost(cost)
    blocked = [j in art_set for j in range(ncols)]
    status = tab.run(blocked)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)
    xs = [_ZERO] * ncols
    for i, bi in enumerate(tab.basis):
        xs[bi] = tab.b[i]
    x = []
    for j in range(n):
        plus, minus = col_of[j]
        x.append(xs[plus] - (xs[minus] if minus is not None else _ZERO))
    return LPResult(OPTIMAL, tuple(x), tab.obj)
