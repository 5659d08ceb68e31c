"""Two-phase simplex over exact rationals.

Small dense tableaus only; Bland's rule keeps it from cycling.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

Number = int | float | Fraction


@dataclass(frozen=True)
class RationalLPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] = ()


def _frac(v: Number) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _pivot(T: list[list[Fraction]], row: int, col: int) -> None:
    p = T[row][col]
    T[row] = [v / p for v in T[row]]
    pr = T[row]
    for i, r in enumerate(T):
        if i != row and r[col] != 0:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, pr)]


def _run(T, basis, cost, allowed) -> str:
    """Maximise ``cost . x`` on tableau ``T`` (last column is the rhs)."""
    ncols = len(T[0]) - 1
    while True:
        entering = None
        for j in range(ncols):
            if not allowed[j] or j in basis:
                continue
            r = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)) if T[i][j] != 0)
            if r > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, best[1], entering)
        basis[best[1]] = entering


def rational_lp(
    c: Sequence[Number],
    A_ub: Sequence[Sequence[Number]] = (),
    b_ub: Sequence[Number] = (),
    A_eq: Sequence[Sequence[Number]] = (),
    b_eq: Sequence[Number] = (),
) -> RationalLPResult:
    """Maximise ``c x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    rows: list[tuple[list[Fraction], Fraction, str]] = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([_frac(v) for v in a], _frac(b), "ub"))
    for a, b in zip(A_eq, b_eq):
        rows.append(([_frac(v) for v in a], _frac(b), "eq"))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2] == "ub")
    width = n + n_slack + m  # originals, slacks, artificials
    T: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (a, b, kind) in enumerate(rows):
        row = a + [Fraction(0)] * (n_slack + m) + [b]
        if kind == "ub":
            row[n + s] = Fraction(1)
            slack_col = n + s
            s += 1
        else:
            slack_col = None
        if b < 0:
            row = [-v for v in row]
        if slack_col is not None and row[slack_col] == 1:
            basis.append(slack_col)
        else:
            row[n + n_slack + i] = Fraction(1)
            basis.append(n + n_slack + i)
        T.append(row)

    art = set(range(n + n_slack, width))
    if any(b in art for b in basis):
        cost1 = [Fraction(0)] * width
        for j in art:
            cost1[j] = Fraction(-1)
        allowed = [True] * width
        _run(T, basis, cost1, allowed)
        if any(T[i][-1] != 0 for i, b in enumerate(basis) if b in art):
            return RationalLPResult("infeasible")
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(T):
            if basis[i] in art:
                col = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
                if col is None:
                    del T[i], basis[i]
                    continue
                _pivot(T, i, col)
                basis[i] = col
            i += 1
    allowed = [j < n + n_slack for j in range(width)]
    cost2 = [_frac(v) for v in c] + [Fraction(0)] * (n_slack + m)
    status = _run(T, basis, cost2, allowed)
    if status == "unbounded":
        return RationalLPResult("unbounded")
    x = [Fraction(0)] * width
    for i, b in enumerate(basis):
        x[b] = T[i][-1]
    value = sum((cost2[j] * x[j] for j in range(n)), Fraction(0))
    return RationalLPResult("optimal", value, tuple(x[:n]))
