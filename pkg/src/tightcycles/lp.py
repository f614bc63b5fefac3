"""Exact rational simplex for vertex-packing LPs.

The only LP shape the workbench needs is

    max  sum_j x_j
    s.t. for every vertex v:  sum_{j : v in column_j} x_j <= 1,   x >= 0,

whose right-hand side is all ones, so the slack basis is feasible and no
phase-1 is required.  Pivoting uses Bland's rule (smallest-index entering
and leaving variable), which guarantees termination.  Optimality is
certified from the final tableau: the dual values read off the slack
columns are checked for feasibility and for strong duality, both exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapExceeded, InternalConsistencyError

LP_VARIABLE_CAP = 20000


@dataclass(frozen=True)
class LpResult:
    value: Fraction
    solution: tuple[Fraction, ...]
    duals: tuple[Fraction, ...]
    pivots: int
    certified: bool


def solve_packing_lp(columns: Sequence[Sequence[int]], rows: int) -> LpResult:
    """Solve the packing LP for 0/1 columns over ``rows`` constraints.

    ``columns[j]`` lists the row indices in which variable j appears.
    Returns an optimal basic solution together with certified dual values.
    """
    nvar = len(columns)
    if nvar > LP_VARIABLE_CAP:
        raise CapExceeded(f"{nvar} LP variables exceed the cap {LP_VARIABLE_CAP}")
    if nvar == 0:
        return LpResult(Fraction(0), (), tuple(Fraction(0) for _ in range(rows)), 0, True)

    zero, one = Fraction(0), Fraction(1)
    m = rows
    width = nvar + m  # structural variables then slacks
    table = []
    for r in range(m):
        row = [zero] * width
        row[nvar + r] = one
        table.append(row)
    for j, col in enumerate(columns):
        for r in col:
            table[r][j] = one
    rhs = [one] * m
    # Reduced-cost row for maximisation: positive entry means improvable.
    cost = [one] * nvar + [zero] * m
    basis = [nvar + r for r in range(m)]

    pivots = 0
    while True:
        enter = next((j for j in range(width) if cost[j] > 0), None)
        if enter is None:
            break
        leave_row = None
        best = None
        for r in range(m):
            a = table[r][enter]
            if a > 0:
                ratio = rhs[r] / a
                key = (ratio, basis[r])
                if best is None or key < best:
                    best = key
                    leave_row = r
        if leave_row is None:
            raise InternalConsistencyError("packing LP reported unbounded")
        piv = table[leave_row][enter]
        row = table[leave_row]
        for j in range(width):
            row[j] /= piv
        rhs[leave_row] /= piv
        for r in range(m):
            if r != leave_row and table[r][enter] != 0:
                f = table[r][enter]
                other = table[r]
                for j in range(width):
                    other[j] -= f * row[j]
                rhs[r] -= f * rhs[leave_row]
        f = cost[enter]
        for j in range(width):
            cost[j] -= f * row[j]
        basis[leave_row] = enter
        pivots += 1

    solution = [zero] * nvar
    for r, b in enumerate(basis):
        if b < nvar:
            solution[b] = rhs[r]
    value = sum(solution, zero)
    # Dual value of row r is the negated reduced cost of its slack column.
    duals = [-cost[nvar + r] for r in range(m)]

    certified = all(d >= 0 for d in duals)
    for col in columns:
        if sum((duals[r] for r in col), zero) < 1:
            certified = False
    if sum(duals, zero) != value:
        certified = False
    if not certified:
        raise InternalConsistencyError("simplex optimum failed the duality certificate")
    return LpResult(value, tuple(solution), tuple(duals), pivots, True)
