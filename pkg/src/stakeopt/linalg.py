"""Sparse Gaussian elimination over an exact (or decimal) field.

The absorbing-chain systems have at most three nonzeros per row, all within
a band of width max-stake, so rows are kept as {column: coefficient} dicts
and elimination costs O(n * band^2) field operations.  The same routine
serves Fraction, Decimal (under the caller's context) and RationalFunction
coefficients; only the pivot ranking differs:

  * numbers: partial pivoting by magnitude,
  * rational functions: prefer the lowest-degree nonzero entry (keeps the
    intermediate fractions small; every arithmetic op already re-reduces).
"""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import SingularSystemError
from .exact import RationalFunction


def _rank_magnitude(v):
    return abs(v)


def _rank_low_degree(v: RationalFunction):
    return -(v.num.degree + v.den.degree)


def pivot_rank_for(sample) -> Callable:
    return _rank_low_degree if isinstance(sample, RationalFunction) else _rank_magnitude


def solve_sparse(rows: Sequence[dict], rhs_columns: Sequence[Sequence], pivot_rank=None) -> list:
    """Solve A x = b for each right-hand side column; A given as sparse rows.

    Returns one solution list per rhs column.  Raises SingularSystemError if
    no nonzero pivot exists for some column (the chain systems are provably
    nonsingular for 0 < p < 1; this is asserted, never silently assumed).
    """
    n = len(rows)
    rows = [dict(r) for r in rows]
    cols = [list(b) for b in rhs_columns]
    if any(len(b) != n for b in cols):
        raise ValueError("rhs length mismatch")
    if pivot_rank is None:
        sample = next((v for r in rows for v in r.values()), None)
        pivot_rank = pivot_rank_for(sample)

    for j in range(n):
        pivot_row = -1
        best = None
        for r in range(j, n):
            v = rows[r].get(j)
            if v:
                k = pivot_rank(v)
                if pivot_row < 0 or k > best:
                    pivot_row, best = r, k
        if pivot_row < 0:
            raise SingularSystemError(f"no pivot available in column {j}")
        if pivot_row != j:
            rows[j], rows[pivot_row] = rows[pivot_row], rows[j]
            for b in cols:
                b[j], b[pivot_row] = b[pivot_row], b[j]
        piv = rows[j][j]
        piv_items = [(c, v) for c, v in rows[j].items() if c > j]
        for r in range(j + 1, n):
            v = rows[r].get(j)
            if not v:
                continue
            factor = v / piv
            del rows[r][j]
            row = rows[r]
            for c, pv in piv_items:
                cur = row.get(c)
                nxt = -factor * pv if cur is None else cur - factor * pv
                if nxt:
                    row[c] = nxt
                else:
                    row.pop(c, None)
            for b in cols:
                if b[j]:
                    b[r] = b[r] - factor * b[j]

    solutions = []
    for b in cols:
        x = list(b)
        for j in range(n - 1, -1, -1):
            acc = x[j]
            for c, v in rows[j].items():
                if c > j:
                    acc = acc - v * x[c]
            x[j] = acc / rows[j][j]
        solutions.append(x)
    return solutions


def residual_inf_norm(rows: Sequence[dict], x: Sequence, b: Sequence):
    """max_i |sum_j A_ij x_j - b_i|, in the coefficients' own arithmetic."""
    worst = None
    for i, row in enumerate(rows):
        acc = -b[i]
        for c, v in row.items():
            acc = acc + v * x[c]
        mag = abs(acc)
        if worst is None or mag > worst:
            worst = mag
    return worst
