"""Exact absorbing-chain analysis of a fixed strategy.

For a strategy S on capitals 1..goal-1 the quantities of interest all solve
(goal-1)-dimensional banded linear systems with rows

    L[i] - q*L[i - S[i]] - p*L[i + S[i]] = rhs[i]

where terms that land on an absorbing boundary move to the right-hand side:

  * win probability:       rhs contribution p when i + S[i] = goal, L bdry 0/1
  * expected duration:     rhs 1, both boundaries 0
  * E[duration * 1{win}]:  rhs win_prob[i] (product trick), boundaries 0
  * duration PGFs:         the same shape over the field Q(t), coefficients
                           scaled by t, boundaries 1/1 (any exit) or 0/1
                           (win-conditioned).

Exact mode solves over Q; decimal mode solves with the fixed-precision
context and reports an infinity-norm residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional, Sequence

from .exact import (
    DECIMAL,
    DECIMAL_CONTEXT,
    EXACT,
    Polynomial,
    RationalFunction,
    format_rational,
    to_decimal,
    to_number,
)
from .game import GameSpec, Strategy, require_valid
from .linalg import residual_inf_norm, solve_sparse


@dataclass(frozen=True)
class ChainReport:
    """Win probability, expected duration, and win-conditioned duration
    per starting capital 1..goal-1, plus how they were computed."""

    spec: GameSpec
    strategy: Strategy
    win_prob: tuple
    exp_duration: tuple
    exp_duration_given_win: tuple  # None where win_prob is zero
    mode: str
    residual: Optional[Decimal] = None

    def to_payload(self, sig_digits: int = 10) -> dict:
        def render(values):
            out = []
            for v in values:
                if v is None:
                    out.append(None)
                elif self.mode == EXACT:
                    out.append(format_rational(v))
                else:
                    out.append(to_decimal(v, DECIMAL_CONTEXT.prec))
            return out

        payload = {
            "p": format_rational(self.spec.p),
            "N": self.spec.goal,
            "stakes": list(self.strategy.stakes),
            "mode": self.mode,
            "win_prob": render(self.win_prob),
            "exp_duration": render(self.exp_duration),
            "exp_duration_given_win": render(self.exp_duration_given_win),
            "decimals": {
                "win_prob": [to_decimal(v, sig_digits) for v in self.win_prob],
                "exp_duration": [to_decimal(v, sig_digits) for v in self.exp_duration],
                "exp_duration_given_win": [
                    None if v is None else to_decimal(v, sig_digits)
                    for v in self.exp_duration_given_win
                ],
            },
        }
        if self.residual is not None:
            payload["residual"] = format(self.residual, "e")
        return payload


def _numeric_rows(spec: GameSpec, strategy: Strategy, mode: str):
    """Sparse matrix rows (0-based columns for capitals 1..goal-1)."""
    p = to_number(spec.p, mode)
    q = to_number(spec.q, mode)
    one = to_number(Fraction(1), mode)
    rows = []
    for i in range(1, spec.goal):
        s = strategy.stake(i)
        row = {i - 1: one}
        lo, hi = i - s, i + s
        if lo > 0:
            row[lo - 1] = row.get(lo - 1, 0 * one) - q
        if hi < spec.goal:
            row[hi - 1] = row.get(hi - 1, 0 * one) - p
        rows.append({c: v for c, v in row.items() if v})
    return rows, p, q, one


def _win_rhs(spec: GameSpec, strategy: Strategy, p, zero):
    rhs = []
    for i in range(1, spec.goal):
        rhs.append(p if i + strategy.stake(i) == spec.goal else zero)
    return rhs


def _solve_numeric(spec, strategy, mode, rhs_builders):
    """Eliminate once for several right-hand sides; returns the solutions and
    the residual (decimal mode only) of the first system."""
    spec.require_nondegenerate()
    require_valid(spec, strategy)
    rows, p, q, one = _numeric_rows(spec, strategy, mode)
    zero = one - one
    columns = [builder(spec, strategy, p, q, one, zero) for builder in rhs_builders]
    if mode == DECIMAL:
        with localcontext(DECIMAL_CONTEXT):
            solutions = solve_sparse(rows, columns)
            residual = residual_inf_norm(rows, solutions[0], columns[0])
        return solutions, residual
    return solve_sparse(rows, columns), None


def win_prob(spec: GameSpec, strategy: Strategy, mode: str = EXACT) -> list:
    """Probability of exiting at the goal, per starting capital 1..goal-1."""
    (sol,), _ = _solve_numeric(
        spec, strategy, mode, [lambda sp, st, p, q, one, zero: _win_rhs(sp, st, p, zero)]
    )
    return sol


def expected_duration(spec: GameSpec, strategy: Strategy, mode: str = EXACT) -> list:
    """Expected rounds until exiting either side, per starting capital."""
    (sol,), _ = _solve_numeric(
        spec, strategy, mode, [lambda sp, st, p, q, one, zero: [one] * (sp.goal - 1)]
    )
    return sol


def expected_duration_given_win(
    spec: GameSpec, strategy: Strategy, mode: str = EXACT
) -> list:
    """Expected rounds until exiting, conditioned on ultimately winning.

    Solved via g[i] = q*g[i-s] + p*g[i+s] + W[i] with zero boundaries and
    then g/W; entries where the win probability is zero are None.
    """
    return list(analyze(spec, strategy, mode).exp_duration_given_win)


def analyze(spec: GameSpec, strategy: Strategy, mode: str = EXACT) -> ChainReport:
    """All three chain quantities from two elimination passes."""
    (w, d), residual = _solve_numeric(
        spec,
        strategy,
        mode,
        [
            lambda sp, st, p, q, one, zero: _win_rhs(sp, st, p, zero),
            lambda sp, st, p, q, one, zero: [one] * (sp.goal - 1),
        ],
    )
    (g,), _ = _solve_numeric(
        spec, strategy, mode, [lambda sp, st, p, q, one, zero: list(w)]
    )
    if mode == DECIMAL:
        with localcontext(DECIMAL_CONTEXT):
            edw = [None if wi == 0 else gi / wi for gi, wi in zip(g, w)]
    else:
        edw = [None if wi == 0 else gi / wi for gi, wi in zip(g, w)]
    return ChainReport(
        spec=spec,
        strategy=strategy,
        win_prob=tuple(w),
        exp_duration=tuple(d),
        exp_duration_given_win=tuple(edw),
        mode=mode,
        residual=residual,
    )


def _pgf_system(spec: GameSpec, strategy: Strategy, win_conditioned: bool):
    spec.require_nondegenerate()
    require_valid(spec, strategy)
    # coefficients are elements of Q(t); each off-diagonal carries a factor t
    tq = RationalFunction(Polynomial((0, spec.q)))
    tp = RationalFunction(Polynomial((0, spec.p)))
    one = RationalFunction.constant(1)
    zero = RationalFunction.constant(0)
    bottom = zero if win_conditioned else one  # value at capital 0
    rows, rhs = [], []
    for i in range(1, spec.goal):
        s = strategy.stake(i)
        row = {i - 1: one}
        b = zero
        lo, hi = i - s, i + s
        if lo > 0:
            row[lo - 1] = row.get(lo - 1, zero) - tq
        else:
            b = b + tq * bottom
        if hi < spec.goal:
            row[hi - 1] = row.get(hi - 1, zero) - tp
        else:
            b = b + tp  # boundary value at the goal is 1 in both variants
        rows.append({c: v for c, v in row.items() if v})
        rhs.append(b)
    return rows, rhs


def duration_pgf(spec: GameSpec, strategy: Strategy) -> list:
    """Generating function of the remaining duration, per starting capital:
    the coefficient of t^j is the exact probability the game lasts j more rounds."""
    rows, rhs = _pgf_system(spec, strategy, win_conditioned=False)
    return solve_sparse(rows, [rhs])[0]


def duration_pgf_win(
    spec: GameSpec, strategy: Strategy, normalized: bool = False
) -> list:
    """Generating function of the duration restricted to winning games.

    As printed by the exact solver this is defective: its value at t = 1 is
    the win probability, not 1.  With normalized=True each entry is divided
    by the win probability (None where that probability is zero).
    """
    rows, rhs = _pgf_system(spec, strategy, win_conditioned=True)
    pgfs = solve_sparse(rows, [rhs])[0]
    if not normalized:
        return pgfs
    w = win_prob(spec, strategy)
    return [None if wi == 0 else f / wi for f, wi in zip(pgfs, w)]


def render_pgfs(pgfs: Sequence, series: Optional[int] = None) -> list:
    """JSON-friendly PGF list; optionally with series coefficients 0..series."""
    out = []
    for f in pgfs:
        if f is None:
            out.append(None)
            continue
        entry = f.to_payload()
        entry["display"] = str(f)
        if series is not None:
            entry["series"] = [format_rational(c) for c in f.series(series)]
        out.append(entry)
    return out
