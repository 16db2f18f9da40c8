"""Finite-horizon dynamic program for deadline-optimal staking.

f(i, t) is the best probability of reaching the goal within t more rounds
starting from capital i:

    f(i, t) = max over 1 <= x <= min(i, goal - i) of
              q * f(i - x, t - 1) + p * f(i + x, t - 1)

with f(0, t) = 0, f(goal, t) = 1 and f(i, 0) = 0 for interior i.  Ties are
broken toward the LARGEST stake.  The same recurrence with the max removed
evaluates a fixed strategy against a deadline.

Backends: exact rationals by default while the total stake-evaluation count
T * sum_i min(i, goal - i) stays below 10^5 (exact denominators grow with
the horizon), the 40-digit decimal context above that; callers can force
either.  The backend actually used is recorded on every result.  In decimal
mode ties are detected with relative tolerance 1e-25.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import localcontext
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError
from .exact import (
    DECIMAL,
    DECIMAL_CONTEXT,
    DECIMAL_TIE_TOLERANCE,
    EXACT,
    Number,
    format_rational,
    to_decimal,
    to_number,
)
from .game import GameSpec, Strategy, require_valid

AUTO = "auto"
EXACT_WORK_LIMIT = 10**5


def work_units(goal: int, horizon: int) -> int:
    """Stake evaluations performed by the full DP."""
    return horizon * sum(min(i, goal - i) for i in range(1, goal))


def resolve_mode(spec: GameSpec, horizon: int, mode: str) -> str:
    if mode in (EXACT, DECIMAL):
        return mode
    if mode == AUTO:
        return EXACT if work_units(spec.goal, horizon) <= EXACT_WORK_LIMIT else DECIMAL
    raise DomainError(f"unknown numeric mode: {mode!r}")


@dataclass(frozen=True)
class HorizonTable:
    """Full DP solution: values[t][i] for t in 0..T, i in 0..goal, and the
    largest maximizing stake stakes[t-1][i-1] for t in 1..T, i interior."""

    spec: GameSpec
    horizon: int
    mode: str
    values: tuple
    stakes: tuple

    def value(self, capital: int, remaining: int) -> Number:
        if not 0 <= capital <= self.spec.goal:
            raise DomainError(f"capital {capital} outside [0, {self.spec.goal}]")
        if not 0 <= remaining <= self.horizon:
            raise DomainError(f"horizon {remaining} outside [0, {self.horizon}]")
        return self.values[remaining][capital]

    def stake(self, capital: int, remaining: int) -> int:
        if not 1 <= capital <= self.spec.goal - 1:
            raise DomainError(f"capital {capital} outside [1, {self.spec.goal - 1}]")
        if not 1 <= remaining <= self.horizon:
            raise DomainError(f"horizon {remaining} outside [1, {self.horizon}]")
        return self.stakes[remaining - 1][capital - 1]

    def top_row(self) -> list:
        """(stake, value) per interior capital at the full horizon."""
        return [
            {"capital": i, "stake": self.stake(i, self.horizon), "value": self.value(i, self.horizon)}
            for i in range(1, self.spec.goal)
        ]

    def extended(self, horizon: int) -> "HorizonTable":
        """Same table continued to a larger horizon (rows only ever grow)."""
        if horizon <= self.horizon:
            return self
        values = [list(row) for row in self.values]
        stakes = [list(row) for row in self.stakes]
        _run_dp(self.spec, horizon, self.mode, values, stakes)
        return HorizonTable(
            spec=self.spec,
            horizon=horizon,
            mode=self.mode,
            values=tuple(tuple(r) for r in values),
            stakes=tuple(tuple(r) for r in stakes),
        )

    def to_payload(self, sig_digits: int = 10) -> dict:
        render = (
            format_rational
            if self.mode == EXACT
            else lambda v: to_decimal(v, DECIMAL_CONTEXT.prec)
        )
        return {
            "p": format_rational(self.spec.p),
            "N": self.spec.goal,
            "T": self.horizon,
            "mode": self.mode,
            "tie_tolerance": None if self.mode == EXACT else str(DECIMAL_TIE_TOLERANCE),
            "values": [[render(v) for v in row] for row in self.values],
            "decimals": [[to_decimal(v, sig_digits) for v in row] for row in self.values],
            "stakes": [list(row) for row in self.stakes],
        }


def _best_choice(prev: Sequence, i: int, goal: int, p, q, tie_tol):
    """(value, stake) maximizing one step from row `prev`; largest stake wins ties."""
    best_v = None
    best_x = 0
    for x in range(1, min(i, goal - i) + 1):
        v = q * prev[i - x] + p * prev[i + x]
        if best_v is None:
            best_v, best_x = v, x
        elif tie_tol is None:
            if v >= best_v:
                best_v, best_x = v, x
        else:
            scale = best_v if best_v > v else v
            if v >= best_v - tie_tol * scale:
                best_v, best_x = (v if v > best_v else best_v), x
    return best_v, best_x


def _run_dp(spec: GameSpec, horizon: int, mode: str, values: list, stakes: list) -> None:
    """Extend values/stakes rows in place up to `horizon` (row 0 must exist)."""
    goal = spec.goal
    p = to_number(spec.p, mode)
    q = to_number(spec.q, mode)
    one = to_number(Fraction(1), mode)
    zero = one - one
    tie_tol = None if mode == EXACT else DECIMAL_TIE_TOLERANCE

    def rows():
        for t in range(len(values), horizon + 1):
            prev = values[t - 1]
            row = [zero] * (goal + 1)
            row[goal] = one
            srow = [0] * (goal - 1)
            for i in range(1, goal):
                row[i], srow[i - 1] = _best_choice(prev, i, goal, p, q, tie_tol)
            values.append(row)
            stakes.append(srow)

    if mode == DECIMAL:
        with localcontext(DECIMAL_CONTEXT):
            rows()
    else:
        rows()


def build_table(spec: GameSpec, horizon: int, mode: str = AUTO) -> HorizonTable:
    """Bottom-up DP table for all capitals and horizons 0..T."""
    spec.require_nondegenerate()
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    mode = resolve_mode(spec, horizon, mode)
    one = to_number(Fraction(1), mode)
    zero = one - one
    values = [[zero] * spec.goal + [one]]
    stakes: list = []
    _run_dp(spec, horizon, mode, values, stakes)
    return HorizonTable(
        spec=spec,
        horizon=horizon,
        mode=mode,
        values=tuple(tuple(r) for r in values),
        stakes=tuple(tuple(r) for r in stakes),
    )


def best_stake(spec: GameSpec, capital: int, horizon: int, mode: str = AUTO) -> tuple:
    """(stake, value) for one state, keeping only two DP rows in memory."""
    spec.require_nondegenerate()
    if not 1 <= capital <= spec.goal - 1:
        raise DomainError(f"capital {capital} outside [1, {spec.goal - 1}]")
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    mode = resolve_mode(spec, horizon, mode)
    goal = spec.goal
    p = to_number(spec.p, mode)
    q = to_number(spec.q, mode)
    one = to_number(Fraction(1), mode)
    zero = one - one
    tie_tol = None if mode == EXACT else DECIMAL_TIE_TOLERANCE

    def run():
        prev = [zero] * goal + [one]
        for _ in range(horizon - 1):
            row = [zero] * (goal + 1)
            row[goal] = one
            for i in range(1, goal):
                row[i], _stake = _best_choice(prev, i, goal, p, q, tie_tol)
            prev = row
        return _best_choice(prev, capital, goal, p, q, tie_tol)

    if mode == DECIMAL:
        with localcontext(DECIMAL_CONTEXT):
            value, stake = run()
    else:
        value, stake = run()
    return stake, value


def horizon_win_prob(
    spec: GameSpec, strategy: Strategy, horizon: int, mode: str = AUTO
) -> list:
    """Deadline-truncated win probability of a fixed strategy, per capital.

    Same recurrence as the DP with the stake fixed by the strategy table.
    """
    spec.require_nondegenerate()
    require_valid(spec, strategy)
    if horizon < 0:
        raise DomainError("horizon must be >= 0")
    if mode == AUTO:
        mode = EXACT if horizon * (spec.goal - 1) <= EXACT_WORK_LIMIT else DECIMAL
    goal = spec.goal
    p = to_number(spec.p, mode)
    q = to_number(spec.q, mode)
    one = to_number(Fraction(1), mode)
    zero = one - one

    def run():
        prev = [zero] * goal + [one]
        for _ in range(horizon):
            row = [zero] * (goal + 1)
            row[goal] = one
            for i in range(1, goal):
                x = strategy.stake(i)
                row[i] = q * prev[i - x] + p * prev[i + x]
            prev = row
        return prev[1:goal]

    if mode == DECIMAL:
        with localcontext(DECIMAL_CONTEXT):
            return run()
    return run()


def best_strat_story(cases: Iterable, mode: str = AUTO) -> list:
    """Top-row optimal stakes and survival values for a batch of (p, N, T).

    Items that fail validation are reported as error entries; the batch
    continues.
    """
    report = []
    for case in cases:
        try:
            p, goal, horizon = case
            spec = GameSpec(Fraction(p), int(goal))
            table = build_table(spec, int(horizon), mode=mode)
            render = (
                format_rational
                if table.mode == EXACT
                else lambda v: to_decimal(v, DECIMAL_CONTEXT.prec)
            )
            report.append(
                {
                    "p": format_rational(spec.p),
                    "N": spec.goal,
                    "T": table.horizon,
                    "mode": table.mode,
                    "stakes": [row["stake"] for row in table.top_row()],
                    "values": [render(row["value"]) for row in table.top_row()],
                    "decimals": [to_decimal(row["value"], 10) for row in table.top_row()],
                }
            )
        except (DomainError, ValueError, TypeError) as exc:
            report.append({"case": [str(x) for x in case], "error": str(exc)})
    return report
