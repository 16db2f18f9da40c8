"""Casino model, admissible strategies, and the classical closed forms.

A game is a random walk on capital 0..goal: each round you stake an integer
s with 1 <= s <= min(x, goal - x), win the stake with probability p, lose it
otherwise, and exit at 0 (ruin) or at the goal.  A strategy fixes the stake
for every interior capital.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .exact import format_rational, parse_rational


@dataclass(frozen=True)
class GameSpec:
    """Round-win probability p and exit capital (the goal), in dollars.

    p in {0, 1} is rejected unless allow_degenerate is set; even then the
    analysis modules refuse such specs (only the simulator accepts them).
    """

    p: Fraction
    goal: int
    allow_degenerate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if not isinstance(self.goal, int) or self.goal < 2:
            raise DomainError("goal must be an integer >= 2")
        if self.allow_degenerate:
            if not 0 <= self.p <= 1:
                raise DomainError("round-win probability must satisfy 0 <= p <= 1")
        elif not 0 < self.p < 1:
            raise DomainError("round-win probability must satisfy 0 < p < 1")

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    def require_nondegenerate(self) -> None:
        if not 0 < self.p < 1:
            raise DomainError("this operation requires 0 < p < 1")

    def stake_bound(self, capital: int) -> int:
        return min(capital, self.goal - capital)

    def to_payload(self) -> dict:
        return {"p": format_rational(self.p), "N": self.goal}


@dataclass(frozen=True)
class Strategy:
    """Stake table s(1..goal-1); immutable value object."""

    stakes: tuple

    def __post_init__(self):
        object.__setattr__(self, "stakes", tuple(int(s) for s in self.stakes))

    def __len__(self) -> int:
        return len(self.stakes)

    def stake(self, capital: int) -> int:
        return self.stakes[capital - 1]

    def to_payload(self, spec: GameSpec) -> dict:
        """Strategy file format shared by the CLI and the service."""
        return {"N": spec.goal, "p": format_rational(spec.p), "stakes": list(self.stakes)}


def load_strategy(payload: dict) -> tuple:
    """Parse a strategy file payload into (GameSpec, Strategy), validated."""
    try:
        spec = GameSpec(parse_rational(payload["p"]), int(payload["N"]))
        strategy = Strategy(tuple(payload["stakes"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed strategy payload: {exc}") from exc
    problems = validate_strategy(spec, strategy)
    if problems:
        raise DomainError("; ".join(problems))
    return spec, strategy


def validate_strategy(spec: GameSpec, strategy: Strategy) -> list:
    """Empty list iff every stake is admissible; otherwise one message per violation."""
    expected = spec.goal - 1
    if len(strategy) != expected:
        return [f"strategy length {len(strategy)} != {expected}"]
    problems = []
    for i, s in enumerate(strategy.stakes, start=1):
        bound = spec.stake_bound(i)
        if not 1 <= s <= bound:
            problems.append(f"stake {s} at capital {i} outside [1, {bound}]")
    return problems


def require_valid(spec: GameSpec, strategy: Strategy) -> None:
    problems = validate_strategy(spec, strategy)
    if problems:
        raise DomainError("inadmissible strategy: " + "; ".join(problems))


def timid(goal: int) -> Strategy:
    """Always stake one dollar."""
    _check_goal(goal)
    return Strategy((1,) * (goal - 1))


def bold(goal: int) -> Strategy:
    """Always stake the maximum admissible amount min(x, goal - x)."""
    _check_goal(goal)
    return Strategy(tuple(min(i, goal - i) for i in range(1, goal)))


def kelly(goal: int, f: Fraction) -> Strategy:
    """Integer fixed-fraction rule: stake min(floor(x*f) + 1, goal - x).

    f = 1 degenerates to the bold strategy (the defensive clamp to
    min(x, goal - x) binds everywhere); f outside (0, 1] is rejected.
    """
    _check_goal(goal)
    f = Fraction(f)
    if not 0 < f <= 1:
        raise DomainError("Kelly fraction must satisfy 0 < f <= 1")
    stakes = []
    for i in range(1, goal):
        proposed = math.floor(i * f) + 1
        stake = min(proposed, goal - i, i)
        assert 1 <= stake <= min(i, goal - i)
        stakes.append(stake)
    return Strategy(tuple(stakes))


def breiman_kelly(goal: int, f: Fraction, c: Fraction) -> Strategy:
    """Kelly staking up to capital c*goal, bold strictly above it.

    The threshold comparison is exact rational arithmetic.  c = 1 gives pure
    Kelly, c = 0 pure bold.  The bold region is x > c*goal (not >=): that is
    the convention under which the family's reference win probabilities and
    durations reproduce exactly.
    """
    _check_goal(goal)
    f, c = Fraction(f), Fraction(c)
    if not 0 < f <= 1:
        raise DomainError("Kelly fraction must satisfy 0 < f <= 1")
    if not 0 <= c <= 1:
        raise DomainError("bold threshold must satisfy 0 <= c <= 1")
    kelly_stakes = kelly(goal, f).stakes
    threshold = c * goal
    stakes = tuple(
        kelly_stakes[i - 1] if i <= threshold else min(i, goal - i)
        for i in range(1, goal)
    )
    return Strategy(stakes)


def _check_goal(goal: int) -> None:
    if not isinstance(goal, int) or goal < 2:
        raise DomainError("goal must be an integer >= 2")


def named_strategy(spec: GameSpec, name: str) -> Strategy:
    """Resolve "timid" | "bold" | "kelly:f" | "bk:f:c" for a given spec."""
    parts = name.split(":")
    kind = parts[0].lower()
    try:
        if kind == "timid" and len(parts) == 1:
            return timid(spec.goal)
        if kind == "bold" and len(parts) == 1:
            return bold(spec.goal)
        if kind == "kelly" and len(parts) == 2:
            return kelly(spec.goal, parse_rational(parts[1]))
        if kind == "bk" and len(parts) == 3:
            return breiman_kelly(spec.goal, parse_rational(parts[1]), parse_rational(parts[2]))
    except DomainError:
        raise
    raise DomainError(f"unknown strategy name: {name!r} (want timid|bold|kelly:f|bk:f:c)")


def timid_win_prob(spec: GameSpec, x: int) -> Fraction:
    """Classical ruin closed form: probability of reaching the goal from x
    under unit stakes.  (1-(q/p)^x)/(1-(q/p)^goal) for p != 1/2, else x/goal.
    """
    _check_capital(spec, x, allow_boundary=True)
    if spec.p == Fraction(1, 2):
        return Fraction(x, spec.goal)
    r = spec.q / spec.p
    return (1 - r**x) / (1 - r**spec.goal)


def timid_expected_time(spec: GameSpec, x: int) -> Fraction:
    """Expected rounds until exiting (either side) under unit stakes.

    x/(q-p) - (goal/(q-p)) * (1-(q/p)^x)/(1-(q/p)^goal) when p != 1/2 and
    x*(goal-x) when p = 1/2; the branch is chosen by exact comparison.
    """
    _check_capital(spec, x, allow_boundary=True)
    n = spec.goal
    if spec.p == Fraction(1, 2):
        return Fraction(x * (n - x))
    d = spec.q - spec.p
    r = spec.q / spec.p
    return Fraction(x) / d - (Fraction(n) / d) * (1 - r**x) / (1 - r**n)


def _check_capital(spec: GameSpec, x: int, allow_boundary: bool = False) -> None:
    lo, hi = (0, spec.goal) if allow_boundary else (1, spec.goal - 1)
    if not lo <= x <= hi:
        raise DomainError(f"capital {x} outside [{lo}, {hi}]")
