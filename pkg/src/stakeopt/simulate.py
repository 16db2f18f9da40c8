"""Seeded Monte-Carlo play of single games and batches.

The generator is Python's Mersenne Twister (``random.Random``), whose
float output is reproducible across platforms; the generator name and seed
are stamped on every artifact so runs replay bit-exactly.  A round is won
when the next uniform in [0, 1) is below p rendered at 30 significant
decimal digits.  Since the uniform is an integer multiple of 2^-53, that
comparison is done as an exact integer threshold.

Batch runs derive the seed of game k as seed + k, so serial and parallel
execution produce identical summaries.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Context, ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .errors import DomainError
from .exact import format_rational
from .game import GameSpec, Strategy
from .horizon import AUTO, build_table

RNG_NAME = "python-random-mersenne-twister"
BERNOULLI_DIGITS = 30
_TWO_53 = 1 << 53


@lru_cache(maxsize=None)
def win_threshold(p: Fraction) -> int:
    """Integer c such that uniform j/2^53 < p@30digits  iff  j < c."""
    p30 = Context(prec=BERNOULLI_DIGITS, rounding=ROUND_HALF_EVEN).divide(
        Decimal(p.numerator), Decimal(p.denominator)
    )
    scaled = Fraction(p30) * _TWO_53
    return math.ceil(scaled)


@dataclass(frozen=True)
class Round:
    capital: int  # before staking
    stake: int
    won: bool


@dataclass(frozen=True)
class Trajectory:
    seed: int
    start: int
    rounds: tuple
    exit: str  # "winner" | "loser" | "deadline"
    duration: int

    @property
    def final_capital(self) -> int:
        if not self.rounds:
            return self.start
        last = self.rounds[-1]
        return last.capital + (last.stake if last.won else -last.stake)

    def to_payload(self) -> dict:
        return {
            "seed": self.seed,
            "rng": RNG_NAME,
            "start": self.start,
            "exit": self.exit,
            "duration": self.duration,
            "final_capital": self.final_capital,
            "rounds": [
                {"capital": r.capital, "stake": r.stake, "won": r.won}
                for r in self.rounds
            ],
        }


def fixed_policy(strategy: Strategy) -> Callable:
    def stake(capital: int, remaining) -> int:
        return strategy.stake(capital)

    return stake


def optimal_policy(spec: GameSpec, horizon: int, mode: str = AUTO) -> Callable:
    """Stakes from the deadline DP, keyed by the rounds still allowed."""
    table = build_table(spec, horizon, mode=mode)

    def stake(capital: int, remaining) -> int:
        if remaining is None or remaining < 1:
            raise DomainError("optimal play needs a finite remaining horizon")
        return table.stake(capital, remaining)

    return stake


def _check_game(spec: GameSpec, start: int, allow_degenerate: bool) -> None:
    if not 1 <= start <= spec.goal - 1:
        raise DomainError(f"start capital {start} outside [1, {spec.goal - 1}]")
    if (spec.p == 0 or spec.p == 1) and not allow_degenerate:
        raise DomainError("degenerate p requires allow_degenerate=True")


def _play(spec, policy, start, rounds_limit, seed, rounds):
    """Core loop; appends to ``rounds`` when given.  Returns (exit, duration,
    final capital).  Identical draws either way, so summaries replay."""
    threshold = win_threshold(spec.p)
    goal = spec.goal
    rng_next = random.Random(seed).random
    capital = start
    played = 0
    while 0 < capital < goal:
        remaining = None if rounds_limit is None else rounds_limit - played
        if remaining is not None and remaining <= 0:
            break
        stake = policy(capital, remaining)
        bound = capital if capital <= goal - capital else goal - capital
        if not 1 <= stake <= bound:
            raise DomainError(
                f"policy staked {stake} at capital {capital}, outside [1, {bound}]"
            )
        won = int(rng_next() * _TWO_53) < threshold
        if rounds is not None:
            rounds.append(Round(capital=capital, stake=stake, won=won))
        capital += stake if won else -stake
        played += 1
    if capital == goal:
        return "winner", played, capital
    if capital == 0:
        return "loser", played, capital
    return "deadline", played, capital


def simulate_game(
    spec: GameSpec,
    policy: Callable,
    start: int,
    rounds_limit: Optional[int] = None,
    seed: int = 0,
    allow_degenerate: bool = False,
) -> Trajectory:
    """One seeded game; deterministic given the seed.

    ``policy(capital, remaining)`` returns the stake; ``rounds_limit`` of
    None plays until absorption (stakes >= 1 make absorption almost sure).
    Degenerate p in {0, 1} is only allowed behind the explicit flag.
    """
    _check_game(spec, start, allow_degenerate)
    rounds = []
    exit_state, duration, _ = _play(spec, policy, start, rounds_limit, seed, rounds)
    return Trajectory(
        seed=seed, start=start, rounds=tuple(rounds), exit=exit_state, duration=duration
    )


@dataclass(frozen=True)
class BatchSummary:
    games: int
    wins: int
    losses: int
    deadline_expired: int
    win_rate: float
    win_rate_stderr: float
    mean_duration: float
    duration_stderr: float
    seed: int
    p: Fraction

    def to_payload(self) -> dict:
        return {
            "rng": RNG_NAME,
            "bernoulli_digits": BERNOULLI_DIGITS,
            "seed": self.seed,
            "p": format_rational(self.p),
            "games": self.games,
            "wins": self.wins,
            "losses": self.losses,
            "deadline_expired": self.deadline_expired,
            "win_rate": self.win_rate,
            "win_rate_stderr": self.win_rate_stderr,
            "mean_duration": self.mean_duration,
            "duration_stderr": self.duration_stderr,
        }


def monte_carlo(
    spec: GameSpec,
    policy: Callable,
    start: int,
    rounds_limit: Optional[int] = None,
    games: int = 1,
    seed: int = 0,
    workers: int = 1,
    allow_degenerate: bool = False,
) -> BatchSummary:
    """Aggregate independent games with per-game seeds seed+0 .. seed+games-1."""
    if games < 1:
        raise DomainError("games must be >= 1")
    _check_game(spec, start, allow_degenerate)

    def play(index: int) -> tuple:
        exit_state, duration, _ = _play(
            spec, policy, start, rounds_limit, seed + index, None
        )
        return exit_state, duration

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(play, range(games), chunksize=256))
    else:
        outcomes = [play(i) for i in range(games)]

    wins = sum(1 for exit_state, _ in outcomes if exit_state == "winner")
    losses = sum(1 for exit_state, _ in outcomes if exit_state == "loser")
    expired = games - wins - losses
    durations = [d for _, d in outcomes]
    mean_dur = sum(durations) / games
    var_dur = (
        sum((d - mean_dur) ** 2 for d in durations) / (games - 1) if games > 1 else 0.0
    )
    rate = wins / games
    return BatchSummary(
        games=games,
        wins=wins,
        losses=losses,
        deadline_expired=expired,
        win_rate=rate,
        win_rate_stderr=math.sqrt(rate * (1 - rate) / games),
        mean_duration=mean_dur,
        duration_stderr=math.sqrt(var_dur / games),
        seed=seed,
        p=spec.p,
    )
