import math
import random
from decimal import Context, ROUND_HALF_EVEN, Decimal
from fractions import Fraction

import pytest

from conftest import random_spec, random_strategy
from stakeopt.chain import expected_duration, win_prob
from stakeopt.errors import DomainError
from stakeopt.game import GameSpec, bold, timid
from stakeopt.horizon import build_table
from stakeopt.simulate import (
    fixed_policy,
    monte_carlo,
    optimal_policy,
    simulate_game,
    win_threshold,
)


class TestBernoulliConvention:
    def test_threshold_matches_decimal_comparison(self):
        rng = random.Random(4)
        for p in (Fraction(3, 5), Fraction(1, 3), Fraction(1, 7), Fraction(123, 1001)):
            c = win_threshold(p)
            p30 = Context(prec=30, rounding=ROUND_HALF_EVEN).divide(
                Decimal(p.numerator), Decimal(p.denominator)
            )
            for _ in range(2000):
                j = rng.getrandbits(53)
                u = j / 2**53
                assert (j < c) == (Decimal(u) < p30)

    def test_boundary_exact(self):
        # p = 1/2 is exact at 30 digits; threshold is exactly 2^52
        assert win_threshold(Fraction(1, 2)) == 2**52


class TestSingleGame:
    def test_deterministic_replay(self):
        spec = GameSpec(Fraction(1, 3), 6)
        strategy = timid(6)
        a = simulate_game(spec, fixed_policy(strategy), 3, seed=123)
        b = simulate_game(spec, fixed_policy(strategy), 3, seed=123)
        assert a == b

    def test_capital_evolution_and_admissibility(self):
        rng = random.Random(17)
        for _ in range(10):
            spec = random_spec(rng, max_goal=10)
            strategy = random_strategy(rng, spec.goal)
            start = rng.randint(1, spec.goal - 1)
            traj = simulate_game(spec, fixed_policy(strategy), start, seed=rng.randint(0, 999))
            capital = start
            for r in traj.rounds:
                assert r.capital == capital
                assert 1 <= r.stake <= min(capital, spec.goal - capital)
                capital += r.stake if r.won else -r.stake
            assert capital == traj.final_capital
            assert traj.exit == {spec.goal: "winner", 0: "loser"}.get(capital, "deadline")

    def test_deadline_exit(self):
        spec = GameSpec(Fraction(1, 2), 100)
        traj = simulate_game(spec, fixed_policy(timid(100)), 50, rounds_limit=5, seed=1)
        assert traj.duration <= 5
        if 0 < traj.final_capital < 100:
            assert traj.exit == "deadline"

    def test_degenerate_needs_flag(self):
        spec = GameSpec(Fraction(1), 5, allow_degenerate=True)
        with pytest.raises(DomainError):
            simulate_game(spec, fixed_policy(timid(5)), 2, seed=0)
        traj = simulate_game(spec, fixed_policy(timid(5)), 2, seed=0, allow_degenerate=True)
        assert traj.exit == "winner"
        assert traj.duration == 3  # unit stakes walk 2 -> 5 deterministically

    def test_bold_always_one_round(self):
        spec = GameSpec(Fraction(3, 5), 200)
        policy = fixed_policy(bold(200))
        for seed in range(50):
            traj = simulate_game(spec, policy, 100, seed=seed)
            assert traj.duration == 1

    def test_inadmissible_policy_rejected(self):
        spec = GameSpec(Fraction(1, 2), 10)
        with pytest.raises(DomainError):
            simulate_game(spec, lambda capital, remaining: 9, 5, seed=0)


class TestOptimalPolicy:
    def test_stakes_follow_table(self):
        spec = GameSpec(Fraction(3, 5), 8)
        table = build_table(spec, 6)
        policy = optimal_policy(spec, 6)
        traj = simulate_game(spec, policy, 4, rounds_limit=6, seed=5)
        remaining = 6
        for r in traj.rounds:
            assert r.stake == table.stake(r.capital, remaining)
            remaining -= 1

    def test_needs_finite_horizon(self):
        spec = GameSpec(Fraction(3, 5), 8)
        policy = optimal_policy(spec, 6)
        with pytest.raises(DomainError):
            simulate_game(spec, policy, 4, rounds_limit=None, seed=5)


class TestMonteCarlo:
    def test_single_game_matches_trajectory(self):
        spec = GameSpec(Fraction(1, 3), 3)
        summary = monte_carlo(spec, fixed_policy(timid(3)), 1, games=1, seed=9)
        traj = simulate_game(spec, fixed_policy(timid(3)), 1, seed=9)
        assert summary.games == 1
        assert summary.wins == (1 if traj.exit == "winner" else 0)
        assert summary.mean_duration == traj.duration

    def test_serial_equals_parallel(self):
        spec = GameSpec(Fraction(1, 3), 3)
        serial = monte_carlo(spec, fixed_policy(timid(3)), 1, games=4000, seed=3, workers=1)
        parallel = monte_carlo(spec, fixed_policy(timid(3)), 1, games=4000, seed=3, workers=8)
        assert serial == parallel

    def test_statistics_against_exact_small(self):
        spec = GameSpec(Fraction(1, 3), 3)
        strategy = timid(3)
        games = 20000
        summary = monte_carlo(spec, fixed_policy(strategy), 1, games=games, seed=77)
        w = float(win_prob(spec, strategy)[0])
        d = float(expected_duration(spec, strategy)[0])
        assert abs(summary.win_rate - w) <= 4 * math.sqrt(w * (1 - w) / games)
        assert abs(summary.mean_duration - d) <= 4 * max(summary.duration_stderr, 1e-9)

    def test_bold_win_rate(self):
        spec = GameSpec(Fraction(3, 5), 200)
        games = 20000
        summary = monte_carlo(spec, fixed_policy(bold(200)), 100, games=games, seed=123)
        assert summary.mean_duration == 1.0
        assert abs(summary.win_rate - 0.6) <= 4 * math.sqrt(0.24 / games)

    def test_payload_fields(self):
        spec = GameSpec(Fraction(1, 3), 3)
        payload = monte_carlo(spec, fixed_policy(timid(3)), 1, games=10, seed=1).to_payload()
        assert payload["rng"] == "python-random-mersenne-twister"
        assert payload["seed"] == 1
        assert payload["games"] == 10
        assert payload["wins"] + payload["losses"] + payload["deadline_expired"] == 10
