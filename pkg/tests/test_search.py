from fractions import Fraction

import pytest

from stakeopt.chain import analyze
from stakeopt.errors import DomainError
from stakeopt.exact import DECIMAL, to_decimal
from stakeopt.game import GameSpec, breiman_kelly
from stakeopt.horizon import build_table, horizon_win_prob
from stakeopt.search import best_bk, c_grid, f_grid, grid_csv_rows, kelly_contest

BIG = GameSpec(Fraction(3, 5), 200)
SMALL = GameSpec(Fraction(3, 5), 4)


class TestGrids:
    def test_f_grid_stays_inside_unit_interval(self):
        assert f_grid(Fraction(1, 2)) == [Fraction(1, 2)]
        assert f_grid(Fraction(1, 4)) == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]

    def test_c_grid_has_both_endpoints(self):
        assert c_grid(Fraction(1, 2)) == [Fraction(0), Fraction(1, 2), Fraction(1)]
        assert c_grid(Fraction(2, 7))[-1] == 1 and c_grid(Fraction(2, 7))[0] == 0

    def test_degenerate_resolution_rejected(self):
        for h in (Fraction(1), Fraction(0), Fraction(3, 2), Fraction(-1, 4)):
            with pytest.raises(DomainError):
                f_grid(h)


class TestBestBK:
    def test_three_evaluations_at_half_resolution(self):
        result = best_bk(SMALL, 2, 1, Fraction(1, 2))
        assert result.evaluations == 3

    def test_one_round_winner_stakes_to_goal(self):
        result = best_bk(SMALL, 2, 1, Fraction(1, 2))
        winner = breiman_kelly(4, result.best_f, result.best_c)
        assert winner.stake(2) == 2
        assert result.objective == Fraction(3, 5)
        # deterministic tie-break: smaller f first, then larger c
        assert (result.best_f, result.best_c) == (Fraction(1, 2), Fraction(1))

    def test_reference_grid_rows(self):
        # the family's landmark values at f=1/10: pure Kelly (c=1), the
        # duration-reducing threshold c=4/5, the duration-reversal case
        # c=3/5, and c=2/5 where bold play starts at or below the capital
        result = best_bk(BIG, 100, 30, Fraction(1, 10), include_grid=True)
        assert result.evaluations == 99
        rows = {(pt.f, pt.c): pt for pt in result.grid}

        def fmt(pt):
            return (
                to_decimal(pt.win_prob, 10),
                to_decimal(pt.exp_duration_given_win, 10),
            )

        assert fmt(rows[(Fraction(1, 10), Fraction(1))]) == ("0.9998784517", "44.94509484")
        assert fmt(rows[(Fraction(1, 10), Fraction(4, 5))]) == ("0.9998721302", "43.81842784")
        assert fmt(rows[(Fraction(1, 10), Fraction(3, 5))]) == ("0.9993836900", "52.61769977")
        assert fmt(rows[(Fraction(1, 10), Fraction(2, 5))]) == ("0.6000000000", "1.000000000")

    def test_duration_reversal_around_threshold(self):
        # lowering c from 1 first shortens the conditional stay (c=4/5),
        # then reverses once the bold region creeps toward the capital
        reports = {
            c: analyze(BIG, breiman_kelly(200, Fraction(1, 10), c), mode=DECIMAL)
            for c in (Fraction(3, 5), Fraction(4, 5), Fraction(1))
        }
        edw = {c: rep.exp_duration_given_win[99] for c, rep in reports.items()}
        win = {c: rep.win_prob[99] for c, rep in reports.items()}
        assert edw[Fraction(4, 5)] < edw[Fraction(1)] < edw[Fraction(3, 5)]
        assert win[Fraction(3, 5)] < win[Fraction(4, 5)] < win[Fraction(1)]

    def test_winner_reproducible_and_bounded_by_dp(self):
        result = best_bk(BIG, 100, 30, Fraction(1, 5))
        strat = breiman_kelly(200, result.best_f, result.best_c)
        assert horizon_win_prob(BIG, strat, 30)[99] == result.objective
        report = analyze(BIG, strat)
        assert report.win_prob[99] == result.win_prob
        assert report.exp_duration[99] == result.exp_duration
        table = build_table(BIG, 30, mode=DECIMAL)
        assert float(result.objective) <= float(table.value(100, 30)) + 1e-25

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            best_bk(SMALL, 2, 1, Fraction(1))
        with pytest.raises(DomainError):
            best_bk(SMALL, 0, 1, Fraction(1, 2))
        with pytest.raises(DomainError):
            best_bk(SMALL, 2, 0, Fraction(1, 2))


class TestKellyContest:
    def test_reference_contest(self):
        result = kelly_contest(BIG, 100, Fraction(1, 10), Fraction(999, 1000),
                               include_grid=True)
        assert result.constraint_met is True
        assert result.best_f == Fraction(1, 10)
        assert to_decimal(result.win_prob, 10) == "0.9998784517"
        assert to_decimal(result.exp_duration, 10) == "44.96134439"
        assert to_decimal(result.exp_duration_given_win, 10) == "44.94509484"
        rows = {pt.f: pt for pt in result.grid}
        assert rows[Fraction(1, 10)].qualified is True
        # every riskier fraction on this grid misses the 0.999 floor
        assert all(not pt.qualified for f, pt in rows.items() if f != Fraction(1, 10))

    def test_unmet_constraint_flagged(self):
        result = kelly_contest(BIG, 100, Fraction(1, 10), Fraction(9999999, 10000000))
        assert result.constraint_met is False
        assert result.best_f == Fraction(1, 10)  # still the max-win-prob choice
        assert to_decimal(result.win_prob, 10) == "0.9998784517"

    def test_single_candidate(self):
        result = kelly_contest(SMALL, 2, Fraction(1, 2), Fraction(1, 2))
        assert result.evaluations == 1
        assert result.best_f == Fraction(1, 2)
        strat_report = analyze(SMALL, breiman_kelly(4, Fraction(1, 2), Fraction(1)))
        assert result.win_prob == strat_report.win_prob[1]

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            kelly_contest(SMALL, 2, Fraction(2), Fraction(1, 2))
        with pytest.raises(DomainError):
            kelly_contest(SMALL, 2, Fraction(1, 2), Fraction(1))


class TestCsv:
    def test_grid_rows_shape(self):
        result = kelly_contest(SMALL, 2, Fraction(1, 2), Fraction(1, 2),
                               include_grid=True)
        rows = grid_csv_rows(result)
        assert rows[0][0] == "f"
        assert len(rows) == 1 + result.evaluations

    def test_requires_grid(self):
        result = kelly_contest(SMALL, 2, Fraction(1, 2), Fraction(1, 2))
        with pytest.raises(DomainError):
            grid_csv_rows(result)
