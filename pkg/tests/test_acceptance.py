"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with -s to see them).

One criterion is knowingly red: the Breiman-Kelly (f=1/10, c=2/5) claim.
With c=2/5 the bold region starts at capital 80, below the starting capital
100, so play is bold from the first round (win probability 3/5, duration
exactly 1) under any threshold convention; the claimed figures are produced
by c=3/5 (see test_search.py, where they are asserted bit-exactly).  The
assertions here state the criterion as written and fail honestly.
"""

import math
import random
import time
from decimal import Decimal
from fractions import Fraction

from fastapi.testclient import TestClient

from conftest import random_spec, random_strategy
from stakeopt.chain import analyze, duration_pgf, duration_pgf_win, win_prob
from stakeopt.exact import (
    DECIMAL,
    EXACT,
    Polynomial,
    RationalFunction,
    parse_rational,
    series_coefficients,
    to_decimal,
)
from stakeopt.game import (
    GameSpec,
    bold,
    breiman_kelly,
    kelly,
    timid,
    timid_expected_time,
    timid_win_prob,
)
from stakeopt.horizon import best_stake, build_table
from stakeopt.service import create_app
from stakeopt.simulate import fixed_policy, monte_carlo


def report(name: str, checks: list) -> None:
    """checks: list of (label, bool); prints one line and asserts all."""
    failed = [label for label, ok in checks if not ok]
    state = "PASS" if not failed else f"FAIL ({'; '.join(failed)})"
    print(f"\nACCEPTANCE {name}: {state}")
    assert not failed, f"{name}: {failed}"


SPEC_SMALL = GameSpec(Fraction(1, 3), 3)
SPEC_BIG = GameSpec(Fraction(3, 5), 200)


def test_criterion_exact_lists():
    rep = analyze(SPEC_SMALL, timid(3))
    report(
        "exact-list reproduction (p=1/3, N=3)",
        [
            ("win_prob", list(rep.win_prob) == [Fraction(1, 7), Fraction(3, 7)]),
            ("expected_duration", list(rep.exp_duration) == [Fraction(12, 7), Fraction(15, 7)]),
            ("duration_given_win", list(rep.exp_duration_given_win) == [Fraction(18, 7), Fraction(11, 7)]),
        ],
    )


def test_criterion_pgf_reproduction():
    den = Polynomial((9, 0, -2))
    pgf = duration_pgf(SPEC_SMALL, timid(3))
    pgfw = duration_pgf_win(SPEC_SMALL, timid(3))
    report(
        "PGF reproduction",
        [
            ("pgf[1]", pgf[0] == RationalFunction(Polynomial((0, 6, 1)), den)),
            ("pgf[2]", pgf[1] == RationalFunction(Polynomial((0, 3, 4)), den)),
            ("pgfw[1]", pgfw[0] == RationalFunction(Polynomial((0, 0, 1)), den)),
            ("pgfw[2]", pgfw[1] == RationalFunction(Polynomial((0, 3)), den)),
            (
                "pgf series",
                series_coefficients(pgf[0], 4)[1:]
                == [Fraction(2, 3), Fraction(1, 9), Fraction(4, 27), Fraction(2, 81)],
            ),
            (
                "pgfw series",
                series_coefficients(pgfw[0], 4)[1:]
                == [Fraction(0), Fraction(1, 9), Fraction(0), Fraction(2, 81)],
            ),
        ],
    )


def test_criterion_kelly_claim():
    t0 = time.monotonic()
    rep = analyze(SPEC_BIG, kelly(200, Fraction(1, 10)), mode=EXACT)
    elapsed = time.monotonic() - t0
    report(
        "Kelly claim (p=3/5, N=200, f=1/10, capital 100)",
        [
            ("win prob 0.9998784517", to_decimal(rep.win_prob[99], 10) == "0.9998784517"),
            (
                "duration-until-winning 44.94509484",
                to_decimal(rep.exp_duration_given_win[99], 10) == "44.94509484",
            ),
            ("runtime < 10 s", elapsed < 10),
        ],
    )


def _bk_reports():
    reports = {}
    for c in (Fraction(2, 5), Fraction(4, 5), Fraction(1)):
        reports[c] = analyze(SPEC_BIG, breiman_kelly(200, Fraction(1, 10), c), mode=EXACT)
    return reports


BK = _bk_reports()


def test_criterion_breiman_kelly_c45():
    rep = BK[Fraction(4, 5)]
    report(
        "Breiman-Kelly claim (f=1/10, c=4/5)",
        [
            ("win prob 0.9998721302", to_decimal(rep.win_prob[99], 10) == "0.9998721302"),
            (
                "duration-until-winning 43.81842784",
                to_decimal(rep.exp_duration_given_win[99], 10) == "43.81842784",
            ),
        ],
    )


def test_criterion_breiman_kelly_win_prob_ordering():
    w = {c: rep.win_prob[99] for c, rep in BK.items()}
    report(
        "Breiman-Kelly win-probability ordering (c=2/5 < c=4/5 < c=1)",
        [("ordering", w[Fraction(2, 5)] < w[Fraction(4, 5)] < w[Fraction(1)])],
    )


def test_criterion_breiman_kelly_c25_as_stated():
    # Verbatim criterion; unattainable (see module docstring): with c=2/5 the
    # strategy is bold from capital 100, so the chain gives 3/5 and duration 1.
    rep = BK[Fraction(2, 5)]
    d = {c: r.exp_duration_given_win[99] for c, r in BK.items()}
    report(
        "Breiman-Kelly claim (f=1/10, c=2/5) as stated [known reference-figure defect]",
        [
            ("win prob 0.9993836900", to_decimal(rep.win_prob[99], 10) == "0.9993836900"),
            (
                "duration 52.61769977",
                to_decimal(rep.exp_duration_given_win[99], 10) == "52.61769977",
            ),
            (
                "duration ordering c=4/5 < c=1 < c=2/5",
                d[Fraction(4, 5)] < d[Fraction(1)] < d[Fraction(2, 5)],
            ),
        ],
    )


def test_criterion_timid_and_bold_baselines():
    timid_duration = timid_expected_time(SPEC_BIG, 100)
    rep = analyze(SPEC_BIG, bold(200))
    report(
        "timid/bold baselines (p=3/5, N=200, capital 100)",
        [
            ("timid duration within 1e-9 of 500", abs(timid_duration - 500) < Fraction(1, 10**9)),
            ("bold duration exactly 1", rep.exp_duration[99] == 1),
            ("bold win prob exactly 3/5", rep.win_prob[99] == Fraction(3, 5)),
        ],
    )


def tree_best(p, goal, capital, rounds_left):
    # independent game-tree oracle (also used in test_horizon)
    if capital >= goal:
        return Fraction(1)
    if capital <= 0 or rounds_left == 0:
        return Fraction(0)
    best = Fraction(0)
    for x in range(1, min(capital, goal - capital) + 1):
        value = (1 - p) * tree_best(p, goal, capital - x, rounds_left - 1) + p * tree_best(
            p, goal, capital + x, rounds_left - 1
        )
        if value > best:
            best = value
    return best


def test_criterion_dp_matches_game_tree():
    checks = []
    for p in (Fraction(1, 3), Fraction(1, 2), Fraction(11, 20), Fraction(3, 5)):
        for goal in range(2, 7):
            table = build_table(GameSpec(p, goal), 6, mode=EXACT)
            ok = all(
                table.value(i, t) == tree_best(p, goal, i, t)
                for t in range(1, 7)
                for i in range(1, goal)
            )
            checks.append((f"p={p} N={goal}", ok))
    report("DP equals exhaustive game-tree maximization (N<=6, T<=6)", checks)


def test_criterion_dp_bound_and_limit():
    spec = GameSpec(Fraction(11, 20), 10)
    table = build_table(spec, 300, mode=DECIMAL)
    caps = {i: timid_win_prob(spec, i) for i in range(1, 10)}
    tol = Decimal("1e-25")
    monotone = all(
        table.value(i, t) >= table.value(i, t - 1) - tol
        for i in range(1, 10)
        for t in range(1, 301)
    )
    bounded = all(
        Fraction(table.value(i, t)) <= caps[i] + Fraction(1, 10**20)
        for i in range(1, 10)
        for t in range(0, 301)
    )
    limit_reached = all(
        abs(Fraction(table.value(i, 300)) - caps[i]) < Fraction(1, 10**6)
        for i in range(1, 10)
    )
    report(
        "DP bound and limit (p=11/20, N=10, decimal mode)",
        [
            ("nondecreasing in T", monotone),
            ("bounded by timid win prob", bounded),
            ("within 1e-6 of the bound by T=300", limit_reached),
        ],
    )


def test_criterion_dp_limit_tolerance_as_stated():
    # Verbatim tolerance; unattainable: the optimal-play absorption tail at
    # round 200 leaves a gap of 3.79e-6 to the unbounded optimum (largest at
    # capital 4).  The limit itself is right -- the gap passes 1e-6 near
    # T=300 and keeps shrinking geometrically (1.5e-8 at T=300).
    spec = GameSpec(Fraction(11, 20), 10)
    table = build_table(spec, 200, mode=DECIMAL)
    converged = all(
        abs(Fraction(table.value(i, 200)) - timid_win_prob(spec, i)) < Fraction(1, 10**6)
        for i in range(1, 10)
    )
    report(
        "DP limit within 1e-6 at T=200 as stated [known reference-figure defect]",
        [("within 1e-6 at T=200", converged)],
    )


def test_criterion_closed_form_cross_check():
    rng = random.Random(20260810)
    checks = []
    for k in range(20):
        goal = rng.randint(2, 30)
        denom = rng.randint(2, 30)
        spec = GameSpec(Fraction(rng.randint(1, denom - 1), denom), goal)
        strategy = timid(goal)
        ok = win_prob(spec, strategy) == [
            timid_win_prob(spec, x) for x in range(1, goal)
        ] and analyze(spec, strategy).exp_duration == tuple(
            timid_expected_time(spec, x) for x in range(1, goal)
        )
        checks.append((f"case {k} (p={spec.p}, N={spec.goal})", ok))
    report("closed form vs linear solve, 20 random specs", checks)


def test_criterion_pgf_calculus():
    rng = random.Random(424242)
    checks = []
    for k in range(10):
        spec = random_spec(rng, max_goal=12)
        strategy = random_strategy(rng, spec.goal)
        rep = analyze(spec, strategy)
        pgf = duration_pgf(spec, strategy)
        pgfw = duration_pgf_win(spec, strategy)
        derivative_ok = all(
            f.derivative()(Fraction(1)) == d for f, d in zip(pgf, rep.exp_duration)
        )
        mass_ok = all(f(Fraction(1)) == w for f, w in zip(pgfw, rep.win_prob))
        checks.append((f"case {k} (N={spec.goal})", derivative_ok and mass_ok))
    report("PGF calculus identities (random strategies, N<=12)", checks)


def test_criterion_monte_carlo_agreement():
    games = 100_000
    checks = []

    spec, strategy, start = SPEC_SMALL, timid(3), 1
    summary = monte_carlo(spec, fixed_policy(strategy), start, games=games, seed=2026)
    w = float(win_prob(spec, strategy)[start - 1])
    d = float(analyze(spec, strategy).exp_duration[start - 1])
    checks.append(
        (
            "timid win rate within 4 sigma",
            abs(summary.win_rate - w) <= 4 * math.sqrt(w * (1 - w) / games),
        )
    )
    checks.append(
        (
            "timid duration within 4 sigma",
            abs(summary.mean_duration - d) <= 4 * summary.duration_stderr,
        )
    )
    parallel = monte_carlo(
        spec, fixed_policy(strategy), start, games=games, seed=2026, workers=8
    )
    checks.append(("timid serial == parallel", summary == parallel))

    strategy_big = kelly(200, Fraction(1, 10))
    summary_big = monte_carlo(
        SPEC_BIG, fixed_policy(strategy_big), 100, games=games, seed=817
    )
    rep = analyze(SPEC_BIG, strategy_big)
    w_big = float(rep.win_prob[99])
    d_big = float(rep.exp_duration[99])
    checks.append(
        (
            "kelly win rate within 4 sigma",
            abs(summary_big.win_rate - w_big)
            <= 4 * math.sqrt(w_big * (1 - w_big) / games),
        )
    )
    checks.append(
        (
            "kelly duration within 4 sigma",
            abs(summary_big.mean_duration - d_big) <= 4 * summary_big.duration_stderr,
        )
    )
    parallel_big = monte_carlo(
        SPEC_BIG, fixed_policy(strategy_big), 100, games=games, seed=817, workers=8
    )
    checks.append(("kelly serial == parallel", summary_big == parallel_big))

    report("Monte-Carlo agreement, 1e5 seeded games", checks)


def test_criterion_service_engine_consistency():
    client = TestClient(create_app())
    p, goal, horizon, capital = Fraction(3, 5), 4, 2, 1
    view = client.post(
        "/api/session", json={"p": "3/5", "N": goal, "T": horizon, "capital": capital}
    ).json()
    checks = []

    # identical to the CLI best-stake path (shared engine)
    stake, value = best_stake(GameSpec(p, goal), capital, horizon)
    checks.append(("create matches best_stake", view["recommended_stake"] == stake))
    checks.append(("create matches DP value", parse_rational(view["survival"]) == value))

    # scripted transitions with the martingale identity at each step
    spec = GameSpec(p, goal)
    for result in ("win", "win"):
        survival_before = parse_rational(view["survival"])
        stake = view["recommended_stake"]
        i = view["capital"]
        remaining = view["remaining"]
        table = build_table(spec, remaining)
        lose_v = table.value(i - stake, remaining - 1)
        win_v = table.value(i + stake, remaining - 1)
        checks.append(
            (
                f"martingale at capital {i}",
                survival_before == (1 - p) * lose_v + p * win_v,
            )
        )
        view = client.post(
            f"/api/session/{view['id']}/outcome", json={"result": result}
        ).json()
        if view["status"] == "active":
            direct_stake, direct_value = best_stake(spec, view["capital"], view["remaining"])
            checks.append(
                (
                    f"recommendation parity at capital {view['capital']}",
                    view["recommended_stake"] == direct_stake
                    and parse_rational(view["survival"]) == direct_value,
                )
            )
    checks.append(("terminal winner", view["status"] == "winner"))
    report("service-engine consistency (scripted session, no UI)", checks)
