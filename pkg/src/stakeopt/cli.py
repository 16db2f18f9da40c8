"""Command-line entry point exposing every analysis operation.

    stakeopt analyze --p 1/3 --goal 3 --strategy timid --measure winprob
    stakeopt best-stake --p 3/5 --goal 4 --capital 1 --horizon 2
    stakeopt search-bk --p 3/5 --goal 200 --capital 100 --horizon 60 --resolution 1/5
    stakeopt simulate --p 1/3 --goal 3 --strategy timid --capital 1 --games 100000 --seed 7
    stakeopt serve --port 8080

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 2 usage
error, 1 domain error.  The default numeric mode can be overridden with the
HG_NUMERIC_MODE environment variable; an explicit --mode flag wins.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import chain, game, horizon, search, simulate
from .errors import DomainError, StakeoptError
from .exact import DECIMAL, EXACT, format_rational, parse_rational, to_decimal
from .game import GameSpec

MODES = (EXACT, DECIMAL, horizon.AUTO)


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_common(parser: argparse.ArgumentParser, mode: bool = True) -> None:
    parser.add_argument(
        "--format", choices=("json", "csv", "table"), default="table",
        help="output format (default: table)",
    )
    parser.add_argument("--sig-digits", type=int, default=10,
                        help="significant digits for decimal rendering")
    if mode:
        parser.add_argument(
            "--mode", choices=MODES, default=None,
            help="numeric backend (default from HG_NUMERIC_MODE, else auto)",
        )


def _add_spec(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=_rational_arg, required=True,
                        help="round-win probability, e.g. 3/5 or 0.6")
    parser.add_argument("--goal", type=int, required=True,
                        help="exit capital N in dollars")


def _add_strategy(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--strategy",
                       help="named family: timid | bold | kelly:f | bk:f:c")
    group.add_argument("--strategy-file",
                       help="JSON strategy file {N, p, stakes}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stakeopt",
        description="Exact analysis and deadline optimization of integer-stake gambling strategies",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="exact chain analysis of a fixed strategy")
    _add_spec(p_an)
    _add_strategy(p_an)
    p_an.add_argument("--measure", required=True,
                      choices=("winprob", "ed", "edw", "pgf", "pgfw"))
    p_an.add_argument("--series", type=int, default=None,
                      help="also expand PGFs to this series order")
    p_an.add_argument("--normalized", action="store_true",
                      help="divide the win-conditioned PGF by the win probability")
    p_an.add_argument("--save-strategy", default=None,
                      help="also write the resolved strategy file here")
    _add_common(p_an)

    p_bs = sub.add_parser("best-stake", help="optimal stake and survival for one state")
    _add_spec(p_bs)
    p_bs.add_argument("--capital", type=int, required=True)
    p_bs.add_argument("--horizon", type=int, required=True)
    _add_common(p_bs)

    p_bt = sub.add_parser("best-strat", help="optimal stakes for every capital at a deadline")
    _add_spec(p_bt)
    p_bt.add_argument("--horizon", type=int, required=True)
    p_bt.add_argument("--full-table", action="store_true",
                      help="emit every (capital, remaining-rounds) cell")
    _add_common(p_bt)

    p_st = sub.add_parser("best-strat-story", help="batch of best-strat runs")
    p_st.add_argument("--case", action="append", default=[],
                      help="p:N:T triple, repeatable (e.g. 11/20:1000:30)")
    p_st.add_argument("--cases-file", default=None,
                      help="JSON list of [p, N, T] triples")
    _add_common(p_st)

    p_he = sub.add_parser("horizon-eval", help="deadline-truncated win probability of a fixed strategy")
    _add_spec(p_he)
    _add_strategy(p_he)
    p_he.add_argument("--horizon", type=int, required=True)
    p_he.add_argument("--capital", type=int, default=None,
                      help="report a single capital instead of the full vector")
    _add_common(p_he)

    p_bk = sub.add_parser("search-bk", help="best Breiman-Kelly pair under a deadline")
    _add_spec(p_bk)
    p_bk.add_argument("--capital", type=int, required=True)
    p_bk.add_argument("--horizon", type=int, required=True)
    p_bk.add_argument("--resolution", type=_rational_arg, required=True)
    p_bk.add_argument("--grid", action="store_true",
                      help="include the full (f, c) evaluation table")
    _add_common(p_bk, mode=False)

    p_kc = sub.add_parser("kelly-contest", help="fastest Kelly fraction above a win-probability floor")
    _add_spec(p_kc)
    p_kc.add_argument("--capital", type=int, required=True)
    p_kc.add_argument("--resolution", type=_rational_arg, required=True)
    p_kc.add_argument("--conf", type=_rational_arg, required=True)
    p_kc.add_argument("--grid", action="store_true")
    _add_common(p_kc, mode=False)

    p_sim = sub.add_parser("simulate", help="seeded Monte-Carlo games")
    _add_spec(p_sim)
    _add_strategy(p_sim, required=False)
    p_sim.add_argument("--optimal", action="store_true",
                       help="play the deadline-optimal policy instead of a fixed strategy")
    p_sim.add_argument("--capital", type=int, required=True)
    p_sim.add_argument("--horizon", type=int, default=None,
                       help="deadline in rounds (required with --optimal)")
    p_sim.add_argument("--games", type=int, default=1)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--allow-degenerate", action="store_true",
                       help="permit p in {0, 1} (simulation only)")
    p_sim.add_argument("--trajectory", action="store_true",
                       help="include the full trajectory (single game only)")
    _add_common(p_sim, mode=False)

    p_srv = sub.add_parser("serve", help="run the advisor HTTP service")
    p_srv.add_argument("--port", type=int, default=8080)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--snapshot-path", default=None,
                       help="persist sessions to this JSON file")
    p_srv.add_argument("--ui-dir", default=None,
                       help="serve a built web UI from this directory")

    return parser


def _resolve_mode(args, default: str = horizon.AUTO) -> str:
    flag = getattr(args, "mode", None)
    if flag:
        return flag
    env = os.environ.get("HG_NUMERIC_MODE", "").strip().lower()
    if env:
        if env not in MODES:
            raise DomainError(f"HG_NUMERIC_MODE must be one of {MODES}, got {env!r}")
        return env
    return default


def _chain_mode(mode: str) -> str:
    # chain solves have no work heuristic; auto means exact
    return EXACT if mode == horizon.AUTO else mode


def _resolve_strategy(args, spec: GameSpec):
    if getattr(args, "strategy_file", None):
        with open(args.strategy_file) as fh:
            file_spec, strategy = game.load_strategy(json.load(fh))
        if file_spec != spec:
            raise DomainError(
                f"strategy file is for p={format_rational(file_spec.p)}, N={file_spec.goal}; "
                f"flags say p={format_rational(spec.p)}, N={spec.goal}"
            )
        return strategy
    return game.named_strategy(spec, args.strategy)


def _emit(args, payload: dict, table_lines, csv_rows=None) -> None:
    if args.format == "json":
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif args.format == "csv":
        if csv_rows is None:
            raise DomainError(f"no CSV form for this {args.command} output")
        writer = csv.writer(sys.stdout)
        writer.writerows(csv_rows)
    else:
        for line in table_lines:
            print(line)


def _bracket(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def cmd_analyze(args) -> int:
    spec = GameSpec(args.p, args.goal)
    strategy = _resolve_strategy(args, spec)
    mode = _chain_mode(_resolve_mode(args))
    if args.save_strategy:
        with open(args.save_strategy, "w") as fh:
            json.dump(strategy.to_payload(spec), fh, indent=2)

    base = {
        "command": "analyze",
        "p": format_rational(spec.p),
        "N": spec.goal,
        "strategy": strategy.to_payload(spec),
        "measure": args.measure,
        "mode": mode,
    }
    if args.measure in ("pgf", "pgfw"):
        if args.measure == "pgf":
            pgfs = chain.duration_pgf(spec, strategy)
        else:
            pgfs = chain.duration_pgf_win(spec, strategy, normalized=args.normalized)
        base["mode"] = EXACT  # generating functions are always exact
        base["normalized"] = bool(args.normalized)
        base["pgfs"] = chain.render_pgfs(pgfs, series=args.series)
        lines = []
        for i, f in enumerate(pgfs, start=1):
            lines.append(f"{i}: {'undefined' if f is None else f}")
            if args.series is not None and f is not None:
                lines.append(f"   series: {_bracket(f.series(args.series))}")
        csv_rows = [["capital", "num", "den"]]
        for i, f in enumerate(pgfs, start=1):
            if f is None:
                csv_rows.append([i, "", ""])
            else:
                pay = f.to_payload()
                csv_rows.append([i, json.dumps(pay["num"]), json.dumps(pay["den"])])
        _emit(args, base, lines, csv_rows)
        return 0

    report = chain.analyze(spec, strategy, mode=mode)
    values = {
        "winprob": report.win_prob,
        "ed": report.exp_duration,
        "edw": report.exp_duration_given_win,
    }[args.measure]
    rendered = [
        None if v is None else (format_rational(v) if mode == EXACT else to_decimal(v, 40))
        for v in values
    ]
    decimals = [None if v is None else to_decimal(v, args.sig_digits) for v in values]
    base["values"] = rendered
    base["decimals"] = decimals
    if report.residual is not None:
        base["residual"] = format(report.residual, "e")
    lines = [_bracket("undefined" if v is None else v for v in rendered)]
    csv_rows = [["capital", "value", "decimal"]] + [
        [i, rendered[i - 1], decimals[i - 1]] for i in range(1, spec.goal)
    ]
    _emit(args, base, lines, csv_rows)
    return 0


def cmd_best_stake(args) -> int:
    spec = GameSpec(args.p, args.goal)
    mode = horizon.resolve_mode(spec, args.horizon, _resolve_mode(args))
    stake, value = horizon.best_stake(spec, args.capital, args.horizon, mode=mode)
    payload = {
        "command": "best-stake",
        "p": format_rational(spec.p),
        "N": spec.goal,
        "capital": args.capital,
        "horizon": args.horizon,
        "mode": mode,
        "stake": stake,
        "value": format_rational(value) if mode == EXACT else to_decimal(value, 40),
        "value_decimal": to_decimal(value, args.sig_digits),
    }
    lines = [f"stake {stake}, survival {payload['value']} ({payload['value_decimal']})"]
    csv_rows = [["capital", "horizon", "stake", "value", "decimal"],
                [args.capital, args.horizon, stake, payload["value"], payload["value_decimal"]]]
    _emit(args, payload, lines, csv_rows)
    return 0


def _table_payload(table: horizon.HorizonTable, args, full: bool) -> tuple:
    render = (lambda v: format_rational(v)) if table.mode == EXACT else (lambda v: to_decimal(v, 40))
    top = table.top_row()
    payload = {
        "command": "best-strat",
        "p": format_rational(table.spec.p),
        "N": table.spec.goal,
        "T": table.horizon,
        "mode": table.mode,
        "stakes": [row["stake"] for row in top],
        "values": [render(row["value"]) for row in top],
        "decimals": [to_decimal(row["value"], args.sig_digits) for row in top],
    }
    lines = [
        f"stakes:   {_bracket(payload['stakes'])}",
        f"survival: {_bracket(payload['decimals'])}",
    ]
    csv_rows = [["capital", "remaining", "value", "best_stake"]]
    if full:
        payload["table"] = table.to_payload(args.sig_digits)
        for t in range(1, table.horizon + 1):
            for i in range(1, table.spec.goal):
                csv_rows.append([i, t, render(table.value(i, t)), table.stake(i, t)])
    else:
        for row in top:
            csv_rows.append([row["capital"], table.horizon, render(row["value"]), row["stake"]])
    return payload, lines, csv_rows


def cmd_best_strat(args) -> int:
    spec = GameSpec(args.p, args.goal)
    table = horizon.build_table(spec, args.horizon, mode=_resolve_mode(args))
    payload, lines, csv_rows = _table_payload(table, args, args.full_table)
    _emit(args, payload, lines, csv_rows)
    return 0


def cmd_best_strat_story(args) -> int:
    cases = []
    for text in args.case:
        bits = text.split(":")
        if len(bits) != 3:
            raise DomainError(f"--case wants p:N:T, got {text!r}")
        cases.append((parse_rational(bits[0]), int(bits[1]), int(bits[2])))
    if args.cases_file:
        with open(args.cases_file) as fh:
            for item in json.load(fh):
                cases.append((parse_rational(str(item[0])), int(item[1]), int(item[2])))
    report = horizon.best_strat_story(cases, mode=_resolve_mode(args))
    payload = {"command": "best-strat-story", "cases": report}
    lines = []
    for entry in report:
        if "error" in entry:
            lines.append(f"case {entry['case']}: ERROR {entry['error']}")
        else:
            lines.append(f"p={entry['p']} N={entry['N']} T={entry['T']} ({entry['mode']})")
            lines.append(f"  stakes:   {_bracket(entry['stakes'])}")
            lines.append(f"  survival: {_bracket(entry['decimals'])}")
    csv_rows = [["p", "N", "T", "capital", "value", "best_stake"]]
    for entry in report:
        if "error" not in entry:
            for i, (stake, dec) in enumerate(zip(entry["stakes"], entry["decimals"]), start=1):
                csv_rows.append([entry["p"], entry["N"], entry["T"], i, dec, stake])
    _emit(args, payload, lines, csv_rows)
    return 0


def cmd_horizon_eval(args) -> int:
    spec = GameSpec(args.p, args.goal)
    strategy = _resolve_strategy(args, spec)
    mode = _resolve_mode(args)
    values = horizon.horizon_win_prob(spec, strategy, args.horizon, mode=mode)
    used = EXACT if isinstance(values[0], Fraction) else DECIMAL
    render = (lambda v: format_rational(v)) if used == EXACT else (lambda v: to_decimal(v, 40))
    if args.capital is not None:
        if not 1 <= args.capital <= spec.goal - 1:
            raise DomainError(f"capital {args.capital} outside [1, {spec.goal - 1}]")
        values = [values[args.capital - 1]]
        capitals = [args.capital]
    else:
        capitals = list(range(1, spec.goal))
    payload = {
        "command": "horizon-eval",
        "p": format_rational(spec.p),
        "N": spec.goal,
        "T": args.horizon,
        "mode": used,
        "strategy": strategy.to_payload(spec),
        "capitals": capitals,
        "values": [render(v) for v in values],
        "decimals": [to_decimal(v, args.sig_digits) for v in values],
    }
    lines = [_bracket(payload["values"])]
    csv_rows = [["capital", "value", "decimal"]] + [
        [i, render(v), to_decimal(v, args.sig_digits)]
        for i, v in zip(capitals, values)
    ]
    _emit(args, payload, lines, csv_rows)
    return 0


def cmd_search_bk(args) -> int:
    spec = GameSpec(args.p, args.goal)
    result = search.best_bk(
        spec, args.capital, args.horizon, args.resolution,
        include_grid=args.grid or args.format == "csv",
    )
    payload = {"command": "search-bk", **result.to_payload(args.sig_digits)}
    lines = [
        f"best f={payload['best_f']} c={payload['best_c']}",
        f"deadline survival: {payload['objective_decimal']}",
        f"win prob (unbounded): {payload['win_prob_decimal']}",
        f"exp duration: {payload['exp_duration_decimal']}",
        f"exp duration given win: {payload['exp_duration_given_win_decimal']}",
        f"evaluations: {payload['evaluations']}",
    ]
    csv_rows = search.grid_csv_rows(result, args.sig_digits) if result.grid else None
    _emit(args, payload, lines, csv_rows)
    return 0


def cmd_kelly_contest(args) -> int:
    spec = GameSpec(args.p, args.goal)
    result = search.kelly_contest(
        spec, args.capital, args.resolution, args.conf,
        include_grid=args.grid or args.format == "csv",
    )
    payload = {"command": "kelly-contest", **result.to_payload(args.sig_digits)}
    lines = [
        f"best f={payload['best_f']} (constraint {'met' if payload['constraint_met'] else 'UNMET'})",
        f"win prob: {payload['win_prob_decimal']}",
        f"exp duration: {payload['exp_duration_decimal']}",
        f"exp duration given win: {payload['exp_duration_given_win_decimal']}",
        f"evaluations: {payload['evaluations']}",
    ]
    csv_rows = search.grid_csv_rows(result, args.sig_digits) if result.grid else None
    _emit(args, payload, lines, csv_rows)
    return 0


def cmd_simulate(args) -> int:
    spec = GameSpec(args.p, args.goal, allow_degenerate=args.allow_degenerate)
    if args.optimal:
        if args.horizon is None:
            raise DomainError("--optimal requires --horizon")
        policy = simulate.optimal_policy(spec, args.horizon)
        policy_name = "optimal"
    else:
        if not (args.strategy or args.strategy_file):
            raise DomainError("simulate needs --strategy, --strategy-file or --optimal")
        strategy = _resolve_strategy(args, spec)
        policy = simulate.fixed_policy(strategy)
        policy_name = args.strategy or args.strategy_file
    summary = simulate.monte_carlo(
        spec, policy, args.capital,
        rounds_limit=args.horizon, games=args.games, seed=args.seed,
        workers=args.workers, allow_degenerate=args.allow_degenerate,
    )
    payload = {"command": "simulate", "policy": policy_name, **summary.to_payload()}
    if args.trajectory:
        if args.games != 1:
            raise DomainError("--trajectory needs --games 1")
        traj = simulate.simulate_game(
            spec, policy, args.capital, rounds_limit=args.horizon,
            seed=args.seed, allow_degenerate=args.allow_degenerate,
        )
        payload["trajectory"] = traj.to_payload()
    lines = [
        f"games: {summary.games}  wins: {summary.wins}  losses: {summary.losses}"
        f"  deadline: {summary.deadline_expired}",
        f"win rate: {summary.win_rate:.6f} +/- {summary.win_rate_stderr:.6f}",
        f"mean duration: {summary.mean_duration:.6f} +/- {summary.duration_stderr:.6f}",
        f"rng: {simulate.RNG_NAME}  seed: {summary.seed}",
    ]
    keys = ["games", "wins", "losses", "deadline_expired", "win_rate",
            "win_rate_stderr", "mean_duration", "duration_stderr", "seed"]
    csv_rows = [keys, [summary.to_payload()[k] for k in keys]]
    _emit(args, payload, lines, csv_rows)
    return 0


def cmd_serve(args) -> int:
    from . import service

    service.run(host=args.host, port=args.port,
                snapshot_path=args.snapshot_path, ui_dir=args.ui_dir)
    return 0


_HANDLERS = {
    "analyze": cmd_analyze,
    "best-stake": cmd_best_stake,
    "best-strat": cmd_best_strat,
    "best-strat-story": cmd_best_strat_story,
    "horizon-eval": cmd_horizon_eval,
    "search-bk": cmd_search_bk,
    "kelly-contest": cmd_kelly_contest,
    "simulate": cmd_simulate,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except StakeoptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
