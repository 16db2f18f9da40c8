"""Parametric strategy optimization over (f, c) grids.

Two searches:

  * best_bk: over the Breiman-Kelly family, maximize the probability of
    reaching the goal within a deadline, starting from a given capital.
  * kelly_contest: over pure Kelly fractions, minimize the expected casino
    stay subject to a floor on the ultimate win probability.

Grid semantics (resolution h): f runs over multiples of h strictly inside
(0, 1); c runs over multiples of h in [0, 1] with both endpoints always
present (c = 1 recovers pure Kelly, c = 0 pure bold).

Every grid point is evaluated with the fast decimal backend; the single
winner is re-evaluated exactly and the exact values are what the result
reports.  Grid rows carry the unconditional expected duration (used for
tie-breaking) and the win-conditioned one (the quantity that exhibits the
duration-reversal threshold c0(f)).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Optional

from .chain import analyze
from .errors import DomainError
from .exact import (
    DECIMAL,
    DECIMAL_TIE_TOLERANCE,
    EXACT,
    format_rational,
    to_decimal,
)
from .game import GameSpec, breiman_kelly, kelly
from .horizon import horizon_win_prob


@dataclass(frozen=True)
class GridPoint:
    f: Fraction
    c: Optional[Fraction]
    objective: Optional[Decimal]  # deadline survival (best_bk only)
    win_prob: Decimal
    exp_duration: Decimal
    exp_duration_given_win: Optional[Decimal]
    qualified: Optional[bool] = None  # kelly_contest only

    def to_payload(self, sig_digits: int = 10) -> dict:
        def dec(v):
            return None if v is None else to_decimal(v, sig_digits)

        return {
            "f": format_rational(self.f),
            "c": None if self.c is None else format_rational(self.c),
            "objective": dec(self.objective),
            "win_prob": dec(self.win_prob),
            "exp_duration": dec(self.exp_duration),
            "exp_duration_given_win": dec(self.exp_duration_given_win),
            "qualified": self.qualified,
        }


@dataclass(frozen=True)
class SearchResult:
    """Winner of a grid search, re-evaluated exactly."""

    best_f: Fraction
    best_c: Optional[Fraction]
    objective: Fraction  # deadline survival (best_bk) or exp duration (kelly_contest)
    win_prob: Fraction
    exp_duration: Fraction
    exp_duration_given_win: Optional[Fraction]
    grid_resolution: Fraction
    evaluations: int
    constraint_met: Optional[bool] = None
    grid: Optional[tuple] = None
    duration_definition: str = "unbounded expected rounds until either exit"

    def to_payload(self, sig_digits: int = 10) -> dict:
        payload = {
            "best_f": format_rational(self.best_f),
            "best_c": None if self.best_c is None else format_rational(self.best_c),
            "objective": format_rational(self.objective),
            "objective_decimal": to_decimal(self.objective, sig_digits),
            "win_prob": format_rational(self.win_prob),
            "win_prob_decimal": to_decimal(self.win_prob, sig_digits),
            "exp_duration": format_rational(self.exp_duration),
            "exp_duration_decimal": to_decimal(self.exp_duration, sig_digits),
            "exp_duration_given_win": None
            if self.exp_duration_given_win is None
            else format_rational(self.exp_duration_given_win),
            "exp_duration_given_win_decimal": None
            if self.exp_duration_given_win is None
            else to_decimal(self.exp_duration_given_win, sig_digits),
            "grid_resolution": format_rational(self.grid_resolution),
            "evaluations": self.evaluations,
            "duration_definition": self.duration_definition,
            "scan_backend": DECIMAL,
            "winner_backend": EXACT,
        }
        if self.constraint_met is not None:
            payload["constraint_met"] = self.constraint_met
        if self.grid is not None:
            payload["grid"] = [pt.to_payload(sig_digits) for pt in self.grid]
        return payload


def f_grid(h: Fraction) -> list:
    """Multiples of h strictly inside (0, 1)."""
    h = Fraction(h)
    if not 0 < h < 1:
        raise DomainError("resolution must satisfy 0 < h < 1")
    out = []
    k = 1
    while k * h < 1:
        out.append(k * h)
        k += 1
    return out


def c_grid(h: Fraction) -> list:
    """Multiples of h in [0, 1], both endpoints always included."""
    h = Fraction(h)
    if not 0 < h < 1:
        raise DomainError("resolution must satisfy 0 < h < 1")
    out = [Fraction(0)]
    k = 1
    while k * h < 1:
        out.append(k * h)
        k += 1
    out.append(Fraction(1))
    return out


def _close(a: Decimal, b: Decimal) -> bool:
    scale = max(abs(a), abs(b))
    return abs(a - b) <= DECIMAL_TIE_TOLERANCE * scale


def best_bk(
    spec: GameSpec,
    capital: int,
    horizon: int,
    resolution: Fraction,
    include_grid: bool = False,
) -> SearchResult:
    """Best Breiman-Kelly pair for exiting with the goal within the deadline.

    Ties on the deadline objective break by smaller unconditional expected
    duration, then smaller f, then larger c.
    """
    if not 1 <= capital <= spec.goal - 1:
        raise DomainError(f"capital {capital} outside [1, {spec.goal - 1}]")
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    fs, cs = f_grid(resolution), c_grid(resolution)

    scanned = []  # (objective, f, c, strategy)
    for f in fs:
        for c in cs:
            strat = breiman_kelly(spec.goal, f, c)
            obj = horizon_win_prob(spec, strat, horizon, mode=DECIMAL)[capital - 1]
            scanned.append((obj, f, c, strat))
    evaluations = len(scanned)

    top = max(entry[0] for entry in scanned)
    tied = [entry for entry in scanned if _close(entry[0], top)]
    if len(tied) > 1:
        with_duration = []
        for obj, f, c, strat in tied:
            report = analyze(spec, strat, mode=DECIMAL)
            with_duration.append((report.exp_duration[capital - 1], obj, f, c, strat))
        best_dur = min(entry[0] for entry in with_duration)
        tied = [
            (obj, f, c, strat)
            for dur, obj, f, c, strat in with_duration
            if _close(dur, best_dur)
        ]
        tied.sort(key=lambda entry: (entry[1], -entry[2]))  # smaller f, larger c
    _, f, c, strat = tied[0]

    # the winner's reported numbers are exact
    exact_obj = horizon_win_prob(spec, strat, horizon, mode=EXACT)[capital - 1]
    report = analyze(spec, strat, mode=EXACT)

    grid = None
    if include_grid:
        grid = tuple(
            GridPoint(
                f=gf,
                c=gc,
                objective=obj,
                win_prob=(rep := analyze(spec, gs, mode=DECIMAL)).win_prob[capital - 1],
                exp_duration=rep.exp_duration[capital - 1],
                exp_duration_given_win=rep.exp_duration_given_win[capital - 1],
            )
            for obj, gf, gc, gs in scanned
        )

    return SearchResult(
        best_f=f,
        best_c=c,
        objective=exact_obj,
        win_prob=report.win_prob[capital - 1],
        exp_duration=report.exp_duration[capital - 1],
        exp_duration_given_win=report.exp_duration_given_win[capital - 1],
        grid_resolution=Fraction(resolution),
        evaluations=evaluations,
        grid=grid,
    )


def kelly_contest(
    spec: GameSpec,
    capital: int,
    resolution: Fraction,
    conf: Fraction,
    include_grid: bool = False,
) -> SearchResult:
    """Fastest-exit Kelly fraction subject to win probability >= conf.

    Among fractions meeting the floor, minimize the unconditional expected
    duration; ties break by smaller f.  If nothing qualifies, the result is
    the max-win-probability fraction flagged constraint_met=False.
    """
    if not 1 <= capital <= spec.goal - 1:
        raise DomainError(f"capital {capital} outside [1, {spec.goal - 1}]")
    conf = Fraction(conf)
    if not 0 < conf < 1:
        raise DomainError("confidence level must satisfy 0 < conf < 1")
    fs = f_grid(resolution)
    conf_dec = Decimal(conf.numerator) / Decimal(conf.denominator)

    rows = []
    for f in fs:
        strat = kelly(spec.goal, f)
        rep = analyze(spec, strat, mode=DECIMAL)
        w = rep.win_prob[capital - 1]
        qualified = w >= conf_dec or _close(w, conf_dec)
        rows.append((f, strat, rep, qualified))

    qualifying = [row for row in rows if row[3]]
    if qualifying:
        best_dur = min(row[2].exp_duration[capital - 1] for row in qualifying)
        tied = [
            row
            for row in qualifying
            if _close(row[2].exp_duration[capital - 1], best_dur)
        ]
        tied.sort(key=lambda row: row[0])  # smaller f
        f, strat, _, _ = tied[0]
        constraint_met = True
    else:
        f, strat, _, _ = max(rows, key=lambda row: (row[2].win_prob[capital - 1], -row[0]))
        constraint_met = False

    report = analyze(spec, strat, mode=EXACT)
    if constraint_met and report.win_prob[capital - 1] < conf:
        # decimal scan sat exactly on the boundary and exact arithmetic
        # disagrees: redo the qualification exactly
        exact_rows = []
        for gf in fs:
            gs = kelly(spec.goal, gf)
            grep = analyze(spec, gs, mode=EXACT)
            if grep.win_prob[capital - 1] >= conf:
                exact_rows.append((grep.exp_duration[capital - 1], gf, gs, grep))
        if exact_rows:
            exact_rows.sort(key=lambda row: (row[0], row[1]))
            _, f, strat, report = exact_rows[0]
        else:
            constraint_met = False
            f, strat, _, _ = max(
                rows, key=lambda row: (row[2].win_prob[capital - 1], -row[0])
            )
            report = analyze(spec, strat, mode=EXACT)

    grid = None
    if include_grid:
        grid = tuple(
            GridPoint(
                f=gf,
                c=None,
                objective=None,
                win_prob=rep.win_prob[capital - 1],
                exp_duration=rep.exp_duration[capital - 1],
                exp_duration_given_win=rep.exp_duration_given_win[capital - 1],
                qualified=qualified,
            )
            for gf, _, rep, qualified in rows
        )

    return SearchResult(
        best_f=f,
        best_c=None,
        objective=report.exp_duration[capital - 1],
        win_prob=report.win_prob[capital - 1],
        exp_duration=report.exp_duration[capital - 1],
        exp_duration_given_win=report.exp_duration_given_win[capital - 1],
        grid_resolution=Fraction(resolution),
        evaluations=len(rows),
        constraint_met=constraint_met,
        grid=grid,
    )


def grid_csv_rows(result: SearchResult, sig_digits: int = 10) -> list:
    """Grid table rows for CSV export: how a user explores c0(f)."""
    if result.grid is None:
        raise DomainError("search was run without include_grid")
    header = [
        "f",
        "c",
        "objective",
        "win_prob",
        "exp_duration",
        "exp_duration_given_win",
        "qualified",
    ]
    rows = [header]
    for pt in result.grid:
        payload = pt.to_payload(sig_digits)
        rows.append([payload[k] if payload[k] is not None else "" for k in header])
    return rows
