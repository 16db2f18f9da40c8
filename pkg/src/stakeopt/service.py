"""HTTP facade for live advisory sessions and the analysis endpoints.

A session tracks one player against a deadline: capital, rounds left, and
the recommended stake (the deadline DP's largest maximizing stake) with its
survival probability.  Outcomes are reported round by round; the service
never trusts the client with probability math.

Endpoints (JSON, rationals as "a/b" strings with 10-digit decimal mirrors):

    POST /api/session                 create; returns the session view
    GET  /api/session/{id}            current view
    POST /api/session/{id}/outcome    {"result": "win"|"lose", "stake": opt}
    GET  /api/session/{id}/options    survival per admissible stake
    POST /api/analyze                 mirror of the CLI analyze command
    POST /api/search/bk               mirror of search-bk
    POST /api/kelly-contest           mirror of kelly-contest
    POST /api/simulate                mirror of simulate
    GET  /api/health

Sessions live in memory; with a snapshot path every mutation writes a JSON
snapshot and a restart restores it.  DP tables are cached per (p, goal) and
grown, never rebuilt, when a longer deadline shows up.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from fractions import Fraction
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import chain, search, simulate
from .errors import DomainError
from .exact import (
    DECIMAL_TIE_TOLERANCE,
    EXACT,
    format_rational,
    parse_rational,
    to_decimal,
    to_number,
)
from .game import GameSpec, Strategy, load_strategy, named_strategy
from .horizon import AUTO, HorizonTable, build_table

SIG_DIGITS = 10


def _render_value(v) -> str:
    return format_rational(v) if isinstance(v, Fraction) else to_decimal(v, 40)


class TableCache:
    """One DP table per (p, goal), extended in place as deadlines grow."""

    def __init__(self):
        self._tables = {}
        self._lock = threading.Lock()

    def get(self, spec: GameSpec, horizon: int) -> HorizonTable:
        key = (spec.p, spec.goal)
        with self._lock:
            table = self._tables.get(key)
            if table is None or table.horizon < horizon:
                table = (
                    build_table(spec, horizon, mode=AUTO)
                    if table is None
                    else table.extended(horizon)
                )
                self._tables[key] = table
            return table


class Session:
    def __init__(self, spec: GameSpec, horizon: int, capital: int,
                 session_id: Optional[str] = None, rounds_played: int = 0,
                 history: Optional[list] = None):
        self.id = session_id or uuid.uuid4().hex
        self.spec = spec
        self.horizon = horizon
        self.capital = capital
        self.rounds_played = rounds_played
        self.history = history or []
        self.lock = threading.Lock()

    @property
    def remaining(self) -> int:
        return self.horizon - self.rounds_played

    @property
    def status(self) -> str:
        if self.capital >= self.spec.goal:
            return "winner"
        if self.capital <= 0:
            return "loser"
        if self.remaining <= 0:
            return "deadline"
        return "active"

    def to_state(self) -> dict:
        return {
            "id": self.id,
            "p": format_rational(self.spec.p),
            "N": self.spec.goal,
            "T": self.horizon,
            "capital": self.capital,
            "rounds_played": self.rounds_played,
            "history": self.history,
        }

    @classmethod
    def from_state(cls, state: dict) -> "Session":
        return cls(
            spec=GameSpec(parse_rational(state["p"]), int(state["N"])),
            horizon=int(state["T"]),
            capital=int(state["capital"]),
            session_id=state["id"],
            rounds_played=int(state["rounds_played"]),
            history=list(state["history"]),
        )


class SessionStore:
    def __init__(self, snapshot_path: Optional[str] = None):
        self._sessions = {}
        self._lock = threading.Lock()
        self.snapshot_path = snapshot_path
        if snapshot_path and os.path.exists(snapshot_path):
            with open(snapshot_path) as fh:
                data = json.load(fh)
            for state in data.get("sessions", []):
                session = Session.from_state(state)
                self._sessions[session.id] = session

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session
        self.persist()

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id}")
        return session

    def persist(self) -> None:
        if not self.snapshot_path:
            return
        with self._lock:
            data = {"sessions": [s.to_state() for s in self._sessions.values()]}
        directory = os.path.dirname(os.path.abspath(self.snapshot_path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, self.snapshot_path)


class CreateSessionRequest(BaseModel):
    p: str
    N: int
    T: int
    capital: int


class OutcomeRequest(BaseModel):
    result: str
    stake: Optional[int] = None


class AnalyzeRequest(BaseModel):
    p: str
    N: int
    strategy: object  # name string or {N, p, stakes} payload
    measure: str = "winprob"
    series: Optional[int] = None
    normalized: bool = False


class SearchBKRequest(BaseModel):
    p: str
    N: int
    capital: int
    T: int
    resolution: str
    include_grid: bool = False


class KellyContestRequest(BaseModel):
    p: str
    N: int
    capital: int
    resolution: str
    conf: str
    include_grid: bool = False


class SimulateRequest(BaseModel):
    p: str
    N: int
    capital: int
    strategy: object = None  # name string or payload; None with optimal=True
    optimal: bool = False
    T: Optional[int] = None
    games: int = 1
    seed: int = 0
    workers: int = 1


def _bad(field: str, message: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"field": field, "message": message})


def _parse_spec(p: str, goal: int) -> GameSpec:
    try:
        prob = parse_rational(p)
    except DomainError as exc:
        raise _bad("p", str(exc))
    try:
        return GameSpec(prob, goal)
    except DomainError as exc:
        field = "p" if "probability" in str(exc) else "N"
        raise _bad(field, str(exc))


def _resolve_strategy(spec: GameSpec, raw) -> Strategy:
    try:
        if isinstance(raw, str):
            return named_strategy(spec, raw)
        if isinstance(raw, dict):
            file_spec, strategy = load_strategy(raw)
            if file_spec != spec:
                raise DomainError("strategy payload disagrees with p/N")
            return strategy
    except DomainError as exc:
        raise _bad("strategy", str(exc))
    raise _bad("strategy", "want a family name or a {N, p, stakes} object")


def create_app(snapshot_path: Optional[str] = None, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="stakeopt advisor", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(snapshot_path)
    tables = TableCache()
    app.state.store = store
    app.state.tables = tables

    def session_view(session: Session) -> dict:
        view = {
            "id": session.id,
            "p": format_rational(session.spec.p),
            "N": session.spec.goal,
            "T": session.horizon,
            "capital": session.capital,
            "rounds_played": session.rounds_played,
            "remaining": session.remaining,
            "status": session.status,
            "history": list(session.history),
            "recommended_stake": None,
            "survival": None,
            "survival_decimal": None,
        }
        if session.spec.p < Fraction(1, 2):
            view["warning"] = "p < 1/2: the casino has the edge; deadline play is still defined"
        status = session.status
        if status == "active":
            table = tables.get(session.spec, session.remaining)
            value = table.value(session.capital, session.remaining)
            view["recommended_stake"] = table.stake(session.capital, session.remaining)
            view["survival"] = _render_value(value)
            view["survival_decimal"] = to_decimal(value, SIG_DIGITS)
        else:
            certain = Fraction(1) if status == "winner" else Fraction(0)
            view["survival"] = format_rational(certain)
            view["survival_decimal"] = to_decimal(certain, SIG_DIGITS)
        return view

    @app.get("/api/health")
    def health():
        return {"status": "ok", "service": "stakeopt", "version": "0.1.0"}

    @app.post("/api/session", status_code=201)
    def create_session(req: CreateSessionRequest):
        spec = _parse_spec(req.p, req.N)
        if req.T < 1:
            raise _bad("T", "horizon must be >= 1")
        if not 1 <= req.capital <= spec.goal - 1:
            raise _bad("capital", f"capital must be in [1, {spec.goal - 1}]")
        session = Session(spec, req.T, req.capital)
        store.add(session)
        return session_view(session)

    @app.get("/api/session/{session_id}")
    def get_session(session_id: str):
        return session_view(store.get(session_id))

    @app.post("/api/session/{session_id}/outcome")
    def record_outcome(session_id: str, req: OutcomeRequest):
        session = store.get(session_id)
        if req.result not in ("win", "lose"):
            raise _bad("result", 'result must be "win" or "lose"')
        with session.lock:
            if session.status != "active":
                raise HTTPException(
                    status_code=409,
                    detail=f"session is terminal ({session.status})",
                )
            table = tables.get(session.spec, session.remaining)
            recommended = table.stake(session.capital, session.remaining)
            stake = req.stake if req.stake is not None else recommended
            bound = session.spec.stake_bound(session.capital)
            if not 1 <= stake <= bound:
                raise _bad("stake", f"stake must be in [1, {bound}]")
            won = req.result == "win"
            before = session.capital
            session.capital += stake if won else -stake
            session.rounds_played += 1
            session.history.append(
                {
                    "round": session.rounds_played,
                    "capital_before": before,
                    "stake": stake,
                    "result": req.result,
                    "capital_after": session.capital,
                }
            )
        store.persist()
        return session_view(session)

    @app.get("/api/session/{session_id}/options")
    def stake_options(session_id: str):
        session = store.get(session_id)
        if session.status != "active":
            raise HTTPException(
                status_code=409, detail=f"session is terminal ({session.status})"
            )
        table = tables.get(session.spec, session.remaining)
        i, remaining = session.capital, session.remaining
        p = to_number(session.spec.p, table.mode)
        q = to_number(session.spec.q, table.mode)
        entries = []
        values = []
        for x in range(1, session.spec.stake_bound(i) + 1):
            value = q * table.value(i - x, remaining - 1) + p * table.value(
                i + x, remaining - 1
            )
            values.append(value)
            entries.append(
                {
                    "stake": x,
                    "survival": _render_value(value),
                    "survival_decimal": to_decimal(value, SIG_DIGITS),
                }
            )
        top = max(values)
        for entry, value in zip(entries, values):
            if table.mode == EXACT:
                entry["optimal"] = value == top
            else:
                entry["optimal"] = abs(top - value) <= DECIMAL_TIE_TOLERANCE * top
        return {
            "id": session.id,
            "capital": i,
            "remaining": remaining,
            "options": entries,
            "recommended_stake": table.stake(i, remaining),
        }

    @app.post("/api/analyze")
    def analyze_endpoint(req: AnalyzeRequest):
        spec = _parse_spec(req.p, req.N)
        strategy = _resolve_strategy(spec, req.strategy)
        if req.measure in ("pgf", "pgfw"):
            if req.measure == "pgf":
                pgfs = chain.duration_pgf(spec, strategy)
            else:
                pgfs = chain.duration_pgf_win(spec, strategy, normalized=req.normalized)
            return {
                "p": format_rational(spec.p),
                "N": spec.goal,
                "measure": req.measure,
                "normalized": req.normalized,
                "strategy": strategy.to_payload(spec),
                "pgfs": chain.render_pgfs(pgfs, series=req.series),
            }
        if req.measure not in ("winprob", "ed", "edw"):
            raise _bad("measure", "want winprob|ed|edw|pgf|pgfw")
        report = chain.analyze(spec, strategy, mode=EXACT)
        values = {
            "winprob": report.win_prob,
            "ed": report.exp_duration,
            "edw": report.exp_duration_given_win,
        }[req.measure]
        return {
            "p": format_rational(spec.p),
            "N": spec.goal,
            "measure": req.measure,
            "strategy": strategy.to_payload(spec),
            "values": [None if v is None else format_rational(v) for v in values],
            "decimals": [None if v is None else to_decimal(v, SIG_DIGITS) for v in values],
        }

    @app.post("/api/search/bk")
    def search_bk_endpoint(req: SearchBKRequest):
        spec = _parse_spec(req.p, req.N)
        try:
            result = search.best_bk(
                spec, req.capital, req.T, parse_rational(req.resolution),
                include_grid=req.include_grid,
            )
        except DomainError as exc:
            raise _bad("search", str(exc))
        return result.to_payload(SIG_DIGITS)

    @app.post("/api/kelly-contest")
    def kelly_contest_endpoint(req: KellyContestRequest):
        spec = _parse_spec(req.p, req.N)
        try:
            result = search.kelly_contest(
                spec, req.capital, parse_rational(req.resolution),
                parse_rational(req.conf), include_grid=req.include_grid,
            )
        except DomainError as exc:
            raise _bad("search", str(exc))
        return result.to_payload(SIG_DIGITS)

    @app.post("/api/simulate")
    def simulate_endpoint(req: SimulateRequest):
        spec = _parse_spec(req.p, req.N)
        try:
            if req.optimal:
                if req.T is None:
                    raise DomainError("optimal play needs T")
                policy = simulate.optimal_policy(spec, req.T)
            else:
                policy = simulate.fixed_policy(_resolve_strategy(spec, req.strategy))
            summary = simulate.monte_carlo(
                spec, policy, req.capital,
                rounds_limit=req.T, games=req.games, seed=req.seed,
                workers=req.workers,
            )
        except DomainError as exc:
            raise _bad("simulate", str(exc))
        return summary.to_payload()

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def run(host: str = "127.0.0.1", port: int = 8080,
        snapshot_path: Optional[str] = None, ui_dir: Optional[str] = None) -> None:
    import uvicorn

    uvicorn.run(create_app(snapshot_path, ui_dir), host=host, port=port)
