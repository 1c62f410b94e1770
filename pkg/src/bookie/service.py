"""JSON-over-HTTP game service.

Sessions live in memory with TTL eviction; a game is cheap to replay from
its transcript, so nothing is persisted (an optional audit log appends one
JSON line per accepted bet).  All numeric fields are serialized with 17
significant digits through the package's deterministic writer, so replaying
the same bets into a new session reproduces every response byte-for-byte.

Concurrent bets on one session are serialized by a non-blocking per-session
lock: one request wins, the rest get 409 and may retry.
"""
from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import Response

from . import serialize
from .engine import BookmakerEngine, InfeasibleState, InvalidBet, apply_overround, validate_bet
from .loss_poly import NoRealRootInBracket

MAX_OUTCOMES = 64
MAX_ROUNDS = 10 ** 6
DEFAULT_TTL_SECONDS = 24 * 3600.0


@dataclass
class Session:
    sid: str
    engine: BookmakerEngine
    gamma: float
    created_at: float
    payouts: list[float]
    history: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, engine: BookmakerEngine, gamma: float) -> Session:
        sess = Session(
            sid=uuid.uuid4().hex,
            engine=engine,
            gamma=gamma,
            created_at=time.monotonic(),
            payouts=[0.0] * engine.K,
        )
        with self._lock:
            self._evict(time.monotonic())
            self._sessions[sess.sid] = sess
        return sess

    def get(self, sid: str) -> Session | None:
        with self._lock:
            self._evict(time.monotonic())
            return self._sessions.get(sid)

    def _evict(self, now: float) -> None:
        stale = [k for k, s in self._sessions.items() if now - s.created_at > self.ttl]
        for k in stale:
            del self._sessions[k]


def _json(payload: Any, status: int = 200) -> Response:
    return Response(serialize.dumps(payload), status_code=status, media_type="application/json")


def _error(status: int, error: str, detail: str) -> Response:
    return _json({"error": error, "detail": detail}, status)


def create_app(
    cors: bool = False,
    transcript_path: str | None = None,
    session_ttl: float = DEFAULT_TTL_SECONDS,
) -> FastAPI:
    app = FastAPI(title="bookie", docs_url=None, redoc_url=None)
    store = SessionStore(session_ttl)
    app.state.store = store
    log_lock = threading.Lock()

    if cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def audit(record: dict) -> None:
        if transcript_path:
            with log_lock, open(transcript_path, "a", encoding="utf-8") as fh:
                fh.write(serialize.dumps(record) + "\n")

    @app.get("/healthz")
    def healthz() -> Response:
        return _json({"status": "ok"})

    @app.post("/games")
    async def new_game(request: Request) -> Response:
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "body must be a JSON object")
        K, T = body.get("K"), body.get("T")
        if not isinstance(K, int) or not 1 <= K <= MAX_OUTCOMES:
            return _error(400, "bad_request", f"K must be an integer in [1, {MAX_OUTCOMES}]")
        if not isinstance(T, int) or not 1 <= T <= MAX_ROUNDS:
            return _error(400, "bad_request", f"T must be an integer in [1, {MAX_ROUNDS}]")
        gamma = body.get("gamma", 1.0)
        if not isinstance(gamma, (int, float)) or gamma < 1.0:
            return _error(400, "bad_request", "gamma must be a number >= 1")
        mode = body.get("mode", "exact")
        if mode not in ("exact", "epsilon"):
            return _error(400, "bad_request", "mode must be 'exact' or 'epsilon'")
        epsilon = body.get("epsilon")
        if epsilon is not None and (not isinstance(epsilon, (int, float)) or epsilon <= 0):
            return _error(400, "bad_request", "epsilon must be a positive number")
        engine = BookmakerEngine(K, T, mode, epsilon=epsilon)
        r1 = engine.quote_first()
        sess = store.create(engine, float(gamma))
        return _json({"id": sess.sid, "r1": r1, "L": engine.L, "T": T, "K": K}, 201)

    @app.post("/games/{sid}/bets")
    async def place_bet(sid: str, request: Request) -> Response:
        sess = store.get(sid)
        if sess is None:
            return _error(404, "not_found", "unknown game id")
        try:
            body = await request.json()
        except Exception:
            return _error(422, "invalid_bet", "body must be a JSON object with a 'q' array")
        q = body.get("q") if isinstance(body, dict) else None
        if not isinstance(q, list):
            return _error(422, "invalid_bet", "field 'q' must be an array")
        if not sess.lock.acquire(blocking=False):
            return _error(409, "conflict", "another bet is in flight; retry")
        try:
            engine = sess.engine
            if engine.done:
                return _error(409, "game_over", "all rounds have been played")
            t = len(sess.history) + 1
            odds = engine.last_odds
            try:
                if t < engine.T:
                    r_next = engine.observe_and_quote(q)
                else:
                    engine.observe_final(q)
                    r_next = None
            except InvalidBet as exc:
                return _error(422, "invalid_bet", str(exc))
            except (NoRealRootInBracket, InfeasibleState) as exc:
                return _error(409, "infeasible", str(exc))
            qn = validate_bet(q, engine.K)  # same normalization the engine applied
            for k in range(engine.K):
                sess.payouts[k] += qn[k] / odds[k]
            horizon_left = engine.T - t
            record = {
                "t": t,
                "r": odds,
                "q": [float(x) for x in q],  # raw bet: replays renormalize identically
                "s": engine.s,
                "L": engine.L,
                "H": horizon_left,
            }
            sess.history.append(record)
            audit({"game": sess.sid, **record})
            resp: dict[str, Any] = {}
            if r_next is not None:
                resp["r_next"] = r_next
                resp["gamma_odds"] = apply_overround(r_next, sess.gamma)
            resp["s"] = engine.s
            resp["L"] = engine.L
            resp["v"] = engine.residual_vector()
            resp["H"] = horizon_left
            resp["done"] = r_next is None
            if r_next is None:
                realized = max(sess.payouts)
                resp["realized_loss"] = realized
                resp["profit"] = engine.T - realized / sess.gamma
            return _json(resp)
        finally:
            sess.lock.release()

    @app.get("/games/{sid}")
    def game_state(sid: str) -> Response:
        sess = store.get(sid)
        if sess is None:
            return _error(404, "not_found", "unknown game id")
        engine = sess.engine
        return _json(
            {
                "id": sess.sid,
                "K": engine.K,
                "T": engine.T,
                "gamma": sess.gamma,
                "mode": engine.mode,
                "t": engine.t,
                "done": engine.done,
                "r": engine.last_odds,
                "s": engine.s,
                "L": engine.L,
                "v": engine.residual_vector(),
                "payouts": sess.payouts,
                "history": sess.history,
            }
        )

    return app
