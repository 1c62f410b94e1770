"""Game runner, gambler zoo, and transcript handling.

Transcripts are reproducible: the seeded gamblers draw from a fixed
xorshift64* stream, so the same flags give byte-identical output on every
platform.  The per-round export format is JSON lines with records
{t, r, q, s, L, H}; floats carry 17 significant digits and round-trip
exactly, which lets `replay_transcript` demand bit-equality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import serialize
from .engine import BookmakerEngine

_MASK64 = (1 << 64) - 1


class XorShift64Star:
    """Small, portable RNG (xorshift64*); stable across platforms."""

    def __init__(self, seed: int):
        self._x = (seed ^ 0x9E3779B97F4A7C15) & _MASK64
        if self._x == 0:
            self._x = 0x2545F4914F6CDD1D

    def next_u64(self) -> int:
        x = self._x
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self._x = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def uniform(self) -> float:
        """In [0, 1)."""
        return self.next_u64() / 2.0 ** 64

    def below(self, n: int) -> int:
        return self.next_u64() % n


GAMBLER_KINDS = (
    "decisive-fixed",
    "decisive-seeded",
    "decisive-last-max",
    "uniform",
    "proportional",
    "scripted",
    "random-seeded",
)

# bet(t, odds, payouts) -> simplex vector
Gambler = Callable[[int, list[float], list[float]], list[float]]


@dataclass(frozen=True)
class GamblerSpec:
    kind: str
    outcome: int = 0
    bets: tuple = ()

    @staticmethod
    def parse(text: str) -> "GamblerSpec":
        """E.g. 'uniform', 'decisive-fixed:2' (1-based outcome index)."""
        kind, _, arg = text.partition(":")
        if kind not in GAMBLER_KINDS:
            raise ValueError(f"unknown gambler kind {kind!r} (choose from {', '.join(GAMBLER_KINDS)})")
        if kind == "decisive-fixed":
            return GamblerSpec(kind, outcome=int(arg) - 1 if arg else 0)
        return GamblerSpec(kind)


def make_gambler(spec: GamblerSpec, K: int, seed: int = 0) -> Gambler:
    rng = XorShift64Star(seed)

    def basis(k: int) -> list[float]:
        q = [0.0] * K
        q[k] = 1.0
        return q

    if spec.kind == "decisive-fixed":
        if not 0 <= spec.outcome < K:
            raise ValueError("fixed outcome out of range")
        return lambda t, odds, payouts: basis(spec.outcome)
    if spec.kind == "decisive-seeded":
        return lambda t, odds, payouts: basis(rng.below(K))
    if spec.kind == "decisive-last-max":
        return lambda t, odds, payouts: basis(max(range(K), key=lambda k: (payouts[k], -k)))
    if spec.kind == "uniform":
        return lambda t, odds, payouts: [1.0 / K] * K
    if spec.kind == "proportional":

        def proportional(t, odds, payouts):
            w = [p + 1.0 for p in payouts]
            total = math.fsum(w)
            return [x / total for x in w]

        return proportional
    if spec.kind == "scripted":
        bets = [list(map(float, b)) for b in spec.bets]

        def scripted(t, odds, payouts):
            if t > len(bets):
                raise ValueError("script ran out of bets")
            return bets[t - 1]

        return scripted
    if spec.kind == "random-seeded":

        def random_point(t, odds, payouts):
            # exponential weights normalize to a uniform simplex draw
            w = [-math.log(1.0 - rng.uniform()) for _ in range(K)]
            total = math.fsum(w)
            return [x / total for x in w]

        return random_point
    raise ValueError(f"unknown gambler kind {spec.kind!r}")


@dataclass
class Round:
    t: int
    odds: list[float]
    bet: list[float]
    state_after: list[float]
    loss_after: float
    rounds_left: int


@dataclass
class Transcript:
    n_outcomes: int
    total_rounds: int
    gamma: float
    mode: str
    seed: int
    gambler: str
    rounds: list[Round] = field(default_factory=list)
    payouts: list[float] = field(default_factory=list)


def run_game(
    K: int,
    T: int,
    gambler: GamblerSpec | Gambler,
    mode: str = "exact",
    gamma: float = 1.0,
    seed: int = 0,
    epsilon: float | None = None,
) -> Transcript:
    """Play one full game and record every round plus final payouts."""
    kind = gambler.kind if isinstance(gambler, GamblerSpec) else getattr(gambler, "__name__", "custom")
    bet_fn = make_gambler(gambler, K, seed) if isinstance(gambler, GamblerSpec) else gambler
    engine = BookmakerEngine(K, T, mode, epsilon=epsilon)
    tr = Transcript(K, T, gamma, mode, seed, kind)
    payouts = [0.0] * K
    odds = engine.quote_first()
    for t in range(1, T + 1):
        q = bet_fn(t, list(odds), list(payouts))
        next_odds = engine.observe_and_quote(q) if t < T else None
        if next_odds is None:
            engine.observe_final(q)
        for k in range(K):
            payouts[k] += q[k] / odds[k]
        tr.rounds.append(Round(t, list(odds), list(q), list(engine.s), engine.L, T - t))
        if next_odds is not None:
            odds = next_odds
    tr.payouts = payouts
    return tr


def realized_loss(tr: Transcript) -> float:
    """Worst per-outcome payout actually accumulated."""
    return max(tr.payouts)


def bookmaker_profit(tr: Transcript) -> float:
    """T collected stakes minus the realized loss deflated by the overround."""
    return tr.total_rounds - realized_loss(tr) / tr.gamma


def recompute_payouts(tr: Transcript) -> list[float]:
    """Re-derive per-outcome payouts from the recorded rounds."""
    totals = [0.0] * tr.n_outcomes
    for rnd in tr.rounds:
        for k in range(tr.n_outcomes):
            totals[k] += rnd.bet[k] / rnd.odds[k]
    return totals


def transcript_jsonl(tr: Transcript) -> str:
    """One JSON record per round: {t, r, q, s, L, H}."""
    lines = []
    for rnd in tr.rounds:
        lines.append(
            serialize.dumps(
                {
                    "t": rnd.t,
                    "r": rnd.odds,
                    "q": rnd.bet,
                    "s": rnd.state_after,
                    "L": rnd.loss_after,
                    "H": rnd.rounds_left,
                }
            )
        )
    return "\n".join(lines) + "\n"


def replay_transcript(text: str, mode: str = "exact", epsilon: float | None = None) -> list[str]:
    """Re-run a JSONL transcript through a fresh engine; return mismatches.

    The engine is deterministic, so odds, states and losses must reproduce
    bit-for-bit; an empty list means the transcript verifies.
    """
    import json

    records = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not records:
        return ["empty transcript"]
    K = len(records[0]["r"])
    T = len(records)
    engine = BookmakerEngine(K, T, mode, epsilon=epsilon)
    odds = engine.quote_first()
    problems: list[str] = []
    for i, rec in enumerate(records):
        t = i + 1
        if rec.get("t") != t:
            problems.append(f"line {i}: round index {rec.get('t')} != {t}")
        if list(map(float, rec["r"])) != odds:
            problems.append(f"round {t}: odds mismatch")
        q = list(map(float, rec["q"]))
        next_odds = engine.observe_and_quote(q) if t < T else None
        if next_odds is None:
            engine.observe_final(q)
        if list(map(float, rec["s"])) != engine.s:
            problems.append(f"round {t}: state mismatch")
        if float(rec["L"]) != engine.L:
            problems.append(f"round {t}: loss mismatch")
        if rec.get("H") != T - t:
            problems.append(f"round {t}: horizon mismatch")
        if next_odds is not None:
            odds = next_odds
    return problems


def csv_summary(transcripts: Sequence[Transcript]) -> str:
    """One row per game: seed, kind, realized_loss, profit."""
    rows = ["seed,kind,realized_loss,profit"]
    for tr in transcripts:
        rows.append(
            f"{tr.seed},{tr.gambler},{serialize.fmt17(realized_loss(tr))},{serialize.fmt17(bookmaker_profit(tr))}"
        )
    return "\n".join(rows) + "\n"
