"""Forward odds-setting engine for worst-case optimal bookmaking.

The engine keeps a committed-payout vector s and a water level L, the total
loss it is currently on the hook for.  Round by round:

  * the first quote is always uniform;
  * after each bet the state is updated by q / r (element-wise);
  * a decisive bet (all mass on one outcome) is optimal play by the gambler,
    so the water level stays put and the residual vector v = L*1 - s simply
    shifts;
  * a split bet is suboptimal, and the engine lowers L to the largest real
    root of the loss polynomial for the new state and remaining horizon;
  * the next odds are proportional, per outcome k, to the residual
    polynomial of the reduced vector, r(k) ~ D_{H-1}(v minus k), which
    already sums to the right normalizer.

Each round costs O(K^2): one partial-ESP matrix plus (on split bets) one
root extraction.  In "epsilon" mode the exact root call is replaced by an
epsilon-precision oracle on an epsilon-inflated state; the realized loss
then exceeds the exact engine's by at most 2*T*epsilon.  Note that in
epsilon mode the internal s carries those inflations, so it is not the raw
payout ledger (simulations account payouts from the transcript instead).

One engine == one game.  Mutating calls must not be interleaved from
multiple threads; distinct engines are fully independent.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .combinatorics import esp_partial_matrix
from .loss_poly import (
    NoRealRootInBracket,
    _float_path_safe,
    opportunistic_loss,
    opportunistic_loss_upper,
    optimal_loss,
)

DECISIVE_TOL = 1e-9
BET_SUM_TOL = 1e-9


class InvalidBet(ValueError):
    """Bet vector is not a probability distribution over the K outcomes."""


class GameOver(RuntimeError):
    """All T rounds have been played."""


class OutOfOrder(RuntimeError):
    """Protocol violation: quote/observe called in the wrong sequence."""


class InfeasibleState(RuntimeError):
    """The loss is infinite (no real root); unreachable in a normal game."""


def validate_bet(q: Sequence[float], n_outcomes: int) -> list[float]:
    """Check simplex membership (sum within 1e-9) and renormalize exactly."""
    if len(q) != n_outcomes:
        raise InvalidBet(f"bet has {len(q)} entries, expected {n_outcomes}")
    vec = [float(x) for x in q]
    if any(math.isnan(x) or x < 0 for x in vec):
        raise InvalidBet("bet entries must be non-negative")
    total = math.fsum(vec)
    if abs(total - 1.0) > BET_SUM_TOL:
        raise InvalidBet(f"bet entries sum to {total!r}, not 1")
    return [x / total for x in vec]


def is_decisive(q: Sequence[float]) -> bool:
    """All mass on one outcome, up to 1e-9 of slack."""
    return max(q) >= 1.0 - DECISIVE_TOL


class BookmakerEngine:
    """Plays one game of `total_rounds` rounds over `n_outcomes` outcomes.

    `mode` is "exact" (default) or "epsilon"; epsilon defaults to 1/T.
    A non-zero `start_state` opens the game mid-flight from committed
    payouts, with `total_rounds` then read as the remaining horizon.
    """

    def __init__(
        self,
        n_outcomes: int,
        total_rounds: int,
        mode: str = "exact",
        *,
        epsilon: float | None = None,
        tol: float = 1e-10,
        start_state: Sequence[float] | None = None,
    ):
        if n_outcomes < 1 or total_rounds < 1:
            raise ValueError("need at least one outcome and one round")
        if mode not in ("exact", "epsilon"):
            raise ValueError(f"unknown mode {mode!r}")
        self.K = n_outcomes
        self.T = total_rounds
        self.mode = mode
        self.tol = tol
        self.epsilon = float(epsilon) if epsilon is not None else 1.0 / total_rounds
        if self.mode == "epsilon" and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

        s = [0.0] * n_outcomes if start_state is None else [float(x) for x in start_state]
        if len(s) != n_outcomes:
            raise ValueError("start_state length must equal n_outcomes")
        if mode == "epsilon":
            s = [x + self.epsilon for x in s]
            self.L = self._oracle_root(self.T, s)
        elif any(s):
            self.L = opportunistic_loss(self.T, s, tol)
        else:
            self.L = optimal_loss(self.T, self.K)
        self.s = s
        self.t = 1  # round whose odds are (or will be) in force
        self.last_odds: list[float] | None = None

    # -- protocol ----------------------------------------------------------

    @property
    def done(self) -> bool:
        return self.t > self.T

    def quote_first(self) -> list[float]:
        """Uniform odds for round 1."""
        if self.t != 1:
            raise OutOfOrder("first quote only valid at round 1")
        self.last_odds = [1.0 / self.K] * self.K
        return list(self.last_odds)

    def observe_and_quote(self, q: Sequence[float]) -> list[float]:
        """Consume the bet for the current round and quote the next round."""
        if self.done:
            raise GameOver("game already finished")
        if self.last_odds is None:
            raise OutOfOrder("quote_first before observing bets")
        if self.t >= self.T:
            raise GameOver("no rounds left to quote")
        q = validate_bet(q, self.K)
        self._absorb(q)
        self.t += 1
        horizon = self.T - self.t + 1
        if not is_decisive(q):
            if self.mode == "epsilon":
                self.s = [x + self.epsilon for x in self.s]
                self.L = self._oracle_root(horizon, self.s)
            else:
                self.L = opportunistic_loss(horizon, self.s, self.tol)
        odds = self._odds_from_residual(self.residual_vector(), horizon)
        self.last_odds = odds
        return list(odds)

    def observe_final(self, q: Sequence[float]) -> None:
        """Record the last round's bet; no further odds are quoted."""
        if self.done:
            raise GameOver("game already finished")
        if self.last_odds is None:
            raise OutOfOrder("quote_first before observing bets")
        if self.t != self.T:
            raise OutOfOrder("final bet only valid at the last round")
        q = validate_bet(q, self.K)
        self._absorb(q)
        self.t += 1
        self.last_odds = None

    def residual_vector(self) -> list[float]:
        """v = L*1 - s, the payouts still to come under optimal play."""
        return [self.L - x for x in self.s]

    def clone(self) -> "BookmakerEngine":
        """Independent copy of the live game state."""
        twin = object.__new__(BookmakerEngine)
        twin.__dict__.update(self.__dict__)
        twin.s = list(self.s)
        twin.last_odds = list(self.last_odds) if self.last_odds else self.last_odds
        return twin

    # -- internals ----------------------------------------------------------

    def _absorb(self, q: list[float]) -> None:
        r = self.last_odds
        self.s = [self.s[k] + q[k] / r[k] for k in range(self.K)]

    def _oracle_root(self, horizon: int, s: Sequence[float]) -> float:
        # one-sided oracle: within epsilon above the root, never below
        try:
            return opportunistic_loss_upper(horizon, s, self.epsilon)
        except NoRealRootInBracket:
            raise InfeasibleState("loss polynomial has no real root (infinite loss)")

    def _odds_from_residual(self, v: list[float], horizon: int) -> list[float]:
        """r(k) ~ D_{horizon-1}(v minus k), evaluated on a rescaled copy.

        Dividing v by its max keeps every ESP below 2^K and turns the
        falling-factorial weights into products of ratios <= 1, so the
        ratios r(k) are computed without overflow at any horizon.  Long
        horizons at high K cancel past double precision, in which case the
        numerators are recomputed in exact rational arithmetic.
        """
        K = self.K
        if K == 1:
            return [1.0]
        top = max(v)
        if not _float_path_safe(horizon, [x - top for x in v]):
            return self._odds_exact(v, horizon)
        scale = max(top, 1.0)
        u = [x / scale for x in v]
        weights = [1.0]
        cur = 1.0
        for j in range(1, K):
            cur *= (j - horizon) / scale  # (-1)^j falling(horizon-1, j) / scale^j
            weights.append(cur)
        part = esp_partial_matrix(u)
        unnorm = []
        for k in range(K):
            row = part[k]
            unnorm.append(math.fsum(weights[j] * row[K - 1 - j] for j in range(K)))
        total = math.fsum(unnorm)
        if total <= 0 or min(unnorm) <= 0:
            raise InfeasibleState("non-positive odds: state left the feasible frontier")
        return [x / total for x in unnorm]

    def _odds_exact(self, v: list[float], horizon: int) -> list[float]:
        K = self.K
        part = esp_partial_matrix([Fraction(x) for x in v])
        unnorm = []
        for k in range(K):
            row = part[k]
            acc = Fraction(0)
            w = 1  # (-1)^j falling(horizon - 1, j), exact
            for j in range(K):
                if j:
                    w *= j - horizon
                acc += w * row[K - 1 - j]
            unnorm.append(acc)
        total = sum(unnorm)
        if total <= 0 or min(unnorm) <= 0:
            raise InfeasibleState("non-positive odds: state left the feasible frontier")
        return [float(x / total) for x in unnorm]


def apply_overround(r: Sequence[float], gamma: float) -> list[float]:
    """Published payout odds 1/(gamma * r(k)); sum of reciprocals is gamma."""
    if gamma < 1.0:
        raise ValueError("overround must be >= 1")
    return [1.0 / (gamma * x) for x in r]


def odg_mixture_quote(bet_history: Sequence[float], T: int) -> list[float]:
    """Binary-game baseline: expected decisive-strategy odds under Bernoulli bets.

    `bet_history` holds q_1(1)..q_{t-1}(1); the quote for round t is the
    exact expectation of the decisive engine's odds over all 2^(t-1)
    outcome-1/outcome-2 histories, weighted by the product of Bernoulli
    probabilities.  Exponential by design (it is the strategy being
    benchmarked against); refuses histories longer than 20.
    """
    depth = len(bet_history)
    if depth > T - 1:
        raise ValueError("history longer than T-1 rounds")
    if depth > 20:
        raise ValueError("exact enumeration capped at 20 rounds of history")
    for p in bet_history:
        if not 0.0 <= p <= 1.0:
            raise ValueError("history entries must be probabilities of outcome 1")

    acc = [0.0, 0.0]
    root = BookmakerEngine(2, T)
    root.quote_first()

    def walk(engine: BookmakerEngine, level: int, weight: float) -> None:
        if level == depth:
            acc[0] += weight * engine.last_odds[0]
            acc[1] += weight * engine.last_odds[1]
            return
        p_one = bet_history[level]
        for outcome, p in ((0, p_one), (1, 1.0 - p_one)):
            if p == 0.0:
                continue
            child = engine.clone()
            child.observe_and_quote([1.0, 0.0] if outcome == 0 else [0.0, 1.0])
            walk(child, level + 1, weight * p)

    walk(root, 0, 1.0)
    total = acc[0] + acc[1]
    return [acc[0] / total, acc[1] / total]
