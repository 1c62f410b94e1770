"""Brute-force oracles that check the closed-form theory from first principles.

These deliberately avoid the fast paths: the exhaustive oracle replays every
decisive betting sequence through a fresh engine, the grid oracle evaluates
the minimax recursion on a simplex grid, and the frontier/derivative checks
re-derive per-coordinate constraints numerically.  They are the referee for
the rest of the package, so keep them simple and independent.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import esp_all, rising_factorial
from .engine import BookmakerEngine
from .loss_poly import denom_eval, num_eval

EXHAUSTIVE_CAP = 10_000_000


class TooLarge(ValueError):
    """K^T exceeds the exhaustive-enumeration cap."""


@dataclass(frozen=True)
class WorstCase:
    max_loss: float
    min_loss: float
    sequences: int


def exhaustive_worst_case(K: int, T: int, mode: str = "exact", epsilon: float | None = None) -> WorstCase:
    """Realized-loss extremes over all K^T decisive betting sequences.

    Each sequence gets its own engine.  Under the optimal strategy the game
    value is decisive-path independent, so max and min coincide with the
    optimal loss up to root tolerance.
    """
    if K < 1 or T < 1:
        raise ValueError("K and T must be >= 1")
    if K ** T > EXHAUSTIVE_CAP:
        raise TooLarge(f"{K}^{T} sequences exceed cap {EXHAUSTIVE_CAP}")
    worst, best = -math.inf, math.inf
    for seq in itertools.product(range(K), repeat=T):
        payouts = [0.0] * K
        engine = BookmakerEngine(K, T, mode, epsilon=epsilon)
        odds = engine.quote_first()
        for t, k in enumerate(seq, start=1):
            payouts[k] += 1.0 / odds[k]
            bet = [0.0] * K
            bet[k] = 1.0
            if t < T:
                odds = engine.observe_and_quote(bet)
            else:
                engine.observe_final(bet)
        realized = max(payouts)
        worst = max(worst, realized)
        best = min(best, realized)
    return WorstCase(worst, best, K ** T)


def grid_minimax_value(horizon: int, s: Sequence[float], n_grid: int) -> float:
    """Minimax value by recursive search over an interior simplex grid.

    The bookmaker's action ranges over grid points kept half a cell away
    from the simplex boundary; the gambler plays the K decisive responses.
    Cost grows like n_grid^((K-1)*horizon), hence the small-instance guard.
    """
    state = [float(x) for x in s]
    K = len(state)
    if K < 1 or horizon < 1 or n_grid < 1:
        raise ValueError("need K, horizon, n_grid >= 1")
    if K > 3 or horizon > 3:
        raise ValueError("grid oracle is limited to K <= 3 and horizon <= 3")
    if K == 1:
        return state[0] + horizon

    margin = 1.0 / (2.0 * n_grid)
    ticks = [(2 * i + 1) / (2.0 * n_grid) for i in range(n_grid)]
    if K == 2:
        grid = [(a, 1.0 - a) for a in ticks]
    else:
        grid = [
            (a, b, 1.0 - a - b)
            for a in ticks
            for b in ticks
            if 1.0 - a - b >= margin
        ]

    def recurse(h: int, st: list[float]) -> float:
        if h == 0:
            return max(st)
        best = math.inf
        for r in grid:
            worst = -math.inf
            for k in range(K):
                nxt = list(st)
                nxt[k] += 1.0 / r[k]
                worst = max(worst, recurse(h - 1, nxt))
                if worst >= best:
                    break  # this r already lost the min
            best = min(best, worst)
        return best

    return recurse(horizon, state)


# ---------------------------------------------------------------------------
# constraint reports

@dataclass
class CheckItem:
    check: str
    params: dict
    observed: float
    expected: float
    tol: float
    ok: bool

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "observed": self.observed,
            "expected": self.expected,
            "tol": self.tol,
            "pass": self.ok,
        }


@dataclass
class Report:
    items: list[CheckItem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def add(self, check: str, params: dict, observed: float, expected: float, tol: float) -> None:
        self.items.append(
            CheckItem(check, params, observed, expected, tol, abs(observed - expected) <= tol)
        )

    def add_positive(self, check: str, params: dict, observed: float) -> None:
        self.items.append(CheckItem(check, params, observed, math.nan, 0.0, observed > 0))

    def to_dicts(self) -> list[dict]:
        return [item.to_dict() for item in self.items]


def _denom_scale(horizon: int, v: Sequence[float]) -> float:
    sig = esp_all([abs(float(x)) for x in v])
    K = len(v)
    return math.fsum(
        abs(rising_factorial(-horizon, K - m)) * sig[m] for m in range(K + 1)
    ) or 1.0


def check_frontier(horizon: int, v: Sequence[float], rel_tol: float = 1e-6, rational: bool = False) -> Report:
    """Constraints every residual vector of a live game must satisfy.

    (a) the residual polynomial vanishes at v, relative to its term scale;
    (b) each coordinate is pinned by the others through N/D of the reduced
        vector; (c) v dominates horizon*1, strictly for K > 1; (d) every
        reduced residual polynomial is positive.  Violations are reported
        with magnitudes; nothing raises.
    """
    vv: list = [Fraction(float(x)) for x in v] if rational else [float(x) for x in v]
    K = len(vv)
    rep = Report()

    scale = _denom_scale(horizon, v)
    rep.add(
        "frontier_membership",
        {"H": horizon, "K": K},
        float(denom_eval(horizon, vv)) / scale,
        0.0,
        rel_tol,
    )

    for k in range(K):
        reduced = vv[:k] + vv[k + 1 :]
        den = denom_eval(horizon, reduced)
        if den != 0:
            pinned = float(num_eval(horizon, reduced) / den)
            rep.add(
                "coordinate_elimination",
                {"H": horizon, "k": k},
                pinned,
                float(vv[k]),
                rel_tol * max(1.0, abs(float(vv[k]))),
            )
        else:
            rep.add_positive("coordinate_elimination", {"H": horizon, "k": k}, -math.inf)

    lower_gap = min(float(x) for x in vv) - horizon
    if K == 1:
        rep.add("lower_bound", {"H": horizon, "K": K}, lower_gap, 0.0, rel_tol)
    else:
        rep.add_positive("lower_bound_strict", {"H": horizon, "K": K}, lower_gap)

    for m in range(1, K):
        for subset in itertools.combinations(range(K), m):
            keep = [vv[i] for i in range(K) if i not in subset]
            rep.add_positive(
                "reduced_positivity",
                {"H": horizon, "drop": list(subset)},
                float(denom_eval(horizon, keep)),
            )
    return rep


def check_derivatives(horizon: int, v: Sequence[float], rel_tol: float = 1e-5) -> Report:
    """Finite-difference checks of the residual polynomial's derivatives.

    First partials against the reduced-vector form, vanishing second pure
    partials, and the expansion of D along one coordinate.
    """
    vv = [float(x) for x in v]
    K = len(vv)
    rep = Report()
    base = denom_eval(horizon, vv)
    scale = max(1.0, _denom_scale(horizon, vv))

    for k in range(K):
        h = 1e-5 * max(1.0, abs(vv[k]))
        up = list(vv)
        dn = list(vv)
        up[k] += h
        dn[k] -= h
        fd1 = (denom_eval(horizon, up) - denom_eval(horizon, dn)) / (2 * h)
        reduced = vv[:k] + vv[k + 1 :]
        analytic = denom_eval(horizon, reduced)
        rep.add(
            "first_partial",
            {"H": horizon, "k": k},
            fd1,
            analytic,
            rel_tol * max(1.0, abs(analytic)),
        )
        fd2 = (denom_eval(horizon, up) - 2 * base + denom_eval(horizon, dn)) / (h * h)
        # rounding noise in fd2 is ~ eps * scale / h^2, i.e. ~1e-6 * scale
        rep.add(
            "second_partial_zero",
            {"H": horizon, "k": k},
            fd2 / scale,
            0.0,
            1e-4,
        )
        if horizon >= 1:
            recur = vv[k] * analytic - horizon * denom_eval(horizon - 1, reduced)
            rep.add(
                "one_coordinate_expansion",
                {"H": horizon, "k": k},
                recur / scale,
                base / scale,
                1e-12,
            )
    return rep
