"""Randomized identity and property suites shared by the CLI and the tests.

Every suite returns a list of report dicts {check, params, observed,
expected, tol, pass}.  The algebraic identity fuzz runs on exact rationals
(failures mean a formula is wrong, not that a tolerance is tight); the
game-level suites run the production float path against stated tolerances.
"""
from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction

from .combinatorics import esp_all, esp_partial_matrix
from .engine import BookmakerEngine
from .loss_poly import (
    biased_coeffs,
    denom_eval,
    num_eval,
    optimal_loss,
    poly_eval,
)
from .oracle import check_frontier, exhaustive_worst_case, grid_minimax_value
from .sim import GamblerSpec, XorShift64Star, make_gambler, realized_loss, run_game


def rational_mode_enabled() -> bool:
    """Honor BOOKIE_RATIONAL=1 for exact-arithmetic re-checks."""
    return os.environ.get("BOOKIE_RATIONAL", "") == "1"


def _frac(rng: XorShift64Star, lo: int = -20, hi: int = 20, max_den: int = 6) -> Fraction:
    return Fraction(lo + rng.below(hi - lo + 1), 1 + rng.below(max_den))


def _summary(check: str, n: int, seed: int, failures: int) -> dict:
    return {
        "check": check,
        "params": {"instances": n, "seed": seed},
        "observed": failures,
        "expected": 0,
        "tol": 0,
        "pass": failures == 0,
    }


def identities_suite(n: int = 1000, seed: int = 1) -> list[dict]:
    """Exact-rational fuzz of the core algebraic identities."""
    rng = XorShift64Star(seed)
    fail_biased = fail_recur = fail_reduced = fail_pesp = fail_norm = 0

    for _ in range(n):
        # loss polynomial == residual polynomial at the shifted argument
        K = 1 + rng.below(6)
        H = 1 + rng.below(8)
        s = [_frac(rng) for _ in range(K)]
        x = _frac(rng)
        lhs = poly_eval(biased_coeffs(H, s), x)
        rhs = denom_eval(H, [x - si for si in s])
        if lhs != rhs:
            fail_biased += 1

        # expansion of D along one coordinate
        K = 1 + rng.below(6)
        H = 1 + rng.below(8)
        v = [_frac(rng) for _ in range(K)]
        k = rng.below(K)
        reduced = v[:k] + v[k + 1 :]
        if denom_eval(H, v) != v[k] * denom_eval(H, reduced) - H * denom_eval(H - 1, reduced):
            fail_recur += 1

        # sum of reduced ESPs (degree K of a (K-1)-vector is an empty sum)
        K = 1 + rng.below(8)
        v = [_frac(rng) for _ in range(K)]
        m = rng.below(K + 1)
        total = sum(esp_all(v[:i] + v[i + 1 :])[m] for i in range(K)) if m < K else 0
        if total != (K - m) * esp_all(v)[m]:
            fail_reduced += 1

        # partial-ESP matrix against subset enumeration
        K = 2 + rng.below(9)
        v = [_frac(rng, -9, 9, 3) for _ in range(K)]
        part = esp_partial_matrix(v)
        for k in range(K):
            rest = v[:k] + v[k + 1 :]
            for m in range(K):
                brute = sum(
                    math.prod(combo) for combo in itertools.combinations(rest, m)
                ) if m else 1
                if part[k][m] != brute:
                    fail_pesp += 1
                    break
            else:
                continue
            break

        # odds normalization on an exact frontier point:
        # pick v[0..K-2], pin the last coordinate by N/D, then the reduced
        # D's sum to the odds denominator exactly
        K = 2 + rng.below(5)
        H = 1 + rng.below(8)
        v = [H + Fraction(1 + rng.below(60), 1 + rng.below(6)) for _ in range(K - 1)]
        den = denom_eval(H, v)
        if den != 0:
            v = v + [num_eval(H, v) / den]
            lhs = sum(denom_eval(H - 1, v[:k] + v[k + 1 :]) for k in range(K))
            if lhs != denom_eval(H - 1, v):
                fail_norm += 1

    return [
        _summary("identity_loss_poly_is_shifted_residual", n, seed, fail_biased),
        _summary("identity_one_coordinate_expansion", n, seed, fail_recur),
        _summary("identity_reduced_esp_sum", n, seed, fail_reduced),
        _summary("identity_pesp_vs_brute_force", n, seed, fail_pesp),
        _summary("identity_odds_normalization", n, seed, fail_norm),
    ]


def frontier_suite(
    games: int = 100,
    max_outcomes: int = 5,
    max_rounds: int = 10,
    seed: int = 1,
    rel_tol: float = 1e-6,
    rational: bool | None = None,
) -> list[dict]:
    """Frontier constraints after every round of seeded random-bet games."""
    if rational is None:
        rational = rational_mode_enabled()
    out = []
    for i in range(games):
        K = 2 + i % (max_outcomes - 1)
        T = 2 + (i * 7) % (max_rounds - 1)
        tr = run_game(K, T, GamblerSpec("random-seeded"), seed=seed + i)
        bad = 0
        for rnd in tr.rounds:
            if rnd.rounds_left < 1:
                continue
            v = [rnd.loss_after - x for x in rnd.state_after]
            rep = check_frontier(rnd.rounds_left, v, rel_tol=rel_tol, rational=rational)
            bad += sum(1 for item in rep.items if not item.ok)
        out.append(
            {
                "check": "frontier_round_constraints",
                "params": {"game": i, "K": K, "T": T, "seed": seed + i},
                "observed": bad,
                "expected": 0,
                "tol": 0,
                "pass": bad == 0,
            }
        )
    return out


def exhaustive_suite(
    max_outcomes: int = 4,
    max_rounds: int = 6,
    cap: int = 10 ** 5,
    tol: float = 1e-6,
) -> list[dict]:
    """Every decisive sequence realizes the same optimal loss."""
    out = []
    for K in range(1, max_outcomes + 1):
        for T in range(1, max_rounds + 1):
            if K ** T > cap:
                continue
            wc = exhaustive_worst_case(K, T)
            target = optimal_loss(T, K)
            out.append(
                {
                    "check": "exhaustive_equals_optimal",
                    "params": {"K": K, "T": T, "sequences": wc.sequences},
                    "observed": wc.max_loss,
                    "expected": target,
                    "tol": tol,
                    "pass": abs(wc.max_loss - target) <= tol,
                }
            )
            out.append(
                {
                    "check": "exhaustive_equalized",
                    "params": {"K": K, "T": T},
                    "observed": wc.max_loss - wc.min_loss,
                    "expected": 0.0,
                    "tol": tol,
                    "pass": abs(wc.max_loss - wc.min_loss) <= tol,
                }
            )
    return out


def grid_suite(n_values: tuple[int, ...] = (100, 200, 400, 800)) -> list[dict]:
    """Grid-minimax convergence to 2 + sqrt(2) on the two-outcome game."""
    target = 2.0 + math.sqrt(2.0)
    errs = {n: abs(grid_minimax_value(2, [0.0, 0.0], n) - target) for n in n_values}
    out = [
        {
            "check": "grid_minimax_error",
            "params": {"n_grid": n, "target": target},
            "observed": err,
            "expected": 0.0,
            "tol": 2e-2 if n >= 400 else 4e-2 * (400 / n),
            "pass": err <= (2e-2 if n >= 400 else 4e-2 * (400 / n)),
        }
        for n, err in errs.items()
    ]
    ns = sorted(errs)
    if len(ns) >= 2:
        # per-doubling geometric mean: aliasing makes single steps noisy
        ratio = (errs[ns[-1]] / errs[ns[0]]) ** (1.0 / (len(ns) - 1))
        out.append(
            {
                "check": "grid_minimax_halving",
                "params": {"n_grid": list(ns)},
                "observed": ratio,
                "expected": 0.5,
                "tol": 0.15,
                "pass": abs(ratio - 0.5) <= 0.15,
            }
        )
    return out


def epsilon_suite(games: int = 200, T: int = 50, K: int = 3, seed: int = 1) -> list[dict]:
    """Realized loss of the epsilon-oracle engine vs the exact engine.

    Both engines face the identical seeded bet sequence; the epsilon mode
    may lose at most 2*T*epsilon more, with epsilon = 1/T.
    """
    epsilon = 1.0 / T
    bound = 2.0 * T * epsilon + 1e-9
    out = []
    for i in range(games):
        bets = _prerecorded_bets(K, T, seed + i)
        spec = GamblerSpec("scripted", bets=tuple(tuple(b) for b in bets))
        exact_tr = run_game(K, T, spec, mode="exact", seed=seed + i)
        eps_tr = run_game(K, T, spec, mode="epsilon", seed=seed + i, epsilon=epsilon)
        excess = realized_loss(eps_tr) - realized_loss(exact_tr)
        out.append(
            {
                "check": "epsilon_excess_bounded",
                "params": {"game": i, "K": K, "T": T, "epsilon": epsilon},
                "observed": excess,
                "expected": 0.0,
                "tol": bound,
                "pass": excess <= bound,
            }
        )
    return out


def _prerecorded_bets(K: int, T: int, seed: int) -> list[list[float]]:
    gambler = make_gambler(GamblerSpec("random-seeded"), K, seed)
    return [gambler(t, [1.0 / K] * K, [0.0] * K) for t in range(1, T + 1)]
