"""Engine behavior: protocol, odds values, equalization, epsilon mode."""
import itertools
import math

import pytest

from bookie.engine import (
    BookmakerEngine,
    GameOver,
    InvalidBet,
    OutOfOrder,
    apply_overround,
    is_decisive,
    odg_mixture_quote,
    validate_bet,
)
from bookie.loss_poly import denom_eval, opportunistic_loss, optimal_loss


def decisive(k, K):
    q = [0.0] * K
    q[k] = 1.0
    return q


# -- construction and protocol -------------------------------------------------

def test_new_engine_water_levels():
    assert BookmakerEngine(2, 4).L == pytest.approx(6.0, abs=1e-12)
    assert BookmakerEngine(3, 1).L == pytest.approx(3.0, abs=1e-12)
    assert BookmakerEngine(2, 2).L == pytest.approx(2.0 + math.sqrt(2.0), abs=1e-12)


def test_new_engine_rejects_bad_sizes():
    with pytest.raises(ValueError):
        BookmakerEngine(0, 4)
    with pytest.raises(ValueError):
        BookmakerEngine(2, 0)
    with pytest.raises(ValueError):
        BookmakerEngine(2, 3, "telepathic")


def test_first_quote_uniform():
    assert BookmakerEngine(2, 4).quote_first() == [0.5, 0.5]
    assert BookmakerEngine(3, 2).quote_first() == [1 / 3, 1 / 3, 1 / 3]
    assert BookmakerEngine(1, 5).quote_first() == [1.0]


def test_observe_before_quote_is_out_of_order():
    engine = BookmakerEngine(2, 3)
    with pytest.raises(OutOfOrder):
        engine.observe_and_quote([1.0, 0.0])


def test_quote_first_after_play_is_out_of_order():
    engine = BookmakerEngine(2, 3)
    engine.quote_first()
    engine.observe_and_quote([1.0, 0.0])
    with pytest.raises(OutOfOrder):
        engine.quote_first()


def test_game_over_and_final_bet():
    engine = BookmakerEngine(2, 2)
    engine.quote_first()
    engine.observe_and_quote([1.0, 0.0])
    with pytest.raises(GameOver):
        engine.observe_and_quote([1.0, 0.0])  # round 2 is the last: no next quote
    engine.observe_final([0.0, 1.0])
    assert engine.done
    with pytest.raises(GameOver):
        engine.observe_final([0.0, 1.0])


def test_final_bet_too_early():
    engine = BookmakerEngine(2, 3)
    engine.quote_first()
    with pytest.raises(OutOfOrder):
        engine.observe_final([1.0, 0.0])


def test_bet_validation():
    with pytest.raises(InvalidBet):
        validate_bet([0.3, 0.3], 2)
    with pytest.raises(InvalidBet):
        validate_bet([-0.1, 1.1], 2)
    with pytest.raises(InvalidBet):
        validate_bet([0.5, 0.5, 0.0], 2)
    got = validate_bet([0.5000000001, 0.5], 2)
    assert math.fsum(got) == pytest.approx(1.0, abs=1e-15)
    assert is_decisive([1.0 - 1e-10, 1e-10])
    assert not is_decisive([0.999, 0.001])


# -- worked rounds ---------------------------------------------------------------

def test_decisive_round_keeps_water_level():
    engine = BookmakerEngine(2, 4)
    engine.quote_first()
    odds = engine.observe_and_quote([1.0, 0.0])
    assert engine.s == [2.0, 0.0]
    assert engine.L == pytest.approx(6.0, abs=1e-12)
    assert engine.residual_vector() == pytest.approx([4.0, 6.0])
    assert odds == pytest.approx([2 / 3, 1 / 3], abs=1e-12)
    assert denom_eval(2, engine.residual_vector()) == pytest.approx(6.0, abs=1e-9)


def test_split_round_lowers_water_level():
    engine = BookmakerEngine(2, 4)
    engine.quote_first()
    odds = engine.observe_and_quote([0.4, 0.6])
    assert engine.s == pytest.approx([0.8, 1.2])
    assert engine.L == pytest.approx(5.743559577416269, abs=1e-9)
    assert odds == pytest.approx([0.4635, 0.5364], abs=1e-3)


def test_even_split_two_rounds():
    engine = BookmakerEngine(2, 2)
    engine.quote_first()
    odds = engine.observe_and_quote([0.5, 0.5])
    assert engine.s == pytest.approx([1.0, 1.0])
    assert engine.L == pytest.approx(3.0, abs=1e-10)
    assert odds == pytest.approx([0.5, 0.5], abs=1e-10)
    engine.observe_final([1.0, 0.0])
    assert max(engine.s) == pytest.approx(3.0, abs=1e-10)


def test_one_outcome_game():
    engine = BookmakerEngine(1, 3)
    assert engine.quote_first() == [1.0]
    assert engine.observe_and_quote([1.0]) == [1.0]
    assert engine.residual_vector() == pytest.approx([2.0])


def test_fresh_residual_vector():
    engine = BookmakerEngine(2, 4)
    assert engine.residual_vector() == pytest.approx([6.0, 6.0])


def test_start_state_resume():
    engine = BookmakerEngine(2, 3, start_state=[0.8, 1.2])
    assert engine.L == pytest.approx(opportunistic_loss(3, [0.8, 1.2]), abs=1e-12)


# -- invariants -------------------------------------------------------------------

def test_equalization_under_decisive_play():
    # the post-bet state keeps the same water level, whichever vertex is hit
    for K, T in [(2, 4), (3, 3), (4, 2)]:
        engine = BookmakerEngine(K, T)
        r = engine.quote_first()
        for k in range(K):
            s_next = [engine.s[i] + (1.0 / r[i] if i == k else 0.0) for i in range(K)]
            level = opportunistic_loss(T - 1, s_next) if T > 1 else max(s_next)
            assert level == pytest.approx(engine.L, abs=1e-6)


def test_equalization_mid_game_after_split_bet():
    engine = BookmakerEngine(3, 4)
    engine.quote_first()
    r = engine.observe_and_quote([0.2, 0.5, 0.3])
    H = 3  # rounds still to play, including the one just quoted
    for k in range(3):
        s_next = [engine.s[i] + (1.0 / r[i] if i == k else 0.0) for i in range(3)]
        level = opportunistic_loss(H - 1, s_next)
        assert level == pytest.approx(engine.L, abs=1e-6)


def test_equalization_fuzz_over_random_games():
    # Nash property: at every reachable state, each decisive continuation
    # lands on the same water level the engine is committed to
    from bookie.sim import GamblerSpec, make_gambler

    for seed in range(8):
        K = 2 + seed % 3
        T = 3 + seed % 4
        gambler = make_gambler(GamblerSpec("random-seeded"), K, seed=seed)
        engine = BookmakerEngine(K, T)
        r = engine.quote_first()
        for t in range(1, T):
            horizon = T - t + 1  # rounds left including the one quoted
            for k in range(K):
                s_next = [engine.s[i] + (1.0 / r[i] if i == k else 0.0) for i in range(K)]
                level = opportunistic_loss(horizon - 1, s_next) if horizon > 1 else max(s_next)
                assert level == pytest.approx(engine.L, abs=1e-6), (seed, t, k)
            r = engine.observe_and_quote(gambler(t, r, engine.s))


def test_split_bet_strictly_improves():
    delta = 1e-3
    engine = BookmakerEngine(3, 5)
    engine.quote_first()
    before = engine.L
    engine.observe_and_quote([1.0 - delta, delta / 2, delta / 2])
    assert before - engine.L > 1e-9 * delta


def test_water_level_dominates_state_plus_horizon():
    # whenever rounds remain, L >= max(s) + remaining rounds (strict for K > 1)
    engine = BookmakerEngine(3, 6)
    engine.quote_first()
    for q in ([0.5, 0.25, 0.25], [1.0, 0.0, 0.0], [0.1, 0.8, 0.1], [0.0, 0.0, 1.0], [1 / 3, 1 / 3, 1 / 3]):
        engine.observe_and_quote(q)
        remaining = engine.T - engine.t + 1
        assert engine.L > max(engine.s) + remaining - 1e-9


def test_water_level_never_rises():
    engine = BookmakerEngine(3, 6)
    engine.quote_first()
    levels = [engine.L]
    bets = [[0.5, 0.25, 0.25], [1.0, 0.0, 0.0], [0.1, 0.8, 0.1], [0.0, 0.0, 1.0], [1 / 3, 1 / 3, 1 / 3]]
    for q in bets:
        engine.observe_and_quote(q)
        levels.append(engine.L)
    assert all(b <= a + 1e-12 for a, b in zip(levels, levels[1:]))


def test_frontier_membership_each_round():
    engine = BookmakerEngine(4, 5)
    engine.quote_first()
    bets = [[0.4, 0.2, 0.2, 0.2], [1.0, 0, 0, 0], [0.25, 0.25, 0.25, 0.25], [0, 0.5, 0.5, 0]]
    for t, q in enumerate(bets, start=2):
        engine.observe_and_quote(q)
        H = 5 - t + 1
        v = engine.residual_vector()
        scale = sum(abs(x) for x in v) ** 4 or 1.0
        assert abs(denom_eval(H, v)) / scale < 1e-6


def test_odds_positive_and_normalized():
    engine = BookmakerEngine(5, 4)
    engine.quote_first()
    odds = engine.observe_and_quote([0.2, 0.2, 0.2, 0.2, 0.2])
    assert min(odds) > 0
    assert math.fsum(odds) == pytest.approx(1.0, abs=1e-12)


def test_unnormalized_odds_sum_to_denominator():
    # sum_k D_{H-1}(v minus k) == D_{H-1}(v) on the frontier
    engine = BookmakerEngine(4, 6)
    engine.quote_first()
    engine.observe_and_quote([0.3, 0.3, 0.2, 0.2])
    H = 5
    v = engine.residual_vector()
    lhs = math.fsum(denom_eval(H - 1, v[:k] + v[k + 1 :]) for k in range(4))
    rhs = denom_eval(H - 1, v)
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_guaranteed_loss_exhaustive_small():
    for K, T in [(2, 5), (3, 4), (4, 3)]:
        target = optimal_loss(T, K)
        for seq in itertools.product(range(K), repeat=T):
            engine = BookmakerEngine(K, T)
            odds = engine.quote_first()
            payouts = [0.0] * K
            for t, k in enumerate(seq, start=1):
                payouts[k] += 1.0 / odds[k]
                if t < T:
                    odds = engine.observe_and_quote(decisive(k, K))
                else:
                    engine.observe_final(decisive(k, K))
            assert max(payouts) == pytest.approx(target, abs=1e-6)


# -- epsilon mode ------------------------------------------------------------------

def test_epsilon_mode_initial_level():
    exact = BookmakerEngine(2, 4)
    eps = BookmakerEngine(2, 4, "epsilon", epsilon=0.01)
    # inflated state raises the level by at most 2 epsilon (plus oracle slack)
    assert exact.L <= eps.L <= exact.L + 2 * 0.01 + 1e-6


def test_epsilon_mode_excess_bounded_sample():
    T, K = 12, 3
    bets = []
    x = 0.1
    for _ in range(T):
        bets.append([x, (1 - x) / 2, (1 - x) / 2])
        x = (x * 7919 + 0.013) % 1.0
    def play(mode, epsilon=None):
        engine = BookmakerEngine(K, T, mode, epsilon=epsilon)
        odds = engine.quote_first()
        payouts = [0.0] * K
        for t, q in enumerate(bets, start=1):
            for k in range(K):
                payouts[k] += q[k] / odds[k]
            if t < T:
                odds = engine.observe_and_quote(q)
            else:
                engine.observe_final(q)
        return max(payouts)
    excess = play("epsilon", 1.0 / T) - play("exact")
    assert excess <= 2.0 + 1e-9  # 2 T epsilon with epsilon = 1/T


def test_many_outcomes_long_horizon_round():
    # float coefficients cancel catastrophically here; the exact paths must
    # keep the symmetric state's odds exactly uniform
    engine = BookmakerEngine(64, 1000)
    engine.quote_first()
    odds = engine.observe_and_quote([1.0 / 64] * 64)
    assert engine.L == pytest.approx(1.0 + optimal_loss(999, 64), rel=1e-12)
    assert odds == pytest.approx([1.0 / 64] * 64, abs=1e-15)
    engine.observe_and_quote(decisive(0, 64))  # decisive round stays feasible
    assert min(engine.last_odds) > 0


def test_long_horizon_split_round():
    engine = BookmakerEngine(8, 10 ** 6)
    engine.quote_first()
    odds = engine.observe_and_quote([0.12, 0.13] + [0.125] * 6)
    assert math.fsum(odds) == pytest.approx(1.0, abs=1e-12)
    assert min(odds) > 0.12  # near-uniform continuation
    assert engine.L > 10 ** 6


# -- helpers -----------------------------------------------------------------------

def test_apply_overround():
    assert apply_overround([0.5, 0.5], 1.0) == pytest.approx([2.0, 2.0])
    assert apply_overround([0.5, 0.5], 1.1) == pytest.approx([1.8181818181818181] * 2)
    assert apply_overround([2 / 3, 1 / 3], 1.0) == pytest.approx([1.5, 3.0])
    gamma = 1.23
    odds = apply_overround([0.2, 0.3, 0.5], gamma)
    assert math.fsum(1.0 / g for g in odds) == pytest.approx(gamma, abs=1e-12)
    with pytest.raises(ValueError):
        apply_overround([0.5, 0.5], 0.9)


def test_mixture_baseline_values():
    assert odg_mixture_quote([], 4) == pytest.approx([0.5, 0.5])
    assert odg_mixture_quote([0.4], 4) == pytest.approx([7 / 15, 8 / 15], abs=1e-12)
    assert odg_mixture_quote([1.0], 4) == pytest.approx([2 / 3, 1 / 3], abs=1e-12)


def test_mixture_differs_from_engine_odds():
    engine = BookmakerEngine(2, 4)
    engine.quote_first()
    engine_odds = engine.observe_and_quote([0.4, 0.6])
    mixture = odg_mixture_quote([0.4], 4)
    assert abs(engine_odds[0] - mixture[0]) > 1e-3


def test_mixture_rejects_long_history():
    with pytest.raises(ValueError):
        odg_mixture_quote([0.5] * 21, 40)
    with pytest.raises(ValueError):
        odg_mixture_quote([0.5] * 4, 4)


def test_clone_is_independent():
    engine = BookmakerEngine(2, 4)
    engine.quote_first()
    twin = engine.clone()
    engine.observe_and_quote([1.0, 0.0])
    assert twin.s == [0.0, 0.0]
    assert twin.t == 1
