"""Worst-case optimal online bookmaking.

Exact optimal and opportunistic losses via largest polynomial roots, the
forward O(T K^2) odds-setting engine, Hermite asymptotics of the regret,
brute-force verification oracles, a game simulator, a CLI, and a small
JSON-over-HTTP game service.
"""
from .combinatorics import (
    binomial,
    esp_all,
    esp_partial_matrix,
    esp_shifted,
    falling_factorial,
    rising_factorial,
    stirling_first_signed,
    stirling_first_unsigned,
)
from .engine import (
    BookmakerEngine,
    GameOver,
    InfeasibleState,
    InvalidBet,
    OutOfOrder,
    apply_overround,
    odg_mixture_quote,
)
from .loss_poly import (
    NoRealRootInBracket,
    biased_coeffs,
    denom_eval,
    hermite_coeffs,
    largest_real_root,
    largest_real_root_upper,
    num_eval,
    opportunistic_loss,
    opportunistic_loss_upper,
    opt_poly_coeffs,
    optimal_loss,
    regret,
    regret_factor_asymptotic,
    regret_factor_bounds,
    regret_factor_finite,
)
from .oracle import (
    TooLarge,
    WorstCase,
    check_derivatives,
    check_frontier,
    exhaustive_worst_case,
    grid_minimax_value,
)
from .sim import (
    GamblerSpec,
    Transcript,
    bookmaker_profit,
    realized_loss,
    replay_transcript,
    run_game,
    transcript_jsonl,
)

__version__ = "0.1.0"
