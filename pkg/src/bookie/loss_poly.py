"""Loss polynomials of the worst-case bookmaking game and their largest roots.

The building block is the residual polynomial

    D_H(v) = sum_m rising(-H, K-m) * sigma_m(v)

over a residual-loss vector v of length K.  Everything else is a view of it:

  * the state-biased loss polynomial Q_{H,s}(x) = D_H(x*1 - s), whose largest
    real root is the optimal worst-case loss from committed payouts s with H
    rounds to go;
  * the zero-state game polynomial P_{T,K}(x) = D_T(x*1), whose largest root
    is the optimal loss of a fresh T-round game;
  * the counting polynomial N_H = H * D_{H-1} used by the odds formula.

Root extraction is a descending sign scan over a guaranteed bracket followed
by bisection and a safeguarded Newton polish.  Long horizons at high K run
the float evaluation of Q out of precision, so the solver falls back to
exact big-rational bisection; the zero-state loss additionally has a
rescaled form (regret_factor_finite) whose coefficients stay Hermite-sized
for any T.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .combinatorics import (
    binomial,
    esp_all,
    falling_factorial,
    rising_factorial,
    stirling_first_signed,
)

RootBracket = tuple  # (lo, hi)

#: scaled first Airy-function zero 6^(-1/3) * i_1, to the digits we rely on
AIRY_SCALED = 1.855757


class NoRealRootInBracket(Exception):
    """No sign change found: the polynomial has no usable root in range."""


# ---------------------------------------------------------------------------
# polynomial helpers (ascending coefficient lists)

def poly_trim(coeffs: Sequence) -> list:
    """Drop trailing zero coefficients; the zero polynomial trims to []."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_eval(coeffs: Sequence, x):
    """Horner evaluation of an ascending coefficient list."""
    acc = 0
    for cf in reversed(coeffs):
        acc = acc * x + cf
    return acc


def poly_derivative(coeffs: Sequence) -> list:
    return [i * cf for i, cf in enumerate(coeffs)][1:]


# ---------------------------------------------------------------------------
# the polynomial family

def denom_eval(horizon: int, v: Sequence):
    """Residual polynomial D_H(v); 1 for the empty vector."""
    K = len(v)
    sig = esp_all(v)
    total = 0
    for m in range(K + 1):
        total = total + rising_factorial(-horizon, K - m) * sig[m]
    return total


def num_eval(horizon: int, v: Sequence):
    """N_H(v) = H * D_{H-1}(v); rejects horizon 0."""
    if horizon < 1:
        raise ValueError("num_eval requires horizon >= 1")
    return horizon * denom_eval(horizon - 1, v)


def biased_coeffs(horizon: int, s: Sequence) -> list:
    """Ascending coefficients of the loss polynomial Q_{H,s}.

    Monic of degree K = len(s); exact when s holds ints or Fractions.
    """
    K = len(s)
    if K < 1:
        raise ValueError("state must have at least one coordinate")
    sig = esp_all(s)
    fall = [falling_factorial(horizon, j) for j in range(K + 1)]
    asc: list = [0] * (K + 1)
    for m in range(K + 1):
        acc = 0
        for n in range(m + 1):
            acc = acc + fall[m - n] * binomial(K - n, m - n) * sig[n]
        asc[K - m] = -acc if m % 2 else acc
    return asc


def opt_poly_coeffs(T: int, K: int) -> list:
    """Ascending coefficients of the zero-state game polynomial P_{T,K}."""
    if T < 1 or K < 1:
        raise ValueError("T and K must be >= 1")
    return [binomial(K, m) * rising_factorial(-T, K - m) for m in range(K + 1)]


# ---------------------------------------------------------------------------
# largest real root

_SCAN_STEPS = 64
_SCAN_STEPS_MAX = 1 << 16


def _scan_descending(f, lo, hi, steps: int):
    """First point from the top with f(x) <= 0; (x, previous_x) or None."""
    prev = hi
    for i in range(1, steps + 1):
        x = lo if i == steps else hi - (hi - lo) * (i / steps)
        if f(x) <= 0:
            return x, prev
        prev = x
    return None


def _bracket_rightmost_crossing(f, lo: float, hi: float) -> tuple[float, float]:
    """(a, b) with f(a) <= 0 < f(b) around the rightmost crossing in [lo, hi].

    Starts coarse and refines; once a crossing is found, re-sweeps the region
    above it at doubled density in case the grid skipped a narrower excursion
    higher up.
    """
    hit, steps = None, _SCAN_STEPS
    while hit is None:
        hit = _scan_descending(f, lo, hi, steps)
        if hit is None:
            if steps >= _SCAN_STEPS_MAX:
                raise NoRealRootInBracket("no sign change found in bracket")
            steps *= 2
    a, b = hit
    while b < hi:
        higher = _scan_descending(f, b, hi, max(2 * steps, 256))
        if higher is None:
            break
        a, b = higher
    return a, b


def largest_real_root(coeffs: Sequence, bracket: RootBracket, tol: float = 1e-10) -> float:
    """Largest real root of the polynomial inside [lo, hi], to within tol.

    Requires a positive leading coefficient and p(hi) >= 0.  Scans downward
    from hi for the rightmost sign change (refining the step if none shows),
    then bisects and finishes with a bracket-guarded Newton polish.
    Coefficient lists containing Fractions are solved in exact arithmetic.

    Raises NoRealRootInBracket when no sign structure is found, which a
    caller may map to an infeasible (loss = infinity) state.
    """
    c = poly_trim(coeffs)
    if not c:
        raise ValueError("zero polynomial has no largest root")
    if c[-1] < 0:
        raise ValueError("leading coefficient must be positive")
    lo, hi = bracket
    if lo > hi:
        raise ValueError("bracket is empty")
    if any(isinstance(cf, Fraction) for cf in c):
        return _largest_root_exact(c, Fraction(lo), Fraction(hi), Fraction(tol))

    def f(x: float) -> float:
        return poly_eval(c, x)

    fhi = f(hi)
    if fhi < 0:
        raise NoRealRootInBracket("polynomial negative at upper bracket end")
    if fhi == 0:
        return hi  # hi itself is the largest root in range
    if hi == lo:
        raise NoRealRootInBracket("degenerate bracket without root")

    a, b = _bracket_rightmost_crossing(f, lo, hi)

    width = max(tol * 1e-3, 1e-15 * max(1.0, abs(hi)))
    while b - a > width:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if f(mid) <= 0:
            a = mid
        else:
            b = mid

    dc = poly_derivative(c)
    x = 0.5 * (a + b)
    for _ in range(50):
        fx = f(x)
        if fx <= 0:
            a = x
        else:
            b = x
        fp = poly_eval(dc, x)
        xn = x - fx / fp if fp != 0 else 0.5 * (a + b)
        if not (a < xn < b):
            xn = 0.5 * (a + b)
        if abs(xn - x) <= 1e-3 * tol + 1e-16 * abs(x):
            return xn
        x = xn
    return x


def largest_real_root_upper(coeffs: Sequence, bracket: RootBracket, epsilon: float) -> float:
    """One-sided epsilon oracle: a value in [root, root + epsilon).

    Bisection stops once the bracket is narrower than epsilon/2 and the
    sign-positive upper end is returned, so the result never undershoots
    the largest real root.  The engine's epsilon mode relies on that:
    overshooting the water level keeps the residual vector achievable,
    undershooting would not.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    c = poly_trim(coeffs)
    if not c:
        raise ValueError("zero polynomial has no largest root")
    if c[-1] < 0:
        raise ValueError("leading coefficient must be positive")
    lo, hi = bracket

    def f(x: float) -> float:
        return poly_eval(c, x)

    fhi = f(hi)
    if fhi < 0:
        raise NoRealRootInBracket("polynomial negative at upper bracket end")
    if fhi == 0:
        return hi
    if hi == lo:
        raise NoRealRootInBracket("degenerate bracket without root")
    a, b = _bracket_rightmost_crossing(f, lo, hi)
    while b - a > 0.5 * epsilon:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if f(mid) <= 0:
            a = mid
        else:
            b = mid
    return b


def _largest_root_exact(c: list, lo: Fraction, hi: Fraction, tol: Fraction) -> float:
    def f(x: Fraction) -> Fraction:
        return poly_eval(c, x)

    fhi = f(hi)
    if fhi < 0:
        raise NoRealRootInBracket("polynomial negative at upper bracket end")
    if fhi == 0:
        return float(hi)
    if hi == lo:
        raise NoRealRootInBracket("degenerate bracket without root")

    def scan(lo_: Fraction, hi_: Fraction, steps_: int):
        prev = hi_
        for i in range(1, steps_ + 1):
            x = hi_ - (hi_ - lo_) * Fraction(i, steps_)
            if f(x) <= 0:
                return x, prev
            prev = x
        return None

    hit, steps = None, _SCAN_STEPS
    while hit is None:
        hit = scan(lo, hi, steps)
        if hit is None:
            if steps >= _SCAN_STEPS_MAX:
                raise NoRealRootInBracket("no sign change found in bracket")
            steps *= 2
    a, b = hit
    while b < hi:
        higher = scan(b, hi, max(2 * steps, 256))
        if higher is None:
            break
        a, b = higher
    while b - a > tol:
        mid = (a + b) / 2
        if f(mid) <= 0:
            a = mid
        else:
            b = mid
    return float((a + b) / 2)


def _fujiwara_bound(coeffs: Sequence) -> float:
    """Upper bound on the absolute value of all roots (monic-normalized)."""
    c = poly_trim(coeffs)
    deg = len(c) - 1
    lead = float(c[-1])
    best = 0.0
    for i in range(1, deg + 1):
        cf = float(c[deg - i])
        if cf:
            best = max(best, abs(cf / lead) ** (1.0 / i))
    return 2.0 * best


# ---------------------------------------------------------------------------
# losses and regret

def optimal_loss(T: int, K: int) -> float:
    """Optimal worst-case loss of a fresh game: T rounds, K outcomes."""
    return T + regret(T, K)


def regret(T: int, K: int) -> float:
    """Excess of the optimal loss over the hindsight baseline T.

    Closed forms for K <= 3; otherwise sqrt(T) times the largest root of the
    rescaled polynomial, which is well-conditioned for every T.
    """
    if T < 1 or K < 1:
        raise ValueError("T and K must be >= 1")
    if K == 1:
        return 0.0
    if K == 2:
        return math.sqrt(T)
    if K == 3:
        return 2.0 * math.sqrt(T) * math.cos(math.acos(T ** -0.5) / 3.0)
    return math.sqrt(T) * regret_factor_finite(T, K)


def regret_factor_finite(T: int, K: int) -> float:
    """Largest root of the loss polynomial rescaled by x = T + sqrt(T) y.

    Equals regret(T,K)/sqrt(T); its coefficients involve only signed
    Stirling numbers and non-positive powers of T, so they stay bounded
    (they converge to the Hermite coefficients as T grows).
    """
    if T < 1 or K < 1:
        raise ValueError("T and K must be >= 1")
    if K == 1:
        return 0.0
    asc = [0.0] * (K + 1)
    for m in range(K + 1):
        acc = 0.0
        for n in range((m + 1) // 2, m + 1):
            w = sum(
                (-1) ** d * binomial(m, d) * stirling_first_signed(d, d - n)
                for d in range(n, m + 1)
            )
            if w:
                acc += w * float(T) ** (m / 2 - n)
        asc[K - m] = binomial(K, m) * acc
    hi = _fujiwara_bound(asc) + 1.0
    return largest_real_root(asc, (0.0, hi), 1e-12)


_FLOAT_SAFE_DIGITS = 12.0


def _float_path_safe(horizon: int, s0: Sequence[float]) -> bool:
    """Can doubles resolve the sign of Q near its largest root?

    Rescaling the zero-state polynomial shows the terms cancel down from
    ~x^K to ~H^(K/2) near the root, i.e. ~(K/2)*log10(H) digits are lost;
    a state spread widens that.  Stay in floats only while the loss is
    comfortably inside the 15-16 digits a double carries.
    """
    spread = -min(s0)  # s0 <= 0 with max(s0) = 0
    return 0.5 * len(s0) * math.log10(horizon + spread + 2.0) <= _FLOAT_SAFE_DIGITS


def opportunistic_loss(horizon: int, s: Sequence, tol: float = 1e-10) -> float:
    """Optimal worst-case loss from committed payouts s with `horizon` rounds left.

    Largest real root of Q_{horizon,s}.  The state is first translated so
    max(s) = 0 (the root translates back exactly); a constant state then
    reduces to the zero-state loss.  When cancellation would eat the float
    mantissa (long horizons at high K), the root is re-derived by exact
    big-rational bisection instead.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    K = len(s)
    if K < 1:
        raise ValueError("state must have at least one coordinate")
    if K == 1:
        return float(s[0]) + horizon
    shift = max(s)
    s0 = [float(x) - float(shift) for x in s]
    if not any(s0):
        return optimal_loss(horizon, K) + float(shift)
    if _float_path_safe(horizon, s0):
        coeffs = biased_coeffs(horizon, s0)
        return largest_real_root(coeffs, (float(horizon), float(horizon * K)), tol) + float(shift)
    exact = biased_coeffs(horizon, [Fraction(x) for x in s0])
    root = largest_real_root(
        exact, (Fraction(horizon), Fraction(horizon * K)), tol
    )
    return root + float(shift)


def opportunistic_loss_upper(horizon: int, s: Sequence, epsilon: float) -> float:
    """Epsilon-precision upper approximation of the opportunistic loss.

    Same polynomial as opportunistic_loss, but solved by the one-sided
    oracle, so the returned level sits within epsilon above the true root.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    K = len(s)
    if K < 1:
        raise ValueError("state must have at least one coordinate")
    if K == 1:
        return float(s[0]) + horizon
    shift = max(s)
    s0 = [float(x) - float(shift) for x in s]
    if not any(s0):
        return optimal_loss(horizon, K) + float(shift)
    if _float_path_safe(horizon, s0):
        root = largest_real_root_upper(
            biased_coeffs(horizon, s0), (float(horizon), float(horizon * K)), epsilon
        )
        return root + float(shift)
    # exact fallback: bisect in rationals, return within epsilon/2 above
    exact = biased_coeffs(horizon, [Fraction(x) for x in s0])
    root = largest_real_root(
        exact, (Fraction(horizon), Fraction(horizon * K)), epsilon / 4.0
    )
    return root + epsilon / 4.0 + float(shift)


# ---------------------------------------------------------------------------
# Hermite regret factors

def hermite_coeffs(K: int) -> list:
    """Ascending integer coefficients of the K-th probabilist's Hermite polynomial."""
    if K < 1:
        raise ValueError("K must be >= 1")
    c = [0] * (K + 1)
    for n in range(K // 2 + 1):
        c[K - 2 * n] = (-1) ** n * (
            math.factorial(K) // (math.factorial(n) * math.factorial(K - 2 * n) * 2 ** n)
        )
    return c


def regret_factor_bounds(K: int) -> tuple[float, float]:
    """(A_K, B_K) sandwiching the asymptotic regret factor."""
    if K < 1:
        raise ValueError("K must be >= 1")
    a = 2.0 * math.sqrt(K) - 9.0 * 2.0 ** (-5.0 / 3.0) * K ** (-1.0 / 6.0)
    b = math.sqrt(4.0 * K + 2.0) - math.sqrt(2.0) * AIRY_SCALED * (2.0 * K + 1.0) ** (-1.0 / 6.0)
    return a, b


def _hermite_value_and_derivative(K: int, x: float) -> tuple[float, float]:
    """(He_K(x), He_K'(x)) by the three-term recurrence; no cancellation blowup."""
    prev, cur = 1.0, x
    for n in range(1, K):
        prev, cur = cur, x * cur - n * prev
    return cur, K * prev


def regret_factor_asymptotic(K: int) -> float:
    """Largest root of the K-th Hermite polynomial (the sqrt(T) regret factor).

    Newton from B_K, which lies above the root where the polynomial is
    positive, increasing and convex, so the iteration descends monotonically.
    Evaluation goes through the stable recurrence rather than the raw
    coefficients, which are ~1e46 by K = 64.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if K == 1:
        return 0.0
    x = regret_factor_bounds(K)[1]
    for _ in range(200):
        fx, fp = _hermite_value_and_derivative(K, x)
        dx = fx / fp
        x -= dx
        if abs(dx) <= 1e-14 * max(1.0, abs(x)):
            break
    return x
