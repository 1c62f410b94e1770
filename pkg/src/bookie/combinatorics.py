"""Factorial operators, Stirling numbers, and elementary symmetric polynomials.

Everything here is generic over the scalar type: pass floats for fast
arithmetic, or ints / `fractions.Fraction` for exact results.  The exact
path is what the identity test suites run on, so none of these functions
may introduce rounding of their own.
"""
from __future__ import annotations

import math
import threading
from typing import Sequence

Matrix = list[list]


def binomial(n: int, k: int) -> int:
    """C(n, k) for integer n >= 0; zero outside the triangle."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling_factorial(x, m: int):
    """x (x-1) ... (x-m+1); the empty product (m=0) is 1."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = 1
    for i in range(m):
        out = out * (x - i)
    return out


def rising_factorial(x, m: int):
    """x (x+1) ... (x+m-1); the empty product (m=0) is 1."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = 1
    for i in range(m):
        out = out * (x + i)
    return out


class _StirlingTable:
    """Triangular table of unsigned Stirling numbers of the first kind.

    Built once up to ``n_max`` and read-only afterwards; values beyond the
    table are computed on demand (Python ints, so no overflow) and cached.
    """

    def __init__(self, n_max: int = 64):
        self.n_max = n_max
        rows: list[list[int]] = [[1]]
        for n in range(1, n_max + 1):
            prev = rows[-1]
            row = [0] * (n + 1)
            for k in range(1, n + 1):
                # c(n, k) = (n-1) c(n-1, k) + c(n-1, k-1)
                above = prev[k] if k < len(prev) else 0
                row[k] = (n - 1) * above + prev[k - 1]
            rows.append(row)
        self._rows = rows
        self._overflow: dict[tuple[int, int], int] = {}
        self._lock = threading.Lock()

    def unsigned(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        if n <= self.n_max:
            return self._rows[n][k]
        key = (n, k)
        with self._lock:
            if key in self._overflow:
                return self._overflow[key]
        # iterate rows upward from the prebuilt table
        row = self._rows[self.n_max][:]
        for m in range(self.n_max + 1, n + 1):
            nxt = [0] * (m + 1)
            for j in range(1, m + 1):
                above = row[j] if j < len(row) else 0
                nxt[j] = (m - 1) * above + row[j - 1]
            row = nxt
        val = row[k]
        with self._lock:
            self._overflow[key] = val
        return val


_TABLE = _StirlingTable()


def stirling_first_unsigned(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind c(n, k)."""
    return _TABLE.unsigned(n, k)


def stirling_first_signed(n: int, k: int) -> int:
    """Signed Stirling number s(n, k) = (-1)^(n-k) c(n, k).

    Out-of-range pairs return 0, matching the recurrence base cases.
    """
    c = _TABLE.unsigned(n, k)
    if c == 0:
        return 0
    return c if (n - k) % 2 == 0 else -c


def esp_all(v: Sequence) -> list:
    """All elementary symmetric polynomials sigma_0..sigma_K of v.

    Computed by expanding the running product of (1 + v[k] t); O(K^2) and
    exact for int/Fraction input.  sigma_0 is always 1.
    """
    sig: list = [1] + [0] * len(v)
    top = 0
    for x in v:
        top += 1
        for m in range(top, 0, -1):
            sig[m] = sig[m] + x * sig[m - 1]
    return sig


def esp_partial_matrix(v: Sequence) -> Matrix:
    """K x K matrix A with A[k][m] = sigma_m(v without coordinate k).

    Columns follow the recurrence a_{m+1} = sigma_m(v) - v * a_m, so the
    whole matrix costs O(K^2).  Row k lists sigma_0..sigma_{K-1} of the
    reduced vector; column 0 is all ones.
    """
    K = len(v)
    sig = esp_all(v)
    rows: Matrix = [[1] * K for _ in range(K)]
    col = [1] * K
    for m in range(1, K):
        col = [sig[m] - v[k] * col[k] for k in range(K)]
        for k in range(K):
            rows[k][m] = col[k]
    return rows


def esp_shifted(x: Sequence, t) -> list:
    """sigma_n(t*1 - x) for n = 0..K via the binomial expansion in sigma(x)."""
    K = len(x)
    sx = esp_all(x)
    out = []
    for n in range(K + 1):
        acc = 0
        for i in range(n + 1):
            term = sx[i] * binomial(K - i, n - i) * t ** (n - i)
            acc = acc + (-term if i % 2 else term)
        out.append(acc)
    return out
