"""Hadamard matrices of the orders used by the autoregressive fixtures."""

from __future__ import annotations

import numpy as np

SUPPORTED_ORDERS = (1, 2, 4, 8, 12)

_PALEY_PRIME = 11  # order 12 = 11 + 1


def _legendre_symbol(a: int, q: int) -> int:
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def _paley_12() -> np.ndarray:
    # Quadratic-residue (Jacobsthal) core bordered by a row/column of ones,
    # plus the identity; valid because 11 = 4*2 + 3 is prime.
    q = _PALEY_PRIME
    core = np.empty((q, q), dtype=np.int64)
    for i in range(q):
        for j in range(q):
            core[i, j] = _legendre_symbol(i - j, q)
    h = np.zeros((q + 1, q + 1), dtype=np.int64)
    h[0, 1:] = 1
    h[1:, 0] = -1
    h[1:, 1:] = core
    h += np.eye(q + 1, dtype=np.int64)
    return h


def hadamard(p: int) -> np.ndarray:
    """Integer Hadamard matrix of order p; ``H @ H.T == p * I`` exactly.

    Orders 1, 2, 4, 8 come from Sylvester doubling and order 12 from the
    Paley construction on the prime 11.
    """
    if p not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported Hadamard order {p}; supported: {SUPPORTED_ORDERS}")
    if p == 12:
        h = _paley_12()
    else:
        h = np.array([[1]], dtype=np.int64)
        while h.shape[0] < p:
            h = np.block([[h, h], [h, -h]])
    if not np.array_equal(h @ h.T, p * np.eye(p, dtype=np.int64)):
        raise AssertionError(f"Hadamard construction failed for order {p}")
    return h
