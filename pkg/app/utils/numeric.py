# app/utils/numeric.py
"""Лог-домен і дрібні числові помічники (основа 2, якщо не сказано інше)."""

import math
from typing import Iterable

import numpy as np


def log2_sum_exp2(values: Iterable[float]) -> float:
    """
    log2 Σ 2^v зі зсувом на максимум і компенсованим підсумовуванням (math.fsum).
    Порожній набір або всі -inf → -inf.
    """
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    arr = arr[np.isfinite(arr) | (arr > 0)]
    if arr.size == 0:
        return -math.inf
    top = float(arr.max())
    if math.isinf(top):
        return top
    # детермінований порядок доданків незалежно від того, як їх зібрали
    scaled = np.sort(np.exp2(arr - top))
    return top + math.log2(math.fsum(scaled.tolist()))


def safe_log2(values) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log2(np.asarray(values, dtype=float))


def xlog2y(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x·log2(y) з домовленістю 0·log 0 = 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape)
    xb, yb = np.broadcast_arrays(x, y)
    mask = xb > 0
    with np.errstate(divide="ignore"):
        out[mask] = xb[mask] * np.log2(yb[mask])
    return out


def kl_bits(p: np.ndarray, q: np.ndarray) -> float:
    """D(p‖q) у бітах; +inf, якщо p не абсолютно неперервний відносно q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    support = p > 0
    if np.any(q[support] <= 0):
        return math.inf
    return float(math.fsum((p[support] * np.log2(p[support] / q[support])).tolist()))


def binary_kl(lam: float, q: float) -> float:
    """D(Bern(λ)‖Bern(q)) у бітах, неперервно продовжена в λ ∈ {0, 1}."""
    return kl_bits(np.array([1.0 - lam, lam]), np.array([1.0 - q, q]))


def binary_entropy(lam: float) -> float:
    p = np.array([1.0 - lam, lam])
    return float(-xlog2y(p, p).sum())


def shannon_bits(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    return float(-math.fsum(xlog2y(p, p).ravel().tolist()))


def moment_from_log2(log2_moment: float) -> float:
    if log2_moment >= 1024:
        return math.inf
    return math.pow(2.0, log2_moment)
