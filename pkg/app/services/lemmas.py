# app/services/lemmas.py
"""
Скінченні перевірки двох допоміжних тверджень про перебір:
м'яке вилучення (розподіл між рівномірними на N і N−1) та конкатенація
рівномірного блоку з блоком Бернуллі.
"""

import logging
import math
from typing import List, Optional

import numpy as np
from scipy.special import logsumexp

from app.exceptions import CapExceededError, GuessworkError
from app.models import Pmf
from app.schemas import MomentReport, SoftEliminationResult
from app.services.oracle import iid_order
from app.settings import get_settings
from app.utils.numeric import log2_sum_exp2, safe_log2

logger = logging.getLogger(__name__)

_LN2 = math.log(2)


def soft_elimination_probs(n_size: int, k: int) -> List[float]:
    """V_(N,K): 1/(N−1) на перших N−K позиціях, (K−1)/(K(N−1)) на останніх K."""
    if not 2 <= k <= n_size:
        raise GuessworkError(f"soft elimination needs 2 <= K <= N, got N={n_size} K={k}")
    head = 1.0 / (n_size - 1)
    tail = (k - 1) / (k * (n_size - 1))
    probs = [head] * (n_size - k) + [tail] * k
    if abs(math.fsum(probs) - 1.0) > 1e-12:
        raise GuessworkError(f"soft elimination probabilities do not sum to 1 for N={n_size} K={k}")
    return sorted(probs, reverse=True)


def _moment(probs: List[float], rho: float) -> float:
    return math.fsum(p * (i + 1) ** rho for i, p in enumerate(probs))


def soft_elimination_check(n_size: int, k: int, rho: float) -> SoftEliminationResult:
    """
    E[G(U_N)^ρ] > E[G(V)^ρ] ≥ E[G(U_{N−1})^ρ]; при K = N маємо V = U_N і ліва
    нерівність стає рівністю.
    """
    if not rho > 0:
        raise GuessworkError(f"rho must be positive, got {rho}")
    soft = soft_elimination_probs(n_size, k)
    uniform_n = [1.0 / n_size] * n_size
    uniform_prev = [1.0 / (n_size - 1)] * (n_size - 1)

    # різниці рахуємо одним fsum, а не відніманням двох близьких моментів
    left_gap = math.fsum((u - v) * (i + 1) ** rho for i, (u, v) in enumerate(zip(uniform_n, soft)))
    right_gap = math.fsum(
        (v - (uniform_prev[i] if i < n_size - 1 else 0.0)) * (i + 1) ** rho for i, v in enumerate(soft)
    )
    if k == n_size:
        left_ok = left_gap >= -1e-12
    else:
        left_ok = left_gap > 0
    holds = left_ok and right_gap >= -1e-12

    return SoftEliminationResult(
        n_size=n_size,
        k=k,
        rho=rho,
        moment_uniform_n=_moment(uniform_n, rho),
        moment_soft=_moment(soft, rho),
        moment_uniform_n_minus_1=_moment(uniform_prev, rho),
        inequalities_hold=holds,
    )


def concatenation_moment_exact(
    lam: float, p: float, n: int, rho: float, cap: Optional[int] = None
) -> MomentReport:
    """
    Точний момент для X = (U, V), де U рівномірний блок довжини round(λn),
    а V = Bern(p)^{n−m}. Оптимальний список: V-класи за спаданням ймовірності,
    кожен розгорнутий усіма 2^m доповненнями U.
    """
    if not 0.0 <= lam <= 1.0 or not 0.0 <= p <= 1.0:
        raise GuessworkError("lambda and p must be in [0, 1]")
    if n < 1:
        raise GuessworkError(f"n must be at least 1, got {n}")
    if not rho > 0:
        raise GuessworkError(f"rho must be positive, got {rho}")
    cap = cap or get_settings().enumeration_cap
    if 2 ** n > cap:
        raise CapExceededError("enumeration_cap", cap, 2 ** n)

    uniform_len = math.floor(lam * n + 0.5)
    block = 2 ** uniform_len
    rest = n - uniform_len
    if rest > 0:
        v_probs = iid_order(Pmf.bernoulli(p), rest, cap).probs
    else:
        v_probs = np.ones(1)

    # 1. ранги j-го V-класу: (j−1)·2^m + 1 .. j·2^m
    ranks = np.arange(1, v_probs.size * block + 1, dtype=float).reshape(v_probs.size, block)
    log2_block_sums = logsumexp(rho * np.log(ranks), axis=1) / _LN2

    # 2. кожен елемент класу має ймовірність P(v)/2^m
    live = v_probs > 0
    terms = safe_log2(v_probs[live]) - uniform_len + log2_block_sums[live]
    log2_moment = max(log2_sum_exp2(terms), 0.0)
    logger.info("lemma.concatenation lam=%g p=%g n=%d m=%d log2_moment=%.12g", lam, p, n, uniform_len, log2_moment)
    return MomentReport.from_log2(n=n, rho=rho, log2_moment=log2_moment, strategy="concatenation")
