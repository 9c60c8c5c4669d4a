"""Міри інформації: ентропії Шеннона і Реньї, дивергенції, умовні форми.

Основа логарифма задається LogBase (за замовчуванням біти).
"""

import math
from typing import Sequence, Union

import numpy as np
from scipy.special import logsumexp

from app.constants import RENYI_LIMIT_TOL
from app.exceptions import DistributionError, GuessworkError
from app.models import Channel, JointDistribution, LogBase, Pmf

RowsLike = Union[Channel, Sequence[Sequence[float]], np.ndarray]


def _log(base: LogBase) -> float:
    """ln основи; ділимо на нього натуральні логарифми."""
    return math.log(2) if base is LogBase.BITS else 1.0


def _xlogx_sum(p: np.ndarray) -> float:
    p = p[p > 0]
    return math.fsum((p * np.log(p)).tolist())


def entropy(p: Pmf, base: LogBase = LogBase.BITS) -> float:
    """H(P) = −Σ p log p, 0·log 0 = 0."""
    return max(-_xlogx_sum(p.array) / _log(base), 0.0)


def renyi_entropy(p: Pmf, alpha: float, base: LogBase = LogBase.BITS) -> float:
    """
    H_α(P) = log Σ p^α / (1 − α).
    Поблизу α = 1 повертаємо границю Шеннона замість форми 0/0.
    """
    if not alpha > 0:
        raise GuessworkError(f"Rényi order must be positive, got {alpha}")
    if abs(alpha - 1.0) < RENYI_LIMIT_TOL:
        return entropy(p, base)
    probs = p.array
    support = probs[probs > 0]
    value = logsumexp(alpha * np.log(support)) / (1.0 - alpha)
    return max(float(value) / _log(base), 0.0)


def kl_divergence(p: Pmf, q: Pmf, base: LogBase = LogBase.BITS) -> float:
    """D(P‖Q) = Σ p log(p/q); 0·log(0/q) = 0, p·log(p/0) = +inf при p > 0."""
    if p.alphabet != q.alphabet:
        raise DistributionError("kl_divergence needs distributions over the same alphabet")
    return _kl(p.array, q.array, base)


def _kl(p: np.ndarray, q: np.ndarray, base: LogBase) -> float:
    support = p > 0
    if np.any(q[support] <= 0):
        return math.inf
    ps, qs = p[support], q[support]
    value = math.fsum((ps * (np.log(ps) - np.log(qs))).tolist()) / _log(base)
    return max(value, 0.0)


def _rows(rows: RowsLike) -> np.ndarray:
    if isinstance(rows, Channel):
        return rows.matrix
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2:
        raise DistributionError("conditional rows must form a 2-D table")
    return arr


def conditional_entropy(q_xy: RowsLike, p_y: Pmf, base: LogBase = LogBase.BITS) -> float:
    """Σ_y P(y) H(Q(·|y)): рядок на кожен умовний символ, рядки з нульовою вагою пропускаються."""
    rows = _rows(q_xy)
    weights = p_y.array
    if rows.shape[0] != weights.size:
        raise DistributionError(
            f"conditional_entropy: {rows.shape[0]} rows for {weights.size} conditioning symbols"
        )
    terms = [w * -_xlogx_sum(rows[k]) for k, w in enumerate(weights) if w > 0]
    return max(math.fsum(terms) / _log(base), 0.0)


def weighted_kl(q_yx: RowsLike, p_yx: RowsLike, p_x: Pmf, base: LogBase = LogBase.BITS) -> float:
    """
    Σ_x P(x) D(Q(·|x) ‖ P(·|x)).
    Рядки з нульовою вагою пропускаються; +inf в інших рядках дає +inf.
    """
    q, p = _rows(q_yx), _rows(p_yx)
    weights = p_x.array
    if q.shape != p.shape or q.shape[0] != weights.size:
        raise DistributionError("weighted_kl: channel shapes and prior length must agree")
    if isinstance(q_yx, Channel) and isinstance(p_yx, Channel):
        if q_yx.input != p_yx.input or q_yx.output != p_yx.output:
            raise DistributionError("weighted_kl: channels must share input and output alphabets")
    total = []
    for k, w in enumerate(weights):
        if w <= 0:
            continue
        d = _kl(q[k], p[k], base)
        if math.isinf(d):
            return math.inf
        total.append(w * d)
    return math.fsum(total)


def mutual_information(p_x: Pmf, w: Channel, base: LogBase = LogBase.BITS) -> float:
    joint = JointDistribution.from_channel(p_x, w)
    return max(entropy(joint.x_marginal(), base) - equivocation(p_x, w, base), 0.0)


def equivocation(p_x: Pmf, w: Channel, base: LogBase = LogBase.BITS) -> float:
    """H(X|Y) під спільним розподілом P_X · P_{Y|X}."""
    joint = JointDistribution.from_channel(p_x, w)
    p_y = joint.y_marginal()
    rows = [
        row.array if row is not None else np.zeros(len(p_x)) for row in joint.x_given_y()
    ]
    return conditional_entropy(np.vstack(rows), p_y, base)


def binary_renyi(delta: float, alpha: float, base: LogBase = LogBase.BITS) -> float:
    return renyi_entropy(Pmf.bernoulli(delta), alpha, base)


def binary_shannon(delta: float, base: LogBase = LogBase.BITS) -> float:
    return entropy(Pmf.bernoulli(delta), base)
