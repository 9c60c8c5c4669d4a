"""
Порогова задача на типах і загальний DMC-показник для децентралізованої атаки.

solve_threshold: мінімум лінійного функціоналу −Σ_y P̂(y) Σ_x Q(x|y) log P(x|y)
при обмеженні H(Q|P̂_Y) ≥ α. Розв'язок лежить у нахиленій сім'ї Q_s ∝ P^s,
H(Q_s) не зростає по s, тож достатньо одновимірного пошуку.
"""

import logging
import math
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq, minimize
from scipy.special import softmax

from app.constants import (
    DMC_GRID_POINTS,
    DMC_MAX_ALPHABET,
    DMC_MAX_RESOLUTION,
    DMC_REFINE_TOP,
)
from app.exceptions import CapExceededError, DistributionError, GuessworkError, InfeasibleError, ResolutionError
from app.models import Channel, LogBase, Pmf
from app.schemas import ExponentResult, Maximizer, TiltedSolution
from app.services.channels import posterior_rows
from app.utils.combinatorics import composition_count, compositions

logger = logging.getLogger(__name__)

_LN2 = math.log(2)
_S_MAX = 2.0 ** 60
_FLAT = 1e-13  # різниця ентропій/функціоналів, нижче якої вважаємо рівність


class TiltedFamily:
    """Q_s(x|y) ∝ P(x|y)^s на носії кожного рядка; при s = inf рівномірний на argmax."""

    def __init__(self, weights: np.ndarray, posterior: np.ndarray):
        live = weights > 0
        self.weights = weights[live]
        self.live = live
        with np.errstate(divide="ignore"):
            self.log_post = np.log(posterior[live])
        self.support = np.isfinite(self.log_post)
        row_max = np.max(np.where(self.support, self.log_post, -np.inf), axis=1, keepdims=True)
        self.argmax = self.support & (self.log_post >= row_max)

    def rows(self, s: float) -> np.ndarray:
        if math.isinf(s):
            mask = self.argmax
            return mask / mask.sum(axis=1, keepdims=True)
        logits = np.where(self.support, s * np.where(self.support, self.log_post, 0.0), -np.inf)
        return softmax(logits, axis=1)

    def entropy(self, s: float) -> float:
        """H(Q_s | P̂_Y) у натах."""
        q = self.rows(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -np.where(q > 0, q * np.log(q), 0.0).sum(axis=1)
        return float(np.dot(self.weights, h))

    def objective(self, s: float) -> float:
        """−Σ P̂(y) Σ Q_s log P у натах (скінченний, бо Q_s живе на носії)."""
        q = self.rows(s)
        lin = -np.where(q > 0, q * np.where(self.support, self.log_post, 0.0), 0.0).sum(axis=1)
        return float(np.dot(self.weights, lin))

    def s_upper(self, predicate) -> float:
        """Найменше s = 2^k, для якого predicate(s) істинний (або _S_MAX)."""
        s = 1.0
        while s < _S_MAX and not predicate(s):
            s *= 2.0
        return s


def _posterior_table(p_hat_y: Pmf, rows: Union[Channel, np.ndarray, List[List[float]]]) -> np.ndarray:
    table = rows.matrix if isinstance(rows, Channel) else np.asarray(rows, dtype=float)
    if table.ndim != 2 or table.shape[0] != len(p_hat_y):
        raise DistributionError("posterior rows must have one row per output symbol")
    for k, weight in enumerate(p_hat_y.array):
        if weight > 0 and (np.any(table[k] < 0) or abs(math.fsum(table[k].tolist()) - 1.0) > 1e-9):
            raise DistributionError(f"posterior row {k} is not a distribution")
    return table


def solve_threshold(
    alpha: float,
    p_hat_y: Pmf,
    p_xy_posterior: Union[Channel, np.ndarray, List[List[float]]],
    base: LogBase = LogBase.BITS,
) -> TiltedSolution:
    """
    Розв'язує порогову задачу для α у вибраній основі логарифма.

    1. α > log|𝒳| → InfeasibleError.
    2. Вершина (рівномірний на argmax кожного рядка) вже задовольняє обмеження → повертаємо її.
    3. α більше за максимальну ентропію на носіях → будь-яке допустиме Q виходить за носій,
       функціонал +inf, повертаємо рівномірний Q.
    4. Інакше бісекція (brentq) по s: H(Q_s) = α.
    """
    table = _posterior_table(p_hat_y, p_xy_posterior)
    unit = _LN2 if base is LogBase.BITS else 1.0
    nx = table.shape[1]
    alpha_nats = alpha * unit
    if alpha < 0:
        raise GuessworkError(f"alpha must be nonnegative, got {alpha}")
    if alpha_nats > math.log(nx) + 1e-12:
        raise InfeasibleError(f"alpha={alpha} exceeds log|X| = {math.log(nx) / unit}")

    family = TiltedFamily(p_hat_y.array, table)

    def _solution(s: float, q_live: np.ndarray, h: float, objective: float) -> TiltedSolution:
        full = np.full((len(p_hat_y), nx), 1.0 / nx)
        full[family.live] = q_live
        return TiltedSolution(s=s, q=full.tolist(), achieved_h=h / unit, objective=objective / unit)

    h_vertex = family.entropy(math.inf)
    if alpha_nats <= h_vertex + _FLAT:
        return _solution(math.inf, family.rows(math.inf), h_vertex, family.objective(math.inf))

    h_zero = family.entropy(0.0)
    if alpha_nats > h_zero + _FLAT:
        uniform = np.full((int(family.live.sum()), nx), 1.0 / nx)
        return _solution(0.0, uniform, math.log(nx), math.inf)

    s_hi = family.s_upper(lambda s: family.entropy(s) < alpha_nats)
    if family.entropy(s_hi) >= alpha_nats:
        s = s_hi
    else:
        s = brentq(lambda t: family.entropy(t) - alpha_nats, 0.0, s_hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return _solution(s, family.rows(s), family.entropy(s), family.objective(s))


def alpha_star(q_joint: np.ndarray, true_posterior: np.ndarray) -> float:
    """
    Найбільше α (у натах), для якого умовний тип Q̂_{X|Y} ще не потрапляє
    в перші exp(nα) вгадувань: F(Q̂) ≥ поріг(α). Поріг монотонний по α,
    тож α* = H(Q_{s*}), де s* є найменшим s з F(Q_s) ≤ F(Q̂).
    """
    q_y = q_joint.sum(axis=0)
    live = q_y > 0
    family = TiltedFamily(q_y, true_posterior)
    cond = (q_joint[:, live] / q_y[live]).T
    with np.errstate(divide="ignore", invalid="ignore"):
        f_hat = float(np.dot(family.weights, -np.where(cond > 0, cond * family.log_post, 0.0).sum(axis=1)))

    f_zero = family.objective(0.0)
    if f_hat >= f_zero - _FLAT:
        return family.entropy(0.0)
    f_vertex = family.objective(math.inf)
    if f_hat <= f_vertex + _FLAT:
        return family.entropy(math.inf)
    s_hi = family.s_upper(lambda s: family.objective(s) <= f_hat)
    if family.objective(s_hi) > f_hat:
        return family.entropy(s_hi)
    s = brentq(lambda t: family.objective(t) - f_hat, 0.0, s_hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return family.entropy(s)


class _DmcObjective:
    """ρα*(Q̂) − D(Q̂_X‖P_X) − m·D(Q̂_{Y|X}‖P_{Y|X}|Q̂_X) у бітах; Q̂ лише на носії P_X·w."""

    def __init__(self, p_x: Pmf, w: Channel, m: int, rho: float):
        self.p_x = p_x.array
        self.w = w.matrix
        self.m, self.rho = m, rho
        self.shape = self.w.shape
        joint = self.p_x[:, None] * self.w
        self.cells = np.flatnonzero(joint.ravel() > 0)
        _, self.posterior = posterior_rows(p_x, w)
        with np.errstate(divide="ignore"):
            self.log_px = np.log(self.p_x)
            self.log_w = np.log(self.w)

    def joint(self, weights: np.ndarray) -> np.ndarray:
        full = np.zeros(self.shape[0] * self.shape[1])
        full[self.cells] = weights
        return full.reshape(self.shape)

    def __call__(self, weights: np.ndarray) -> Tuple[float, float]:
        q = self.joint(weights)
        q_x = q.sum(axis=1)
        live = q > 0
        # D(Q̂_{X,Y} ‖ Q̂_X·w) у натах = Σ q log(q / (q_x w))
        with np.errstate(divide="ignore", invalid="ignore"):
            cond_kl = np.where(live, q * (np.log(q) - np.log(q_x)[:, None] - self.log_w), 0.0).sum()
            marg_kl = np.where(q_x > 0, q_x * (np.log(q_x) - self.log_px), 0.0).sum()
        a_star = alpha_star(q, self.posterior)
        value = (self.rho * a_star - marg_kl - self.m * cond_kl) / _LN2
        return float(value), a_star / _LN2


def _grid_size(cells: int, budget: int) -> int:
    steps = 1
    while composition_count(cells, steps + 1) <= budget:
        steps += 1
    return steps


def dmc_decentralized_exponent(
    p_x: Pmf,
    w: Channel,
    m: int,
    rho: float,
    resolution: float = 1e-3,
    base: LogBase = LogBase.BITS,
    grid_points: Optional[int] = None,
) -> ExponentResult:
    """
    Загальний показник децентралізованої атаки для довільного DMC (малі алфавіти).

    1. Груба сітка по симплексу спільних типів Q̂ (носій P_X·w, серед рівних кращий той, що має менший індекс).
    2. Кілька найкращих точок уточнюємо Nelder–Mead у softmax-логітах з xatol = resolution.
    α не перебирається окремо: при фіксованому Q̂ ціль зростає по α, тож береться α*(Q̂).
    """
    if p_x.alphabet != w.input:
        raise DistributionError("prior alphabet does not match the channel input alphabet")
    if not rho > 0 or m < 1:
        raise GuessworkError("rho must be positive and m at least 1")
    largest = max(len(w.input), len(w.output))
    if largest > DMC_MAX_ALPHABET:
        raise CapExceededError("dmc_alphabet", DMC_MAX_ALPHABET, largest)
    if not 0 < resolution <= DMC_MAX_RESOLUTION:
        raise ResolutionError(resolution)

    objective = _DmcObjective(p_x, w, m, rho)
    k = objective.cells.size
    if k == 1:
        value, a_star = objective(np.ones(1))
        return ExponentResult(
            value=base.from_bits(max(value, 0.0)),
            method="type-grid",
            base=base,
            maximizer=Maximizer(alpha_star=base.from_bits(a_star), joint=objective.joint(np.ones(1)).tolist()),
        )
    steps = _grid_size(k, grid_points or DMC_GRID_POINTS)
    spacing = 1.0 / steps
    if spacing > 2.5 * DMC_MAX_RESOLUTION:
        raise ResolutionError(spacing)

    # 1. груба сітка (плюс справжній спільний розподіл як додатковий кандидат)
    candidates = [np.asarray(c, dtype=float) / steps for c in compositions(k, steps)]
    candidates.append((objective.p_x[:, None] * objective.w).ravel()[objective.cells])
    values = np.array([objective(c)[0] for c in candidates])
    top = np.argsort(-values, kind="stable")[:DMC_REFINE_TOP]
    logger.info("dmc.grid cells=%d steps=%d points=%d best=%.9g", k, steps, len(candidates), values[top[0]])

    # 2. локальне уточнення
    best_value, best_weights = float(values[top[0]]), candidates[top[0]]
    for i in top:
        start = np.log(np.maximum(candidates[i], 1e-6))
        result = minimize(
            lambda z: -objective(softmax(z))[0],
            start,
            method="Nelder-Mead",
            options={"xatol": resolution, "fatol": 1e-12, "maxiter": 400 * k, "maxfev": 400 * k},
        )
        refined = softmax(result.x)
        value = objective(refined)[0]
        if value > best_value:
            best_value, best_weights = value, refined

    value, a_star = objective(best_weights)
    logger.info("dmc.refined m=%d rho=%g value=%.9g alpha_star=%.6g", m, rho, value, a_star)
    return ExponentResult(
        value=base.from_bits(max(value, 0.0)),
        method="type-grid",
        base=base,
        maximizer=Maximizer(
            alpha_star=base.from_bits(a_star),
            joint=objective.joint(best_weights).tolist(),
            extras={"grid_spacing": spacing},
        ),
    )


def tilted_entropy_curve(p_hat_y: Pmf, p_xy_posterior, s_values) -> List[Tuple[float, float]]:
    """(s, H(Q_s)) у бітах; для діагностики монотонності."""
    family = TiltedFamily(p_hat_y.array, _posterior_table(p_hat_y, p_xy_posterior))
    return [(float(s), family.entropy(float(s)) / _LN2) for s in s_values]
