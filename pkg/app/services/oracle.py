"""
Точні моменти перебору повним переліком послідовностей (малі n).

Це еталон: або рахує точно, або відмовляє через перевищення ліміту.
Правило нічиїх скрізь одне: ймовірність за спаданням, далі лексикографічно.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from app.exceptions import CapExceededError, DistributionError, GuessworkError
from app.models import Channel, Pmf
from app.schemas import MomentReport
from app.services.channels import product_channel, trivial
from app.services.ranking import TypeOrder
from app.settings import get_settings
from app.utils.numeric import log2_sum_exp2, safe_log2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GuessOrder:
    """Порядок вгадування: лексикографічні індекси послідовностей, від найімовірнішої."""

    n: int
    order: np.ndarray
    probs: np.ndarray
    labels: tuple

    def ranks(self) -> np.ndarray:
        """ranks[i]: позиція (з 1) послідовності з лексикографічним індексом i."""
        out = np.empty(self.order.size, dtype=np.int64)
        out[self.order] = np.arange(1, self.order.size + 1)
        return out

    def sequence_labels(self) -> List[str]:
        return [self.labels[i] for i in self.order]


def _check_rho(rho: float) -> None:
    if not rho > 0:
        raise GuessworkError(f"rho must be positive, got {rho}")


def _check_cap(name: str, required: int, cap: Optional[int], hint: str = "") -> int:
    cap = cap or get_settings().enumeration_cap
    if required > cap:
        raise CapExceededError(name, cap, required, hint)
    return cap


def optimal_order(p_seq: Pmf, n: int = 1, cap: Optional[int] = None) -> GuessOrder:
    """
    Сортує алфавіт послідовностей за спаданням ймовірності; нічиї розбиваються за порядком алфавіту.
    Нічия тут означає побітово рівні float-и (див. product_pmf).
    """
    _check_cap("enumeration_cap", len(p_seq), cap)
    probs = p_seq.array
    order = np.lexsort((np.arange(probs.size), -probs))
    return GuessOrder(n=n, order=order, probs=probs[order], labels=p_seq.alphabet.symbols)


class _Enumerator:
    """Усі x ∈ 𝒳^n у лексикографічному порядку і ранги для заданого y."""

    def __init__(self, p_x: Pmf, w: Channel, n: int):
        if p_x.alphabet != w.input:
            raise DistributionError("prior alphabet does not match the channel input alphabet")
        if n < 1:
            raise GuessworkError(f"n must be at least 1, got {n}")
        self.n = n
        self.nx, self.ny = len(w.input), len(w.output)
        self.xs = np.indices((self.nx,) * n).reshape(n, -1).T
        self.size = self.xs.shape[0]
        self.log2_px = safe_log2(p_x.array)[self.xs].sum(axis=1)
        self.log2_w = safe_log2(w.matrix)
        self.order = TypeOrder(p_x.array, w.matrix)
        self.x_labels = p_x.alphabet.power(n).symbols

    def y_sequences(self):
        return np.indices((self.ny,) * self.n).reshape(self.n, -1).T

    def ranks_for(self, y: np.ndarray) -> np.ndarray:
        cells = self.xs * self.ny + y[None, :]
        counts = np.stack([(cells == c).sum(axis=1) for c in range(self.nx * self.ny)], axis=1)
        uniq, inverse = np.unique(counts, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        run_of_type = np.asarray(self.order.run_ids(tuple(map(tuple, uniq.tolist()))))
        runs = run_of_type[inverse]
        order = np.lexsort((np.arange(self.size), runs))
        ranks = np.empty(self.size, dtype=np.int64)
        ranks[order] = np.arange(1, self.size + 1)
        return ranks

    def log2_channel(self, y: np.ndarray) -> np.ndarray:
        """log2 W(y|x) для всіх x."""
        return self.log2_w[self.xs, y[None, :]].sum(axis=1)


def iid_order(p_x: Pmf, n: int, cap: Optional[int] = None) -> GuessOrder:
    """Оптимальний порядок для P_X^n з точним розпізнаванням нічиїх через типи."""
    _check_cap("enumeration_cap", len(p_x) ** n, cap)
    enum = _Enumerator(p_x, trivial(p_x.alphabet), n)
    ranks = enum.ranks_for(np.zeros(n, dtype=np.int64))
    order = np.argsort(ranks)
    probs = np.exp2(enum.log2_px)[order]
    return GuessOrder(n=n, order=order, probs=probs, labels=enum.x_labels)


def rank_table(p_x: Pmf, w: Channel, n: int, cap: Optional[int] = None) -> np.ndarray:
    """Матриця рангів G*(x|y): рядок на кожен x, стовпець на кожен y, обидва в лексикографічному порядку."""
    nx, ny = len(w.input), len(w.output)
    _check_cap("enumeration_cap", nx ** n * ny ** n, cap)
    enum = _Enumerator(p_x, w, n)
    ys = enum.y_sequences()
    table = np.empty((enum.size, ys.shape[0]), dtype=np.int64)
    for j, y in enumerate(ys):
        table[:, j] = enum.ranks_for(y)
    return table


def _report(log2_moment: float, n: int, rho: float, strategy: str, m: int = 1) -> MomentReport:
    # момент ≥ 1; відкидаємо лише шум округлення під нулем
    if -1e-12 < log2_moment < 0:
        log2_moment = 0.0
    return MomentReport.from_log2(n=n, rho=rho, log2_moment=log2_moment, strategy=strategy, m=m)


def moment_exact(p_x: Pmf, n: int, rho: float, cap: Optional[int] = None) -> MomentReport:
    _check_rho(rho)
    report = conditional_moment_exact(p_x, trivial(p_x.alphabet), n, rho, cap)
    return report.model_copy(update={"strategy": "none"})


def conditional_moment_exact(
    p_x: Pmf, w: Channel, n: int, rho: float, cap: Optional[int] = None
) -> MomentReport:
    """Σ_y Σ_x P(x, y) · G*(x|y)^ρ з окремим оптимальним списком для кожного y."""
    _check_rho(rho)
    nx, ny = len(w.input), len(w.output)
    _check_cap("enumeration_cap", nx ** n * ny ** n, cap)
    enum = _Enumerator(p_x, w, n)

    per_y = []
    for y in enum.y_sequences():
        log2_joint = enum.log2_px + enum.log2_channel(y)
        live = np.isfinite(log2_joint)
        if not live.any():
            continue
        ranks = enum.ranks_for(y)
        per_y.append(log2_sum_exp2(log2_joint[live] + rho * np.log2(ranks[live])))

    log2_moment = log2_sum_exp2(per_y)
    logger.info("oracle.conditional n=%d nx=%d ny=%d rho=%g log2_moment=%.12g", n, nx, ny, rho, log2_moment)
    return _report(log2_moment, n, rho, "single")


def centralized_moment_exact(
    p_x: Pmf,
    w: Channel,
    n: int,
    m: int,
    rho: float,
    cap: Optional[int] = None,
    product_cap: Optional[int] = None,
) -> MomentReport:
    pooled = product_channel(w, m, product_cap)
    report = conditional_moment_exact(p_x, pooled, n, rho, cap)
    return report.model_copy(update={"strategy": "centralized", "m": m})


def decentralized_moment_exact(
    p_x: Pmf, w: Channel, n: int, m: int, rho: float, cap: Optional[int] = None
) -> MomentReport:
    """
    E[min_i G*(X|Y_i)^ρ]. Агенти умовно незалежні при фіксованому x, тому
    P(min ≥ k | x) = S_x(k)^m, де S_x(k) = P(G*(x|Y) ≥ k | x); цього досить
    для точного значення без перебору m-кортежів y.
    """
    _check_rho(rho)
    if m < 1:
        raise GuessworkError(f"m must be at least 1, got {m}")
    nx, ny = len(w.input), len(w.output)
    _check_cap("enumeration_cap", nx ** n * ny ** n, cap, "use simulate for larger n")
    enum = _Enumerator(p_x, w, n)
    ys = enum.y_sequences()

    ranks = np.empty((enum.size, ys.shape[0]), dtype=np.int64)
    weights = np.empty((enum.size, ys.shape[0]), dtype=float)
    for j, y in enumerate(ys):
        ranks[:, j] = enum.ranks_for(y)
        weights[:, j] = np.exp2(enum.log2_channel(y))

    # 1. для кожного x сортуємо ранги і рахуємо хвости S(k)
    order = np.argsort(ranks, axis=1, kind="stable")
    sorted_ranks = np.take_along_axis(ranks, order, axis=1)
    sorted_w = np.take_along_axis(weights, order, axis=1)
    tail = np.cumsum(sorted_w[:, ::-1], axis=1)[:, ::-1]
    tail_next = np.concatenate([tail[:, 1:], np.zeros((enum.size, 1))], axis=1)

    # 2. P(min = r) телескопується всередині групи однакових рангів
    mass = np.power(tail, m) - np.power(tail_next, m)
    live = (mass > 0) & np.isfinite(enum.log2_px)[:, None]
    terms = enum.log2_px[:, None] + rho * np.log2(sorted_ranks) + safe_log2(np.where(live, mass, 1.0))
    log2_moment = log2_sum_exp2(terms[live])
    logger.info("oracle.decentralized n=%d m=%d rho=%g log2_moment=%.12g", n, m, rho, log2_moment)
    return _report(log2_moment, n, rho, "decentralized", m)


def moment_of_order(order: GuessOrder, rho: float) -> float:
    """Σ_i P(i-та послідовність)·i^ρ для явного порядку."""
    positions = np.arange(1, order.order.size + 1, dtype=float)
    live = order.probs > 0
    return 2.0 ** log2_sum_exp2(safe_log2(order.probs[live]) + rho * np.log2(positions[live]))


def single_letter_bounds(p_x: Pmf, rho: float) -> tuple:
    """
    Нижня і верхня межі для n = 1:
    (1 + ln|𝒳|)^{-ρ}·(Σ P^{1/(1+ρ)})^{1+ρ} ≤ E[G*^ρ] ≤ (Σ P^{1/(1+ρ)})^{1+ρ}.
    """
    probs = p_x.array
    upper = math.fsum((probs[probs > 0] ** (1.0 / (1.0 + rho))).tolist()) ** (1.0 + rho)
    lower = upper * (1.0 + math.log(len(p_x))) ** (-rho)
    return lower, upper
