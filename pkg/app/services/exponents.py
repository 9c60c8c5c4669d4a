"""
Асимптотичні показники перебору (біти за замовчуванням).

Кожна закрита формула, що має скалярну варіаційну форму, перевіряється
оптимізатором (сітка 1e-3 + золотий перетин до 1e-10); розбіжність понад
AGREEMENT_TOL означає помилку в основі логарифма чи конвенції і піднімає
OptimizerDisagreementError.
"""

import logging
import math
from typing import Callable, List, Optional

import numpy as np
from scipy.special import logsumexp

from app.constants import AGREEMENT_TOL
from app.exceptions import GuessworkError, OptimizerDisagreementError
from app.models import Channel, LogBase, Pmf
from app.schemas import ExponentResult, Maximizer, SweepRow
from app.services.channels import bsc, product_channel
from app.services.information import binary_renyi, equivocation, renyi_entropy
from app.services.threshold import dmc_decentralized_exponent
from app.utils.numeric import binary_entropy, binary_kl
from app.utils.optimize import ScalarOptimum, maximize_scalar

logger = logging.getLogger(__name__)

_LN2 = math.log(2)


def _check_rho(rho: float) -> None:
    if not rho > 0:
        raise GuessworkError(f"rho must be positive, got {rho}")


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise GuessworkError(f"{name} must be in [0, 1], got {value}")


def _check_m(m: int) -> None:
    if m < 1:
        raise GuessworkError(f"m must be at least 1, got {m}")


def _cross_check(name: str, closed: float, optimum: ScalarOptimum) -> None:
    if abs(closed - optimum.value) > AGREEMENT_TOL:
        raise OptimizerDisagreementError(name, closed, optimum.value)


def legendre_binary(rho: float, q: float) -> float:
    """sup_λ [ρλ − D(λ‖q)] = log2(1 − q + q·2^ρ)."""
    return math.log2(1.0 - q + q * 2.0 ** rho)


def arikan_exponent(p_x: Pmf, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    _check_rho(rho)
    value = rho * renyi_entropy(p_x, 1.0 / (1.0 + rho))
    return ExponentResult(value=base.from_bits(value), method="closed-form", closed_form=base.from_bits(value), base=base)


def conditional_exponent(p_x: Pmf, w: Channel, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    """
    log Σ_y (Σ_x P(x, y)^{1/(1+ρ)})^{1+ρ}. Для симетричних каналів це
    ρ Σ_y P_Y(y) H_{1/(1+ρ)}(P_{X|Y}(·|y)); для BEC дає log2(1 − ε + ε·2^ρ).
    """
    _check_rho(rho)
    if p_x.alphabet != w.input:
        raise GuessworkError("prior alphabet does not match the channel input alphabet")
    with np.errstate(divide="ignore"):
        log_joint = np.log(p_x.array)[:, None] + np.log(w.matrix)
    inner = logsumexp(log_joint / (1.0 + rho), axis=0)
    live = np.isfinite(inner)
    value = float(logsumexp((1.0 + rho) * inner[live])) / _LN2
    value = max(value, 0.0)
    return ExponentResult(value=base.from_bits(value), method="closed-form", closed_form=base.from_bits(value), base=base)


def centralized_exponent(p_x: Pmf, w: Channel, m: int, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    """Об'єднання всіх m спостережень = умовний показник каналу-добутку."""
    _check_m(m)
    return conditional_exponent(p_x, product_channel(w, m), rho, base)


def bec_centralized_exponent(epsilon: float, m: int, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    _check_unit("epsilon", epsilon)
    _check_m(m)
    _check_rho(rho)
    q = epsilon ** m
    closed = legendre_binary(rho, q)
    optimum = maximize_scalar(lambda lam: rho * lam - binary_kl(lam, q), 0.0, 1.0)
    _cross_check("bec_centralized_exponent", closed, optimum)
    return ExponentResult(
        value=base.from_bits(optimum.value),
        method="scalar-optimize",
        closed_form=base.from_bits(closed),
        base=base,
        maximizer=Maximizer(lambda_star=optimum.x, extras={"erasure_all": q}),
    )


def bsc_centralized_exponent_m2(delta: float, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    """
    Два BSC-спостереження: незгода (ймовірність q = 2δ(1−δ)) діє як стирання,
    згода діє як BSC(δ̃) з δ̃ = δ²/(δ² + (1−δ)²). λ позначає частку незгод.
    """
    _check_unit("delta", delta)
    _check_rho(rho)
    q = 2.0 * delta * (1.0 - delta)
    agree = delta ** 2 + (1.0 - delta) ** 2
    delta_tilde = delta ** 2 / agree
    h = binary_renyi(delta_tilde, 1.0 / (1.0 + rho))

    closed = math.log2((1.0 - q) * 2.0 ** (rho * h) + q * 2.0 ** rho)
    optimum = maximize_scalar(lambda lam: rho * lam + rho * (1.0 - lam) * h - binary_kl(lam, q), 0.0, 1.0)
    _cross_check("bsc_centralized_exponent_m2", closed, optimum)
    return ExponentResult(
        value=base.from_bits(optimum.value),
        method="scalar-optimize",
        closed_form=base.from_bits(closed),
        base=base,
        maximizer=Maximizer(lambda_star=optimum.x, extras={"disagreement": q, "delta_tilde": delta_tilde}),
    )


def majority_error(delta: float, m: int) -> float:
    """δ_m = P(Bin(m, δ) > m/2) + ½·P(Bin(m, δ) = m/2)."""
    _check_unit("delta", delta)
    _check_m(m)
    terms = [math.comb(m, k) * delta ** k * (1.0 - delta) ** (m - k) for k in range(m // 2 + 1, m + 1)]
    if m % 2 == 0:
        terms.append(0.5 * math.comb(m, m // 2) * (delta * (1.0 - delta)) ** (m // 2))
    return min(math.fsum(terms), 1.0)


def majority_collapse_bound(delta: float, m: int, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    """Верхня межа централізованого показника: умовний показник BSC(δ_m) для більшості голосів."""
    _check_rho(rho)
    delta_m = majority_error(delta, m)
    bound = conditional_exponent(Pmf.uniform(2), bsc(delta_m), rho, base)
    return bound.model_copy(update={"is_bound": True, "maximizer": Maximizer(extras={"delta_m": delta_m})})


def bec_decentralized_exponent(epsilon: float, m: int, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    _check_unit("epsilon", epsilon)
    _check_m(m)
    _check_rho(rho)
    closed = m * legendre_binary(rho / m, epsilon)
    optimum = maximize_scalar(lambda lam: rho * lam - m * binary_kl(lam, epsilon), 0.0, 1.0)
    _cross_check("bec_decentralized_exponent", closed, optimum)
    return ExponentResult(
        value=base.from_bits(optimum.value),
        method="scalar-optimize",
        closed_form=base.from_bits(closed),
        base=base,
        maximizer=Maximizer(lambda_star=optimum.x),
    )


def bsc_decentralized_exponent(delta: float, m: int, rho: float, base: LogBase = LogBase.BITS) -> ExponentResult:
    """ρ·H_{m/(m+ρ)}(δ); збігається з sup_λ [ρH(λ) − m·D(λ‖δ)]."""
    _check_unit("delta", delta)
    _check_m(m)
    _check_rho(rho)
    closed = rho * binary_renyi(delta, m / (m + rho))
    optimum = maximize_scalar(lambda lam: rho * binary_entropy(lam) - m * binary_kl(lam, delta), 0.0, 1.0)
    _cross_check("bsc_decentralized_exponent", closed, optimum)
    return ExponentResult(
        value=base.from_bits(closed),
        method="closed-form",
        closed_form=base.from_bits(closed),
        base=base,
        maximizer=Maximizer(lambda_star=optimum.x),
    )


def decentralized_limit(p_x: Pmf, w: Channel, rho: float = 1.0, base: LogBase = LogBase.BITS) -> float:
    """ρ·H(X|Y): межа децентралізованого показника при m → ∞."""
    _check_rho(rho)
    return rho * equivocation(p_x, w, base)


def concatenation_exponent(lam: float, p: float, rho: float, base: LogBase = LogBase.BITS) -> float:
    """λρ + (1−λ)·ρ·H_{1/(1+ρ)}(p): рівномірний блок частки λ, решта Bern(p)."""
    _check_unit("lambda", lam)
    _check_unit("p", p)
    _check_rho(rho)
    return base.from_bits(lam * rho + (1.0 - lam) * rho * binary_renyi(p, 1.0 / (1.0 + rho)))


def exponent_for(
    family: str,
    strategy: str,
    m: int,
    rho: float,
    param: Optional[float] = None,
    p_x: Optional[Pmf] = None,
    w: Optional[Channel] = None,
    resolution: float = 1e-3,
    base: LogBase = LogBase.BITS,
) -> ExponentResult:
    """
    Вибір потрібної операції за (сім'я каналу, стратегія).
    BSC з m > 2 для централізованої атаки дає лише межу більшості (is_bound).
    """
    dispatch: dict[tuple, Callable[[], ExponentResult]] = {
        ("bec", "centralized"): lambda: bec_centralized_exponent(param, m, rho, base),
        ("bec", "decentralized"): lambda: bec_decentralized_exponent(param, m, rho, base),
        ("bec", "single"): lambda: bec_decentralized_exponent(param, 1, rho, base),
        ("bsc", "decentralized"): lambda: bsc_decentralized_exponent(param, m, rho, base),
        ("bsc", "single"): lambda: bsc_decentralized_exponent(param, 1, rho, base),
        ("custom", "centralized"): lambda: centralized_exponent(p_x, w, m, rho, base),
        ("custom", "decentralized"): lambda: dmc_decentralized_exponent(p_x, w, m, rho, resolution, base),
        ("custom", "single"): lambda: conditional_exponent(p_x, w, rho, base),
    }
    if (family, strategy) == ("bsc", "centralized"):
        if m == 1:
            return bsc_decentralized_exponent(param, 1, rho, base)
        if m == 2:
            return bsc_centralized_exponent_m2(param, rho, base)
        return majority_collapse_bound(param, m, rho, base)
    try:
        handler = dispatch[(family, strategy)]
    except KeyError:
        raise GuessworkError(f"unknown combination family={family!r} strategy={strategy!r}")
    result = handler()
    logger.info("exponent family=%s strategy=%s m=%d rho=%g value=%.9g", family, strategy, m, rho, result.value)
    return result


def sweep(family: str, rho: float = 1.0, max_m: int = 4, points: int = 11, base: LogBase = LogBase.BITS) -> List[SweepRow]:
    """
    Сітка параметра каналу на [0, 1]: централізована пара (m = 2) і
    децентралізовані групи m = 1..max_m. Дає криві залежності показника від ε чи δ.
    """
    if family not in ("bec", "bsc"):
        raise GuessworkError(f"sweep is defined for bec and bsc, got {family!r}")
    rows = []
    for param in np.linspace(0.0, 1.0, points):
        param = float(round(param, 12))
        plan = [("centralized", 2)] + [("decentralized", m) for m in range(1, max_m + 1)]
        for strategy, m in plan:
            result = exponent_for(family, strategy, m, rho, param=param, base=base)
            rows.append(
                SweepRow(
                    family=family,
                    param=param,
                    strategy=strategy,
                    m=m,
                    rho=rho,
                    value=result.value,
                    method=result.method,
                    is_bound=result.is_bound,
                )
            )
    logger.info("exponent.sweep family=%s rho=%g max_m=%d points=%d", family, rho, max_m, points)
    return rows
