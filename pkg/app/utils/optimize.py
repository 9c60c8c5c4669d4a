# app/utils/optimize.py
"""Скалярна максимізація: груба сітка для бракетування + золотий перетин."""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from app.constants import GOLDEN_TOL, GRID_STEP

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class ScalarOptimum:
    x: float
    value: float
    evaluations: int


def _finite_or_neg_inf(value: float) -> float:
    return value if not math.isnan(value) else -math.inf


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = GOLDEN_TOL):
    """
    Golden-section search for the maximum of a unimodal f on [a, b].
    Returns (x, f(x)) for the best point evaluated; the final bracket is at most tol wide.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, _finite_or_neg_inf(f(x)), 1

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = _finite_or_neg_inf(f(c))
    yd = _finite_or_neg_inf(f(d))
    best_x, best_y = (c, yc) if yc >= yd else (d, yd)
    evaluations = 2

    for _ in range(steps - 1):
        if yc > yd:
            b = d
            d, yd = c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = _finite_or_neg_inf(f(c))
            if yc > best_y:
                best_x, best_y = c, yc
        else:
            a = c
            c, yc = d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = _finite_or_neg_inf(f(d))
            if yd > best_y:
                best_x, best_y = d, yd
        evaluations += 1

    return best_x, best_y, evaluations


def maximize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    step: float = GRID_STEP,
    tol: float = GOLDEN_TOL,
) -> ScalarOptimum:
    """
    Максимум f на [lo, hi]:
    1. рівномірна сітка з кроком step (кінці включно),
    2. золотий перетин у сусідстві найкращого вузла до ширини tol.
    Повертає найкращу з усіх обчислених точок; -inf/NaN не ламають пошук.
    """
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    count = max(int(math.ceil((hi - lo) / step)), 1)
    grid = np.linspace(lo, hi, count + 1)
    values = np.array([_finite_or_neg_inf(f(float(x))) for x in grid])
    i = int(np.argmax(values))
    best_x, best_y = float(grid[i]), float(values[i])
    evaluations = grid.size

    if math.isfinite(best_y):
        left = float(grid[max(i - 1, 0)])
        right = float(grid[min(i + 1, grid.size - 1)])
        x, y, used = golden_section_max(f, left, right, tol)
        evaluations += used
        if y > best_y:
            best_x, best_y = x, y

    logger.debug("maximize_scalar lo=%s hi=%s x=%.12g value=%.12g evals=%d", lo, hi, best_x, best_y, evaluations)
    return ScalarOptimum(x=best_x, value=best_y, evaluations=evaluations)
