"""
Точна позиція G*(x|y) в апостеріорному списку вгадувань без його перебору.

Послідовності групуються за умовним типом: усі послідовності одного спільного
типу з y мають однакову апостеріорну ймовірність. Типи впорядковуються за цією
ймовірністю (точно, див. TypeOrder), типи з рівною ймовірністю утворюють серію,
а всередині серії послідовності йдуть лексикографічно.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache, reduce
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.constants import RANK_BLOCK_CACHE, RANK_COMPLETION_CACHE, TIE_FAST_PATH, TYPE_RUNS_CACHE
from app.exceptions import CapExceededError, DistributionError
from app.models import Channel, Pmf
from app.services.channels import trivial
from app.settings import get_settings
from app.utils.combinatorics import MultinomialTable, composition_count, compositions

logger = logging.getLogger(__name__)

JointType = Tuple[int, ...]  # лічильники по клітинках c = a·|Y| + b


@dataclass(frozen=True)
class ConditionalType:
    """Лічильники n(x, y); рядок на символ x, стовпець на символ y."""

    counts: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not self.counts or not self.counts[0]:
            raise DistributionError("conditional type needs a nonempty count table")
        width = len(self.counts[0])
        for row in self.counts:
            if len(row) != width or any(c < 0 for c in row):
                raise DistributionError("conditional type counts must be a nonnegative table")

    @classmethod
    def from_sequences(cls, x: Sequence[int], y: Sequence[int], nx: int, ny: int) -> "ConditionalType":
        if len(x) != len(y):
            raise DistributionError("x and y must have the same length")
        table = [[0] * ny for _ in range(nx)]
        for a, b in zip(x, y):
            table[a][b] += 1
        return cls(counts=tuple(tuple(row) for row in table))

    @classmethod
    def from_joint(cls, joint: JointType, nx: int, ny: int) -> "ConditionalType":
        return cls(counts=tuple(tuple(joint[a * ny:(a + 1) * ny]) for a in range(nx)))

    @property
    def n(self) -> int:
        return sum(sum(row) for row in self.counts)

    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.counts))

    def p_hat_y(self) -> Tuple[float, ...]:
        n = self.n
        return tuple(s / n for s in self.block_sizes())

    def p_hat_x_given_y(self) -> List[Optional[Tuple[float, ...]]]:
        out: List[Optional[Tuple[float, ...]]] = []
        for b, size in enumerate(self.block_sizes()):
            out.append(None if size == 0 else tuple(row[b] / size for row in self.counts))
        return out


def class_size(t: ConditionalType) -> int:
    """|T(t)(y)|: добуток мультиноміальних коефіцієнтів по y-блоках."""
    table = MultinomialTable.for_size(t.n)
    return reduce(lambda acc, col: acc * table.coef(col), zip(*t.counts), 1)


class TypeOrder:
    """
    Порівняння ймовірностей послідовностей за їхніми спільними типами.

    log π(a, b) = log P_X(a) + log w(b|a). Якщо різниця логарифмів велика,
    вистачає float; інакше порівнюємо точно через Fraction, бо float-и
    від різних лічильників можуть розійтися на останній біт.
    """

    def __init__(self, p_x: np.ndarray, w: np.ndarray):
        nx, ny = w.shape
        self.nx, self.ny = nx, ny
        with np.errstate(divide="ignore"):
            self.log_pi = (np.log(p_x)[:, None] + np.log(w)).ravel()
        self.frac_pi = [Fraction(float(p_x[a])) * Fraction(float(w[a, b])) for a in range(nx) for b in range(ny)]
        self.zero_cells = frozenset(int(c) for c in np.flatnonzero(~np.isfinite(self.log_pi)))

    def is_zero(self, t: JointType) -> bool:
        return any(t[c] > 0 for c in self.zero_cells)

    def log_prob(self, t: JointType) -> float:
        if self.is_zero(t):
            return -math.inf
        return math.fsum(t[c] * self.log_pi[c] for c in range(len(t)) if t[c])

    def compare(self, t1: JointType, t2: JointType) -> int:
        """Знак P(t1) − P(t2) для однієї послідовності кожного типу."""
        z1, z2 = self.is_zero(t1), self.is_zero(t2)
        if z1 or z2:
            return (z2 - z1)
        delta = self.log_prob(t1) - self.log_prob(t2)
        if abs(delta) > TIE_FAST_PATH:
            return 1 if delta > 0 else -1
        num, den = Fraction(1), Fraction(1)
        for c, (a, b) in enumerate(zip(t1, t2)):
            if a > b:
                num *= self.frac_pi[c] ** (a - b)
            elif b > a:
                den *= self.frac_pi[c] ** (b - a)
        return (num > den) - (num < den)

    def ordered_runs(self, types: Sequence[JointType]) -> List[List[JointType]]:
        """Типи за спаданням ймовірності, згруповані в серії рівних ймовірностей."""
        ranked = sorted(types, key=cmp_to_key(lambda s, t: self.compare(t, s)))
        runs: List[List[JointType]] = []
        for t in ranked:
            if runs and self.compare(runs[-1][0], t) == 0:
                runs[-1].append(t)
            else:
                runs.append([t])
        return runs

    @lru_cache(maxsize=TYPE_RUNS_CACHE)
    def run_ids(self, types: Tuple[JointType, ...]) -> Tuple[int, ...]:
        position = {}
        for i, run in enumerate(self.ordered_runs(types)):
            for t in run:
                position[t] = i
        return tuple(position[t] for t in types)


@dataclass(frozen=True)
class _BlockRuns:
    runs: Tuple[Tuple[JointType, ...], ...]
    run_of: Dict[JointType, int]
    before: Tuple[int, ...]  # кількість послідовностей у строго ймовірніших серіях


class RankEngine:
    """
    Ранги для фіксованої пари (P_X, P_{Y|X}).

    Таблиці серій залежать лише від розмірів y-блоків, а кількість доповнень
    префікса лише від (блоки, серія, лічильники префікса); обидва кеші обмежені.
    """

    def __init__(self, p_x: Pmf, w: Channel, type_cap: Optional[int] = None):
        if p_x.alphabet != w.input:
            raise DistributionError("prior alphabet does not match the channel input alphabet")
        self.p_x = p_x
        self.w = w
        self.nx, self.ny = len(w.input), len(w.output)
        self.order = TypeOrder(p_x.array, w.matrix)
        self.type_cap = type_cap or get_settings().rank_type_cap
        self.column_mass = (p_x.array[:, None] * w.matrix).sum(axis=0)

    def _types_for(self, block_sizes: Tuple[int, ...]) -> List[JointType]:
        count = 1
        for size in block_sizes:
            count *= composition_count(self.nx, size)
        if count > self.type_cap:
            raise CapExceededError("rank_type_cap", self.type_cap, count)
        types = []
        for combo in product(*(compositions(self.nx, size) for size in block_sizes)):
            joint = [0] * (self.nx * self.ny)
            for b, comp in enumerate(combo):
                for a, c in enumerate(comp):
                    joint[a * self.ny + b] = c
            types.append(tuple(joint))
        return types

    @lru_cache(maxsize=RANK_BLOCK_CACHE)
    def _block_runs(self, block_sizes: Tuple[int, ...]) -> _BlockRuns:
        n = sum(block_sizes)
        table = MultinomialTable.for_size(n)
        types = self._types_for(block_sizes)
        runs = self.order.ordered_runs(types)
        run_of, before, acc = {}, [], 0
        for i, run in enumerate(runs):
            before.append(acc)
            for t in run:
                run_of[t] = i
                acc += self._size(t, table)
        logger.debug("rank.block_runs blocks=%s types=%d runs=%d", block_sizes, len(types), len(runs))
        return _BlockRuns(runs=tuple(tuple(r) for r in runs), run_of=run_of, before=tuple(before))

    def _size(self, t: JointType, table: MultinomialTable) -> int:
        size = 1
        for b in range(self.ny):
            size *= table.coef([t[a * self.ny + b] for a in range(self.nx)])
        return size

    def rank(self, x: Sequence[int], y: Sequence[int]) -> int:
        if len(x) != len(y):
            raise DistributionError("x and y must have the same length")
        n = len(x)
        if any(self.column_mass[b] <= 0 for b in set(y)):
            raise DistributionError("side information y has zero probability")
        ny = self.ny
        blocks = [0] * ny
        joint = [0] * (self.nx * ny)
        for a, b in zip(x, y):
            blocks[b] += 1
            joint[a * ny + b] += 1
        block_sizes = tuple(blocks)
        block_runs = self._block_runs(block_sizes)
        run_index = block_runs.run_of[tuple(joint)]

        # 1. скільки послідовностей серії лексикографічно менші за x
        used = [0] * (self.nx * ny)
        smaller = 0
        for k in range(n):
            b = y[k]
            for a in range(x[k]):
                used[a * ny + b] += 1
                smaller += self._completions(block_sizes, run_index, tuple(used))
                used[a * ny + b] -= 1
            used[x[k] * ny + b] += 1

        # 2. усе, що строго ймовірніше, плюс позиція всередині серії
        return block_runs.before[run_index] + smaller + 1

    @lru_cache(maxsize=RANK_COMPLETION_CACHE)
    def _completions(self, block_sizes: Tuple[int, ...], run_index: int, used: Tuple[int, ...]) -> int:
        """Кількість послідовностей серії, чий префікс має лічильники used."""
        run = self._block_runs(block_sizes).runs[run_index]
        table = MultinomialTable.for_size(sum(block_sizes))
        ny, nx = self.ny, self.nx
        total = 0
        for t in run:
            count = 1
            for b in range(ny):
                coef = table.coef([t[a * ny + b] - used[a * ny + b] for a in range(nx)])
                if coef == 0:
                    count = 0
                    break
                count *= coef
            total += count
        return total

    def ranks_for(self, xs: Sequence[Sequence[int]], y: Sequence[int]) -> np.ndarray:
        """Ранги кількох x при одному y; зручно для звірки з повним переліком."""
        return np.fromiter((self.rank(x, y) for x in xs), dtype=np.int64, count=len(xs))


@lru_cache(maxsize=32)
def _engine(p_x: Pmf, w: Channel, type_cap: Optional[int]) -> RankEngine:
    return RankEngine(p_x, w, type_cap)


def engine_for(p_x: Pmf, w: Optional[Channel] = None, type_cap: Optional[int] = None) -> RankEngine:
    return _engine(p_x, w if w is not None else trivial(p_x.alphabet), type_cap)


SequenceLike = Union[str, Sequence[Union[str, int]]]


def rank_no_side_info(x: SequenceLike, p_x: Pmf, type_cap: Optional[int] = None) -> int:
    xs = p_x.alphabet.encode(x)
    return engine_for(p_x, None, type_cap).rank(xs, [0] * len(xs))


def rank_given_side_info(
    x: SequenceLike,
    y: SequenceLike,
    p_x: Pmf,
    w: Channel,
    type_cap: Optional[int] = None,
) -> int:
    xs = w.input.encode(x)
    ys = w.output.encode(y)
    return engine_for(p_x, w, type_cap).rank(xs, ys)
