from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Sequence


def compositions(length: int, total_sum: int) -> Iterator[tuple[int, ...]]:
    """Кортежі з length невід'ємних чисел із сумою total_sum, у лексикографічному порядку."""
    if length == 1:
        yield (total_sum,)
    else:
        for value in range(total_sum + 1):
            for rest in compositions(length - 1, total_sum - value):
                yield (value,) + rest


def composition_count(length: int, total_sum: int) -> int:
    return math.comb(total_sum + length - 1, length - 1)


class MultinomialTable:
    """Таблиця факторіалів до n; після побудови лише читається: for_size(4).coef((2, 2)) == 6."""

    def __init__(self, n: int):
        self.n = n
        facts = [1]
        for i in range(1, n + 1):
            facts.append(facts[-1] * i)
        self._facts = tuple(facts)

    @staticmethod
    @lru_cache(maxsize=64)
    def for_size(n: int) -> "MultinomialTable":
        return MultinomialTable(n)

    def factorial(self, k: int) -> int:
        return self._facts[k]

    def coef(self, counts: Sequence[int]) -> int:
        """(Σ counts)! / Π counts!; 0, якщо є від'ємний лічильник."""
        total = 0
        denom = 1
        for c in counts:
            if c < 0:
                return 0
            total += c
            denom *= self._facts[c]
        return self._facts[total] // denom


def rank_subset_colex(subset: Sequence[int]) -> int:
    """Колекс-ранг упорядкованої k-підмножини {0..n-1}."""
    return sum(math.comb(c, j + 1) for j, c in enumerate(subset))


def rank_subset_lex(subset: Sequence[int], n: int) -> int:
    """Лексикографічний ранг k-підмножини {0..n-1}, як у порядку itertools.combinations."""
    return math.comb(n, len(subset)) - 1 - rank_subset_colex([n - 1 - c for c in reversed(subset)])


def mixed_radix(digits: Sequence[int], base: int) -> int:
    """Число з цифр у системі base, старша цифра перша."""
    value = 0
    for d in digits:
        value = value * base + d
    return value
