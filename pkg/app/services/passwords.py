"""
Іграшковий приклад із «сестринськими» паролями.

Кожен агент бачить копію секретного пароля, у якій кожна літера з ймовірністю
flip_prob замінена на одну з 25 інших. Одиночний агент і децентралізована група
перебирають оболонки Геммінга навколо своєї копії, централізований агент
спершу зводить копії мажоритарним голосуванням до шаблону зі стираннями '?'.
"""

import itertools
import logging
import math
import re
from collections import Counter
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Union

import numpy as np

from app.constants import DEFAULT_TOY_BUDGETS, ERASURE, LOWERCASE, PROB_TOL
from app.exceptions import CorpusError, GuessworkError
from app.models import PasswordCorpus, PooledPattern
from app.schemas import GuessOutcome, SuccessCurve, SuccessPoint, ToyConfig
from app.utils.combinatorics import mixed_radix, rank_subset_lex
from app.utils.seeding import entry_rng

logger = logging.getLogger(__name__)

_LETTERS = len(LOWERCASE)
_OTHERS = _LETTERS - 1
_LOWER_RE = re.compile(r"^[a-z]+$")

SeedLike = Union[int, np.random.Generator]


# ---------- Corpus ----------
def load_corpus(
    path: Union[str, Path],
    top_k: Optional[int] = None,
    length_filter: Optional[int] = None,
) -> PasswordCorpus:
    """
    Кожен рядок містить один пароль (повтори рахуються як частота) або "count<TAB>password".
    Лишаються тільки паролі з малих латинських літер.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}")

    counts: Counter = Counter()
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        weight = 1
        if "\t" in line:
            head, _, tail = line.partition("\t")
            if head.strip().isdigit():
                weight, line = int(head), tail.strip()
        if not _LOWER_RE.match(line):
            continue
        if length_filter is not None and len(line) != length_filter:
            continue
        counts[line] += weight

    ranked = sorted(counts.items(), key=lambda e: (-e[1], e[0]))
    if top_k is not None:
        ranked = ranked[:top_k]
    if not ranked:
        raise CorpusError(f"corpus {path} is empty after filtering")
    logger.info("toy.corpus path=%s entries=%d", path, len(ranked))
    return PasswordCorpus(entries=tuple((p, float(c)) for p, c in ranked))


def synthetic_corpus(size: int = 1000, seed: int = 0, min_length: int = 6, max_length: int = 10) -> PasswordCorpus:
    """Випадкові різні рядки a–z з вагами Ципфа 1/rank."""
    if size < 1 or not 1 <= min_length <= max_length:
        raise CorpusError("synthetic corpus needs size >= 1 and 1 <= min_length <= max_length")
    rng = np.random.default_rng(seed)
    seen: Dict[str, None] = {}
    while len(seen) < size:
        length = int(rng.integers(min_length, max_length + 1))
        word = "".join(LOWERCASE[i] for i in rng.integers(0, _LETTERS, length))
        seen.setdefault(word)
    return PasswordCorpus(entries=tuple((word, 1.0 / (rank + 1)) for rank, word in enumerate(seen)))


# ---------- Sisters and pooling ----------
def _rng(seed: SeedLike) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def gen_sisters(password: str, m: int, flip_prob: float, seed: SeedLike) -> List[str]:
    if not 0.0 <= flip_prob <= 1.0:
        raise GuessworkError(f"flip_prob must be in [0, 1], got {flip_prob}")
    if m < 1:
        raise GuessworkError(f"m must be at least 1, got {m}")
    if not _LOWER_RE.match(password):
        raise GuessworkError(f"password must be lowercase a-z, got {password!r}")
    rng = _rng(seed)
    original = np.array([LOWERCASE.index(c) for c in password])
    sisters = []
    for _ in range(m):
        flips = rng.random(original.size) < flip_prob
        other = rng.integers(0, _OTHERS, original.size)
        other = other + (other >= original)  # пропускаємо власну літеру
        letters = np.where(flips, other, original)
        sisters.append("".join(LOWERCASE[i] for i in letters))
    return sisters


def _check_lengths(*words: str) -> None:
    if len({len(w) for w in words}) > 1:
        raise GuessworkError("all strings must have the same length")


def pool_sisters(sisters: Sequence[str]) -> PooledPattern:
    """Літера, що є більш ніж у половини копій, інакше '?'."""
    if not sisters:
        raise GuessworkError("at least one sister is required")
    _check_lengths(*sisters)
    m = len(sisters)
    out = []
    for column in zip(*sisters):
        letter, count = Counter(column).most_common(1)[0]
        out.append(letter if 2 * count > m else ERASURE)
    return PooledPattern(pattern="".join(out))


# ---------- Guess counts ----------
def _substitution_digit(secret_letter: str, sister_letter: str) -> int:
    s, t = LOWERCASE.index(secret_letter), LOWERCASE.index(sister_letter)
    return s - 1 if s > t else s


def decentralized_index(secret: str, sister: str) -> int:
    """
    Номер секрету в переборі навколо sister: оболонки d = 0, 1, …, у кожній
    підмножини позицій у лексикографічному порядку, далі заміни a–z без літери sister.
    """
    _check_lengths(secret, sister)
    length = len(sister)
    diff = [i for i, (a, b) in enumerate(zip(secret, sister)) if a != b]
    d = len(diff)
    before = sum(math.comb(length, k) * _OTHERS ** k for k in range(d))
    digits = [_substitution_digit(secret[i], sister[i]) for i in diff]
    return 1 + before + rank_subset_lex(diff, length) * _OTHERS ** d + mixed_radix(digits, _OTHERS)


def decentralized_guess_count(secret: str, sister: str, budget: int) -> GuessOutcome:
    index = decentralized_index(secret, sister)
    if index > budget:
        return GuessOutcome(status="exhausted")
    return GuessOutcome(status="found", index=index)


def centralized_index(secret: str, pattern: PooledPattern) -> Optional[int]:
    """None, якщо незатерта позиція шаблону суперечить секрету."""
    _check_lengths(secret, pattern.pattern)
    for s, p in zip(secret, pattern.pattern):
        if p != ERASURE and p != s:
            return None
    digits = [LOWERCASE.index(secret[i]) for i in pattern.erasures]
    return 1 + mixed_radix(digits, _LETTERS)


def centralized_guess_count(secret: str, pattern: PooledPattern, budget: int) -> GuessOutcome:
    index = centralized_index(secret, pattern)
    if index is None:
        return GuessOutcome(status="mismatch")
    if index > budget:
        return GuessOutcome(status="exhausted")
    return GuessOutcome(status="found", index=index)


def hamming_shell_candidates(sister: str, max_distance: int) -> Iterator[str]:
    """Кандидати в порядку decentralized_index, до відстані max_distance включно."""
    length = len(sister)
    for d in range(min(max_distance, length) + 1):
        for positions in itertools.combinations(range(length), d):
            choices = [[c for c in LOWERCASE if c != sister[i]] for i in positions]
            for letters in itertools.product(*choices):
                word = list(sister)
                for i, c in zip(positions, letters):
                    word[i] = c
                yield "".join(word)


def erasure_candidates(pattern: PooledPattern) -> Iterator[str]:
    """26^e заповнень стирань у лексикографічному порядку."""
    erased = pattern.erasures
    for letters in itertools.product(LOWERCASE, repeat=len(erased)):
        word = list(pattern.pattern)
        for i, c in zip(erased, letters):
            word[i] = c
        yield "".join(word)


# ---------- Success curves ----------
def _entry_costs(password: str, config: ToyConfig, rng: np.random.Generator) -> Dict[str, Optional[int]]:
    sisters = gen_sisters(password, config.m, config.flip_prob, rng)
    return {
        "single": decentralized_index(password, sisters[0]),
        "decentralized": min(decentralized_index(password, s) for s in sisters),
        "centralized": centralized_index(password, pool_sisters(sisters)),
    }


def strategy_costs(
    corpus: PasswordCorpus,
    config: Optional[ToyConfig] = None,
    seed: int = 0,
) -> Dict[str, List[Optional[int]]]:
    """
    Номер спроби, на якій кожна стратегія знаходить кожен запис (None = ніколи).
    Копії для запису i генеруються з (seed, i), тому всі стратегії бачать ті самі копії.
    """
    config = config or ToyConfig()
    costs: Dict[str, List[Optional[int]]] = {s: [] for s in config.strategies}
    for i, (password, _) in enumerate(corpus.entries):
        per_entry = _entry_costs(password, config, entry_rng(seed, i))
        for strategy in config.strategies:
            costs[strategy].append(per_entry[strategy])
    return costs


def _weights(corpus: PasswordCorpus) -> np.ndarray:
    weights = np.array([w for _, w in corpus.entries], dtype=float)
    if not corpus.total_weight > 0:
        raise CorpusError("corpus has zero total weight")
    return weights


def success_curve(
    corpus: PasswordCorpus,
    config: Optional[ToyConfig] = None,
    budgets: Optional[Sequence[int]] = None,
    seed: int = 0,
) -> Dict[str, SuccessCurve]:
    """Зважена частка паролів, знайдених не більше ніж за budget спроб."""
    config = config or ToyConfig()
    budgets = sorted(set(budgets or DEFAULT_TOY_BUDGETS))
    if not budgets or budgets[0] < 1:
        raise GuessworkError("budgets must be positive integers")
    weights = _weights(corpus)
    total = corpus.total_weight

    curves = {}
    for strategy, found in strategy_costs(corpus, config, seed).items():
        # None (невдача припущення) не знаходиться за жодного бюджету
        index = np.array([c if c is not None else np.inf for c in found], dtype=float)
        points = [
            SuccessPoint(budget=b, fraction_recovered=min(math.fsum(weights[index <= b].tolist()) / total, 1.0))
            for b in budgets
        ]
        curves[strategy] = SuccessCurve(strategy=strategy, points=points)
    logger.info(
        "toy.success entries=%d m=%d flip_prob=%g seed=%d", len(corpus), config.m, config.flip_prob, seed
    )
    return curves


def budget_to_fraction(curve: SuccessCurve, target: float = 0.5) -> Optional[int]:
    """Найменший бюджет сітки, за якого частка досягає target; None, якщо не досягає."""
    for point in curve.points:
        if point.fraction_recovered >= target:
            return point.budget
    return None


def budget_for_fraction(
    corpus: PasswordCorpus, costs: Sequence[Optional[int]], target: float = 0.5
) -> Optional[int]:
    """Точний найменший бюджет без сітки: зважений квантиль номерів спроб."""
    if not 0.0 < target <= 1.0:
        raise GuessworkError(f"target fraction must be in (0, 1], got {target}")
    if len(costs) != len(corpus):
        raise GuessworkError(f"{len(costs)} costs for a corpus of {len(corpus)} entries")
    weights = _weights(corpus)
    found = [(c, w) for c, w in zip(costs, weights) if c is not None]
    if not found:
        return None
    found.sort(key=lambda e: e[0])
    reached = np.cumsum([w for _, w in found]) >= (target - PROB_TOL) * corpus.total_weight
    if not reached.any():
        return None
    return int(found[int(np.argmax(reached))][0])


def strategy_budgets(
    corpus: PasswordCorpus,
    config: Optional[ToyConfig] = None,
    seed: int = 0,
    target: float = 0.5,
) -> Dict[str, Optional[int]]:
    """Точний бюджет до частки target для кожної стратегії."""
    costs = strategy_costs(corpus, config, seed)
    return {strategy: budget_for_fraction(corpus, found, target) for strategy, found in costs.items()}
