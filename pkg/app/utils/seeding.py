# app/utils/seeding.py
"""
Незалежні потоки випадкових чисел на базі лічильникового Philox.

Потік 0 дає секрет X, потік i ≥ 1 дає шум агента i. Спроба t у кожному потоці
займає фіксований відрізок лічильника, тож її випадковість залежить лише від
(master_seed, stream, t) і не залежить від розбиття на блоки чи кількості воркерів.
"""

import math

import numpy as np

SECRET_STREAM = 0
WORDS_PER_COUNTER = 4  # Philox4x64: чотири 64-бітні слова на один крок лічильника


def stream_key(master_seed: int, stream: int) -> np.ndarray:
    return np.random.SeedSequence([master_seed, stream]).generate_state(2, dtype=np.uint64)


def stream_uniforms(master_seed: int, stream: int, start: int, count: int, width: int) -> np.ndarray:
    """Матриця (count, width) рівномірних у [0, 1) для спроб start .. start+count-1."""
    steps = max(math.ceil(width / WORDS_PER_COUNTER), 1)
    bitgen = np.random.Philox(key=stream_key(master_seed, stream), counter=start * steps)
    raw = bitgen.random_raw(count * steps * WORDS_PER_COUNTER)
    raw = np.asarray(raw, dtype=np.uint64).reshape(count, steps * WORDS_PER_COUNTER)[:, :width]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def entry_rng(master_seed: int, entry_index: int) -> np.random.Generator:
    """Окремий генератор для елемента корпусу (незалежний від порядку обробки)."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, entry_index]))


def sample_rows(cdf_rows: np.ndarray, rows: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """
    Обернена CDF для кожного елемента: індекс першого стовпця, де cdf > u.
    cdf_rows вже містить +inf після останнього ненульового символу рядка.
    """
    return np.argmax(uniforms[..., None] < cdf_rows[rows], axis=-1)


def guarded_cdf(matrix: np.ndarray) -> np.ndarray:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    cdf = np.cumsum(matrix, axis=1)
    for r in range(matrix.shape[0]):
        last = int(np.flatnonzero(matrix[r] > 0)[-1])
        cdf[r, last:] = np.inf
    return cdf
