"""Сімейства каналів, добутки каналів, апостеріорні розподіли і читання JSON."""

import json
import logging
import math
from functools import reduce
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from app.constants import ERASURE
from app.exceptions import CapExceededError, DistributionError
from app.models import Alphabet, Channel, JointDistribution, Pmf
from app.schemas import ChannelSpec
from app.settings import get_settings

logger = logging.getLogger(__name__)


def _check_param(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DistributionError(f"{name} must be in [0, 1], got {value}")


def bec(epsilon: float) -> Channel:
    """Двійковий канал зі стиранням: виходи (0, 1, ?)."""
    _check_param("epsilon", epsilon)
    return Channel(
        input=Alphabet.binary(),
        output=Alphabet.of(("0", "1", ERASURE)),
        rows=((1.0 - epsilon, 0.0, epsilon), (0.0, 1.0 - epsilon, epsilon)),
    )


def bsc(delta: float) -> Channel:
    _check_param("delta", delta)
    return Channel(
        input=Alphabet.binary(),
        output=Alphabet.binary(),
        rows=((1.0 - delta, delta), (delta, 1.0 - delta)),
    )


def noiseless(alphabet: Union[Alphabet, int] = 2) -> Channel:
    if isinstance(alphabet, int):
        alphabet = Alphabet.of_size(alphabet) if alphabet != 2 else Alphabet.binary()
    k = len(alphabet)
    return Channel.from_matrix(np.eye(k), alphabet.symbols, alphabet.symbols)


def trivial(alphabet: Alphabet) -> Channel:
    """Канал з одним виходом: побічна інформація відсутня."""
    return Channel(input=alphabet, output=Alphabet.of(("*",)), rows=tuple((1.0,) for _ in alphabet.symbols))


def product_channel(w: Channel, m: int, cap: Optional[int] = None) -> Channel:
    """
    m незалежних спостережень одного входу: P(y_1..y_m | x) = Π w(y_i | x).
    Виходи перелічені в лексикографічному порядку кортежів (перша координата старша).
    """
    if m < 1:
        raise DistributionError(f"m must be at least 1, got {m}")
    if m == 1:
        return w
    cap = cap or get_settings().product_output_cap
    size = len(w.output) ** m
    if size > cap:
        raise CapExceededError("product_output_cap", cap, size)
    matrix = w.matrix
    rows = [reduce(np.kron, [matrix[i]] * m) for i in range(matrix.shape[0])]
    logger.debug("product_channel m=%d outputs=%d", m, size)
    return Channel(
        input=w.input,
        output=w.output.power(m),
        rows=tuple(tuple(float(v) for v in row) for row in rows),
    )


def posterior(p_x: Pmf, w: Channel, y: Union[str, int]) -> Pmf:
    if p_x.alphabet != w.input:
        raise DistributionError("prior alphabet does not match the channel input alphabet")
    j = y if isinstance(y, int) else w.output.index(y)
    column = p_x.array * w.matrix[:, j]
    if math.fsum(column.tolist()) <= 0:
        raise DistributionError(f"output {w.output.symbols[j]!r} has zero probability")
    posteriors = JointDistribution.from_channel(p_x, w).x_given_y()
    return posteriors[j]


def posterior_rows(p_x: Pmf, w: Channel) -> Tuple[Pmf, np.ndarray]:
    """(P_Y, таблиця P_{X|Y} з рядком на кожен y; нульові рядки там, де P_Y(y) = 0)."""
    joint = JointDistribution.from_channel(p_x, w)
    rows = [r.array if r is not None else np.zeros(len(p_x)) for r in joint.x_given_y()]
    return joint.y_marginal(), np.vstack(rows)


def product_pmf(p_x: Pmf, n: int) -> Pmf:
    """
    P_X^n над 𝒳^n у лексикографічному порядку.
    Ймовірність рахується з вектора лічильників символів, тож послідовності
    одного типу мають побітово однакові значення.
    """
    k = len(p_x)
    grid = np.indices((k,) * n).reshape(n, -1).T
    counts = np.stack([(grid == a).sum(axis=1) for a in range(k)], axis=1)
    probs = np.prod(p_x.array[None, :] ** counts, axis=1)
    total = math.fsum(probs.tolist())
    return Pmf(alphabet=p_x.alphabet.power(n), probs=tuple((probs / total).tolist()))


def load_channel_json(path: Union[str, Path]) -> Tuple[Pmf, Channel]:
    """{"px": [...], "alphabet_x": [...], "alphabet_y": [...], "w": [[...], ...]}"""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DistributionError(f"cannot read channel file {path}: {exc}")
    return channel_from_document(doc)


def channel_from_document(doc: dict) -> Tuple[Pmf, Channel]:
    missing = [key for key in ("px", "w") if key not in doc]
    if missing:
        raise DistributionError(f"channel document is missing {', '.join(missing)}")
    w = np.asarray(doc["w"], dtype=float)
    alphabet_x = doc.get("alphabet_x") or [str(i) for i in range(w.shape[0])]
    alphabet_y = doc.get("alphabet_y") or [str(j) for j in range(w.shape[1])]
    channel = Channel.from_matrix(w, [str(s) for s in alphabet_x], [str(s) for s in alphabet_y])
    prior = Pmf(alphabet=channel.input, probs=tuple(float(p) for p in doc["px"]))
    return prior, channel


def channel_from_spec(spec: ChannelSpec) -> Tuple[Pmf, Channel]:
    """Опис каналу із запиту → (апріорний розподіл, канал); для bec/bsc вхід рівномірний."""
    if spec.family == "bec":
        return Pmf.uniform(Alphabet.binary()), bec(spec.param)
    if spec.family == "bsc":
        return Pmf.uniform(Alphabet.binary()), bsc(spec.param)
    return channel_from_document(spec.model_dump(exclude_none=True))
