# app/models.py
"""
Доменні типи: алфавіти, розподіли, канали та спільні розподіли.

Усі моделі незмінні (frozen) і валідуються при створенні.
Ймовірності ніколи не перенормовуються мовчки: сума має бути 1 з допуском PROB_TOL.
"""

import itertools
import math
import re
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from app.constants import PROB_TOL
from app.exceptions import DistributionError


class LogBase(str, Enum):
    BITS = "bits"
    NATS = "nats"

    def from_bits(self, value: float) -> float:
        """Переводить значення в бітах у цю основу (лише фінальні значення)."""
        if self is LogBase.NATS:
            return value * math.log(2)
        return value

    def log(self, values):
        return np.log2(values) if self is LogBase.BITS else np.log(values)


def _check_simplex(probs: Sequence[float], what: str) -> None:
    for p in probs:
        if not math.isfinite(p) or p < 0:
            raise ValueError(f"{what}: entries must be finite and nonnegative, got {p!r}")
    total = math.fsum(probs)
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"{what}: entries must sum to 1 within {PROB_TOL}, got {total!r}")


def sequence_label(symbols: Sequence[str]) -> str:
    """Мітка для кортежу символів: склеюємо односимвольні мітки, інакше через кому."""
    if all(len(s) == 1 for s in symbols):
        return "".join(symbols)
    return ",".join(symbols)


class Alphabet(BaseModel):
    model_config = ConfigDict(frozen=True)

    symbols: Tuple[str, ...]

    @field_validator("symbols")
    @classmethod
    def _distinct(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        if not v:
            raise ValueError("alphabet must be nonempty")
        if len(set(v)) != len(v):
            raise ValueError("alphabet symbols must be distinct")
        return v

    @classmethod
    def of(cls, symbols: Union[Sequence[str], str]) -> "Alphabet":
        return cls(symbols=tuple(symbols))

    @classmethod
    def binary(cls) -> "Alphabet":
        return cls(symbols=("0", "1"))

    @classmethod
    def of_size(cls, size: int) -> "Alphabet":
        return cls(symbols=tuple(str(i) for i in range(size)))

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} is not in the alphabet {self.symbols}")

    def encode(self, sequence: Union[str, Sequence[Union[str, int]]]) -> List[int]:
        """Перетворює послідовність міток (або індексів) на індекси символів."""
        if isinstance(sequence, str):
            sequence = list(sequence)
        out = []
        for item in sequence:
            if isinstance(item, (int, np.integer)):
                if not 0 <= int(item) < len(self):
                    raise ValueError(f"symbol index {item} out of range for {self.symbols}")
                out.append(int(item))
            else:
                out.append(self.index(item))
        return out

    def power(self, n: int) -> "Alphabet":
        return Alphabet(
            symbols=tuple(sequence_label(t) for t in itertools.product(self.symbols, repeat=n))
        )


class Pmf(BaseModel):
    model_config = ConfigDict(frozen=True)

    alphabet: Alphabet
    probs: Tuple[float, ...]

    @model_validator(mode="after")
    def _valid(self) -> "Pmf":
        if len(self.probs) != len(self.alphabet):
            raise ValueError(
                f"pmf has {len(self.probs)} entries for an alphabet of {len(self.alphabet)}"
            )
        _check_simplex(self.probs, "pmf")
        return self

    @classmethod
    def from_probs(cls, probs: Sequence[float], symbols: Optional[Sequence[str]] = None) -> "Pmf":
        probs = tuple(float(p) for p in probs)
        alphabet = Alphabet.of(symbols) if symbols is not None else Alphabet.of_size(len(probs))
        return cls(alphabet=alphabet, probs=probs)

    @classmethod
    def bernoulli(cls, p: float) -> "Pmf":
        """Bern(p) над {0, 1}: P(1) = p."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Bernoulli parameter must be in [0, 1], got {p}")
        return cls(alphabet=Alphabet.binary(), probs=(1.0 - p, p))

    @classmethod
    def uniform(cls, alphabet: Union[Alphabet, int]) -> "Pmf":
        if isinstance(alphabet, int):
            alphabet = Alphabet.of_size(alphabet)
        k = len(alphabet)
        return cls(alphabet=alphabet, probs=tuple(1.0 / k for _ in range(k)))

    @classmethod
    def point_mass(cls, alphabet: Union[Alphabet, int], index: int = 0) -> "Pmf":
        if isinstance(alphabet, int):
            alphabet = Alphabet.of_size(alphabet)
        return cls(
            alphabet=alphabet,
            probs=tuple(1.0 if i == index else 0.0 for i in range(len(alphabet))),
        )

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def __len__(self) -> int:
        return len(self.probs)


class Channel(BaseModel):
    """Матриця переходів P_{Y|X}: рядок на кожен вхідний символ."""

    model_config = ConfigDict(frozen=True)

    input: Alphabet
    output: Alphabet
    rows: Tuple[Tuple[float, ...], ...]

    @model_validator(mode="after")
    def _valid(self) -> "Channel":
        if len(self.rows) != len(self.input):
            raise ValueError(f"channel has {len(self.rows)} rows for {len(self.input)} inputs")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.output):
                raise ValueError(
                    f"channel row {i} has {len(row)} entries for {len(self.output)} outputs"
                )
            _check_simplex(row, f"channel row {i}")
        return self

    @classmethod
    def from_matrix(
        cls,
        matrix,
        input_symbols: Optional[Sequence[str]] = None,
        output_symbols: Optional[Sequence[str]] = None,
    ) -> "Channel":
        rows = tuple(tuple(float(v) for v in row) for row in np.asarray(matrix, dtype=float))
        if not rows:
            raise ValueError("channel needs at least one row")
        n_in, n_out = len(rows), len(rows[0])
        return cls(
            input=Alphabet.of(input_symbols) if input_symbols is not None else Alphabet.of_size(n_in),
            output=Alphabet.of(output_symbols) if output_symbols is not None else Alphabet.of_size(n_out),
            rows=rows,
        )

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=float)

    def row(self, x: Union[str, int]) -> Pmf:
        i = x if isinstance(x, int) else self.input.index(x)
        return Pmf(alphabet=self.output, probs=self.rows[i])


class JointDistribution(BaseModel):
    model_config = ConfigDict(frozen=True)

    x_alphabet: Alphabet
    y_alphabet: Alphabet
    matrix: Tuple[Tuple[float, ...], ...]

    @model_validator(mode="after")
    def _valid(self) -> "JointDistribution":
        if len(self.matrix) != len(self.x_alphabet):
            raise ValueError("joint matrix rows must match the X alphabet")
        flat = []
        for row in self.matrix:
            if len(row) != len(self.y_alphabet):
                raise ValueError("joint matrix columns must match the Y alphabet")
            flat.extend(row)
        _check_simplex(flat, "joint distribution")
        return self

    @classmethod
    def from_channel(cls, p_x: Pmf, w: Channel) -> "JointDistribution":
        if p_x.alphabet != w.input:
            raise DistributionError("prior alphabet does not match the channel input alphabet")
        joint = p_x.array[:, None] * w.matrix
        return cls.from_array(joint, w.input, w.output)

    @classmethod
    def from_array(cls, joint, x_alphabet: Alphabet, y_alphabet: Alphabet) -> "JointDistribution":
        joint = np.asarray(joint, dtype=float)
        return cls(
            x_alphabet=x_alphabet,
            y_alphabet=y_alphabet,
            matrix=tuple(tuple(float(v) for v in row) for row in joint),
        )

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    def x_marginal(self) -> Pmf:
        return _normalized_pmf(self.array.sum(axis=1), self.x_alphabet)

    def y_marginal(self) -> Pmf:
        return _normalized_pmf(self.array.sum(axis=0), self.y_alphabet)

    def x_given_y(self) -> List[Optional[Pmf]]:
        """P_{X|Y}(·|y) для кожного y; None там, де P_Y(y) = 0."""
        joint = self.array
        out: List[Optional[Pmf]] = []
        for j in range(joint.shape[1]):
            col = joint[:, j]
            total = math.fsum(col)
            out.append(_normalized_pmf(col, self.x_alphabet) if total > 0 else None)
        return out

    def y_given_x(self) -> List[Optional[Pmf]]:
        joint = self.array
        out: List[Optional[Pmf]] = []
        for i in range(joint.shape[0]):
            row = joint[i]
            total = math.fsum(row)
            out.append(_normalized_pmf(row, self.y_alphabet) if total > 0 else None)
        return out


def _normalized_pmf(weights: np.ndarray, alphabet: Alphabet) -> Pmf:
    """Pmf з невід'ємних ваг, що в сумі (майже) 1 або потребують ділення на суму."""
    total = math.fsum(float(v) for v in weights)
    probs = [float(v) / total for v in weights]
    # залишкову похибку ділення кладемо на найбільший елемент
    drift = 1.0 - math.fsum(probs)
    if drift != 0.0:
        k = int(np.argmax(probs))
        probs[k] = max(probs[k] + drift, 0.0)
    return Pmf(alphabet=alphabet, probs=tuple(probs))


# ---------- Password toy ----------
_LOWER_RE = re.compile(r"^[a-z]+$")
_PATTERN_RE = re.compile(r"^[a-z?]+$")


class PasswordCorpus(BaseModel):
    """Паролі з вагами, за спаданням ваги, нічиї впорядковані лексикографічно."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[str, float], ...]

    @field_validator("entries")
    @classmethod
    def _valid(cls, v: Tuple[Tuple[str, float], ...]) -> Tuple[Tuple[str, float], ...]:
        seen = set()
        for password, weight in v:
            if not _LOWER_RE.match(password):
                raise ValueError(f"password must be nonempty lowercase a-z, got {password!r}")
            if password in seen:
                raise ValueError(f"duplicate password {password!r}")
            if not weight >= 0:
                raise ValueError(f"weight must be nonnegative, got {weight!r}")
            seen.add(password)
        return tuple(sorted(v, key=lambda e: (-e[1], e[0])))

    @classmethod
    def from_counts(cls, counts: Dict[str, float]) -> "PasswordCorpus":
        return cls(entries=tuple(counts.items()))

    @property
    def passwords(self) -> List[str]:
        return [p for p, _ in self.entries]

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, w in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


class PooledPattern(BaseModel):
    model_config = ConfigDict(frozen=True)

    pattern: str

    @field_validator("pattern")
    @classmethod
    def _valid(cls, v: str) -> str:
        if not _PATTERN_RE.match(v):
            raise ValueError(f"pattern must use a-z and '?', got {v!r}")
        return v

    @property
    def erasures(self) -> List[int]:
        return [i for i, c in enumerate(self.pattern) if c == "?"]

    def __len__(self) -> int:
        return len(self.pattern)
