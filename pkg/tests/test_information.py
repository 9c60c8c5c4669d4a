import math

import numpy as np
import pytest

from app.exceptions import DistributionError, GuessworkError
from app.models import LogBase, Pmf
from app.services.channels import bec, bsc
from app.services.information import (
    binary_renyi,
    binary_shannon,
    conditional_entropy,
    entropy,
    equivocation,
    kl_divergence,
    mutual_information,
    renyi_entropy,
    weighted_kl,
)


def test_shannon_entropy_of_bernoulli(bern):
    assert entropy(bern(0.11)) == pytest.approx(0.4999, abs=1e-3)
    assert entropy(Pmf.uniform(4)) == pytest.approx(2.0)
    assert entropy(Pmf.point_mass(3)) == 0.0


def test_entropy_in_nats(uniform_binary):
    assert entropy(uniform_binary, LogBase.NATS) == pytest.approx(math.log(2))


def test_renyi_half_of_bernoulli(bern):
    expected = 2 * math.log2(math.sqrt(0.11) + math.sqrt(0.89))
    assert renyi_entropy(bern(0.11), 0.5) == pytest.approx(expected, abs=1e-12)
    assert binary_renyi(0.11, 0.5) == pytest.approx(0.7011, abs=1e-3)


def test_renyi_switches_to_shannon_near_one(bern):
    p = bern(0.3)
    assert renyi_entropy(p, 1.0 + 1e-12) == entropy(p)
    assert renyi_entropy(p, 1.0 + 1e-4) == pytest.approx(entropy(p), abs=1e-3)


def test_renyi_is_nonincreasing_in_order():
    p = Pmf.from_probs([0.6, 0.3, 0.1])
    values = [renyi_entropy(p, a) for a in (0.1, 0.5, 0.9, 1.0, 2.0, 5.0)]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    assert renyi_entropy(p, 1e-6) == pytest.approx(math.log2(3), abs=1e-4)


def test_renyi_rejects_nonpositive_order(uniform_binary):
    with pytest.raises(GuessworkError):
        renyi_entropy(uniform_binary, 0.0)


def test_kl_divergence(bern):
    assert kl_divergence(bern(0.5), bern(0.25)) == pytest.approx(0.20752, abs=1e-5)
    assert kl_divergence(bern(0.3), bern(0.3)) == 0.0
    assert kl_divergence(bern(0.5), bern(0.0)) == math.inf


def test_kl_needs_same_alphabet(uniform_binary):
    with pytest.raises(DistributionError):
        kl_divergence(uniform_binary, Pmf.uniform(3))


def test_equivocation_and_mutual_information(uniform_binary):
    assert equivocation(uniform_binary, bec(0.3)) == pytest.approx(0.3, abs=1e-12)
    assert mutual_information(uniform_binary, bec(0.3)) == pytest.approx(0.7, abs=1e-12)
    assert equivocation(uniform_binary, bsc(0.11)) == pytest.approx(binary_shannon(0.11), abs=1e-12)


def test_conditional_entropy_skips_zero_weight_rows():
    rows = [[0.5, 0.5], [1.0, 0.0]]
    p_y = Pmf.from_probs([1.0, 0.0])
    assert conditional_entropy(rows, p_y) == pytest.approx(1.0)


def test_weighted_kl(uniform_binary):
    value = weighted_kl(bsc(0.5), bsc(0.25), uniform_binary)
    assert value == pytest.approx(0.20752, abs=1e-5)
    assert weighted_kl(bsc(0.2), bsc(0.0), uniform_binary) == math.inf


@pytest.mark.parametrize("seed", range(20))
def test_kl_is_nonnegative_and_zero_only_on_equal_laws(seed):
    rng = np.random.default_rng(seed)
    size = int(rng.integers(2, 6))
    p = Pmf.from_probs(rng.dirichlet(np.ones(size)).tolist())
    q = Pmf.from_probs(rng.dirichlet(np.ones(size)).tolist())
    assert kl_divergence(p, q) > 0
    assert kl_divergence(q, p) > 0
    assert kl_divergence(p, p) == pytest.approx(0.0, abs=1e-12)
    assert kl_divergence(p, q, LogBase.NATS) >= 0
