import math

import pytest

from app.exceptions import CapExceededError, GuessworkError
from app.services.exponents import concatenation_exponent
from app.services.lemmas import concatenation_moment_exact, soft_elimination_check, soft_elimination_probs
from app.services.oracle import moment_exact


def test_soft_elimination_small_case():
    result = soft_elimination_check(4, 2, 1.0)
    assert result.moment_uniform_n == pytest.approx(2.5)
    assert result.moment_soft == pytest.approx(13 / 6)
    assert result.moment_uniform_n_minus_1 == pytest.approx(2.0)
    assert result.inequalities_hold


def test_soft_elimination_probabilities():
    probs = soft_elimination_probs(10, 4)
    assert math.fsum(probs) == pytest.approx(1.0, abs=1e-12)
    assert probs == sorted(probs, reverse=True)
    assert probs[0] == pytest.approx(1 / 9)
    assert probs[-1] == pytest.approx(3 / 36)


def test_full_elimination_is_uniform():
    result = soft_elimination_check(6, 6, 1.5)
    assert result.moment_soft == pytest.approx(result.moment_uniform_n)
    assert result.inequalities_hold


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0, 3.0])
def test_soft_elimination_grid(rho):
    for n_size in range(3, 21):
        for k in range(2, n_size + 1):
            assert soft_elimination_check(n_size, k, rho).inequalities_hold, (n_size, k, rho)


@pytest.mark.parametrize("n_size, k", [(5, 1), (5, 6)])
def test_soft_elimination_rejects_bad_k(n_size, k):
    with pytest.raises(GuessworkError):
        soft_elimination_probs(n_size, k)


def test_concatenation_extremes(bern):
    assert concatenation_moment_exact(1.0, 0.2, 8, 1.0).moment == pytest.approx((2 ** 8 + 1) / 2)
    pure = concatenation_moment_exact(0.0, 0.2, 8, 1.0)
    assert pure.moment == pytest.approx(moment_exact(bern(0.2), 8, 1.0).moment, rel=1e-12)
    assert pure.strategy == "concatenation"


def test_concatenation_sits_under_its_exponent():
    n = 12
    per_symbol = concatenation_moment_exact(0.5, 0.2, n, 1.0).per_symbol_exponent
    exponent = concatenation_exponent(0.5, 0.2, 1.0)
    assert exponent - math.log2(1 + n * math.log(2)) / n <= per_symbol <= exponent


def test_concatenation_cap():
    with pytest.raises(CapExceededError):
        concatenation_moment_exact(0.5, 0.2, 30, 1.0)
