import math

import pytest

from app.exceptions import GuessworkError, OptimizerDisagreementError
from app.models import LogBase, Pmf
from app.services import exponents
from app.services.channels import bec, bsc
from app.services.exponents import (
    arikan_exponent,
    bec_centralized_exponent,
    bec_decentralized_exponent,
    bsc_centralized_exponent_m2,
    bsc_decentralized_exponent,
    centralized_exponent,
    concatenation_exponent,
    conditional_exponent,
    decentralized_limit,
    exponent_for,
    majority_collapse_bound,
    majority_error,
    sweep,
)
from app.services.information import binary_renyi

GRID = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9]


# ---------- Без побічної інформації та один агент ----------
def test_arikan_exponent(uniform_binary, bern):
    assert arikan_exponent(uniform_binary, 1.0).value == pytest.approx(1.0, abs=1e-12)
    assert arikan_exponent(bern(0.11), 1.0).value == pytest.approx(0.7011, abs=1e-3)


@pytest.mark.parametrize("eps", GRID)
def test_conditional_exponent_of_bec(uniform_binary, eps):
    value = conditional_exponent(uniform_binary, bec(eps), 1.0).value
    assert value == pytest.approx(math.log2(1 - eps + 2 * eps), abs=1e-10)


@pytest.mark.parametrize("delta", GRID)
def test_conditional_exponent_of_bsc(uniform_binary, delta):
    value = conditional_exponent(uniform_binary, bsc(delta), 1.0).value
    assert value == pytest.approx(binary_renyi(delta, 0.5), abs=1e-10)


# ---------- Централізована атака ----------
@pytest.mark.parametrize("eps", GRID)
@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_bec_centralized_closed_form(eps, m):
    result = bec_centralized_exponent(eps, m, 1.0)
    assert result.value == pytest.approx(math.log2(1 + eps ** m), abs=1e-6)
    assert result.method == "scalar-optimize"
    assert result.maximizer.extras["erasure_all"] == pytest.approx(eps ** m)


def test_bec_centralized_reference_value(uniform_binary):
    assert bec_centralized_exponent(0.5, 2, 1.0).value == pytest.approx(0.321928, abs=1e-6)
    assert centralized_exponent(uniform_binary, bec(0.5), 2, 1.0).value == pytest.approx(0.321928, abs=1e-6)


@pytest.mark.parametrize("delta", GRID)
def test_bsc_pair_matches_product_channel(uniform_binary, delta):
    closed = math.log2(1 + 4 * delta * (1 - delta))
    assert bsc_centralized_exponent_m2(delta, 1.0).value == pytest.approx(closed, abs=1e-6)
    assert centralized_exponent(uniform_binary, bsc(delta), 2, 1.0).value == pytest.approx(closed, abs=1e-9)


def test_majority_error():
    assert majority_error(0.1, 1) == pytest.approx(0.1)
    assert majority_error(0.1, 2) == pytest.approx(0.1)
    assert majority_error(0.1, 3) == pytest.approx(0.028)


def test_majority_bound_shrinks_with_more_agents():
    values = [majority_collapse_bound(0.1, m, 1.0).value for m in (1, 3, 5, 7)]
    assert values == sorted(values, reverse=True)
    assert values[0] == pytest.approx(binary_renyi(0.1, 0.5), abs=1e-12)
    assert majority_collapse_bound(0.1, 3, 1.0).is_bound


# ---------- Децентралізована атака ----------
def test_decentralized_reference_values():
    assert bec_decentralized_exponent(0.5, 2, 1.0).value == pytest.approx(0.54311, abs=1e-5)
    assert bsc_decentralized_exponent(0.2, 2, 1.0).value == pytest.approx(0.80271, abs=1e-5)
    assert bsc_decentralized_exponent(0.5, 3, 1.0).value == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("eps", GRID)
def test_single_agent_bec_equals_conditional(uniform_binary, eps):
    single = conditional_exponent(uniform_binary, bec(eps), 1.0).value
    assert bec_decentralized_exponent(eps, 1, 1.0).value == pytest.approx(single, abs=1e-6)


def test_large_groups_approach_equivocation(uniform_binary):
    assert decentralized_limit(uniform_binary, bec(0.5)) == pytest.approx(0.5, abs=1e-12)
    assert bec_decentralized_exponent(0.5, 64, 1.0).value == pytest.approx(0.5, abs=0.01)
    assert bsc_decentralized_exponent(0.2, 64, 1.0).value == pytest.approx(
        decentralized_limit(uniform_binary, bsc(0.2)), abs=0.01
    )


def test_centralized_beats_decentralized_on_bec():
    for m in (2, 3, 4):
        assert bec_centralized_exponent(0.5, m, 1.0).value < bec_decentralized_exponent(0.5, m, 1.0).value


def test_concatenation_exponent():
    expected = 0.5 + 0.5 * binary_renyi(0.2, 0.5)
    assert concatenation_exponent(0.5, 0.2, 1.0) == pytest.approx(expected, abs=1e-12)
    assert concatenation_exponent(1.0, 0.2, 2.0) == pytest.approx(2.0)


def test_nats_are_bits_times_ln2():
    bits = bec_centralized_exponent(0.5, 2, 1.0).value
    nats = bec_centralized_exponent(0.5, 2, 1.0, LogBase.NATS)
    assert nats.value == pytest.approx(bits * math.log(2), abs=1e-12)
    assert nats.base is LogBase.NATS


def test_optimizer_disagreement_is_reported(monkeypatch):
    monkeypatch.setattr(exponents, "legendre_binary", lambda rho, q: 5.0)
    with pytest.raises(OptimizerDisagreementError):
        bec_centralized_exponent(0.5, 2, 1.0)


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_parameter_range(bad):
    with pytest.raises(GuessworkError):
        bec_centralized_exponent(bad, 2, 1.0)


def test_rho_must_be_positive(uniform_binary):
    with pytest.raises(GuessworkError):
        arikan_exponent(uniform_binary, 0.0)


# ---------- Диспетчер і сітка ----------
def test_exponent_for_dispatch():
    assert exponent_for("bec", "centralized", 2, 1.0, param=0.5).value == pytest.approx(0.321928, abs=1e-6)
    assert exponent_for("bsc", "centralized", 2, 1.0, param=0.25).value == pytest.approx(
        math.log2(1 + 4 * 0.25 * 0.75), abs=1e-6
    )
    assert exponent_for("bsc", "centralized", 3, 1.0, param=0.25).is_bound
    custom = exponent_for("custom", "single", 1, 1.0, p_x=Pmf.uniform(2), w=bec(0.5))
    assert custom.value == pytest.approx(math.log2(1.5), abs=1e-12)


def test_exponent_for_unknown_family():
    with pytest.raises(GuessworkError):
        exponent_for("bpsk", "centralized", 2, 1.0, param=0.1)


def test_sweep_rows():
    rows = sweep("bec", points=5, max_m=3)
    assert len(rows) == 5 * 4
    assert {r.param for r in rows} == {0.0, 0.25, 0.5, 0.75, 1.0}
    at_half = {(r.strategy, r.m): r.value for r in rows if r.param == 0.5}
    assert at_half[("centralized", 2)] < at_half[("decentralized", 2)] < at_half[("decentralized", 1)]


def test_sweep_rejects_custom():
    with pytest.raises(GuessworkError):
        sweep("custom")
