import pytest

from app.exceptions import CapExceededError
from app.models import Pmf
from app.services.channels import bec, bsc
from app.services.oracle import (
    centralized_moment_exact,
    conditional_moment_exact,
    decentralized_moment_exact,
    iid_order,
    moment_exact,
    moment_of_order,
    optimal_order,
    rank_table,
    single_letter_bounds,
)


def test_uniform_moment_is_midpoint():
    assert moment_exact(Pmf.uniform(4), 1, 1.0).moment == pytest.approx(2.5, abs=1e-12)
    report = moment_exact(Pmf.uniform(2), 3, 1.0)
    assert report.moment == pytest.approx(4.5, abs=1e-12)
    assert report.strategy == "none"


def test_bec_moments_at_n1(uniform_binary, bec_half):
    """Стирання одного агента коштує 1.5 спроби, обох теж коштує 1.5, але трапляється рідше."""
    assert conditional_moment_exact(uniform_binary, bec_half, 1, 1.0).moment == pytest.approx(1.25, abs=1e-12)
    assert centralized_moment_exact(uniform_binary, bec_half, 1, 2, 1.0).moment == pytest.approx(1.125, abs=1e-12)
    assert decentralized_moment_exact(uniform_binary, bec_half, 1, 2, 1.0).moment == pytest.approx(1.125, abs=1e-12)


def test_decentralized_single_agent_matches_conditional(uniform_binary, bsc_quarter):
    single = conditional_moment_exact(uniform_binary, bsc_quarter, 3, 1.0)
    decentralized = decentralized_moment_exact(uniform_binary, bsc_quarter, 3, 1, 1.0)
    assert decentralized.log2_moment == pytest.approx(single.log2_moment, abs=1e-12)


def test_more_agents_never_hurt(uniform_binary, bsc_quarter):
    values = [decentralized_moment_exact(uniform_binary, bsc_quarter, 3, m, 1.0).moment for m in (1, 2, 3)]
    assert values[0] >= values[1] >= values[2] >= 1.0


def test_iid_order_breaks_ties_lexicographically(bern):
    assert iid_order(bern(0.2), 2).sequence_labels() == ["00", "01", "10", "11"]
    assert iid_order(bern(0.8), 2).sequence_labels() == ["11", "01", "10", "00"]


def test_optimal_order_and_moment_of_order(bern):
    order = iid_order(bern(0.3), 4)
    assert moment_of_order(order, 1.0) == pytest.approx(moment_exact(bern(0.3), 4, 1.0).moment, rel=1e-12)
    simple = optimal_order(Pmf.from_probs([0.2, 0.5, 0.3]))
    assert simple.order.tolist() == [1, 2, 0]
    assert simple.ranks().tolist() == [3, 1, 2]


def test_rank_table_for_single_symbol(uniform_binary):
    table = rank_table(uniform_binary, bsc(0.3), 1)
    assert table.tolist() == [[1, 2], [2, 1]]


def test_ranks_are_permutations(uniform_binary):
    table = rank_table(uniform_binary, bec(0.4), 3)
    for column in table.T:
        assert sorted(column.tolist()) == list(range(1, 9))


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_single_letter_sandwich(rho):
    p = Pmf.from_probs([0.5, 0.3, 0.2])
    lower, upper = single_letter_bounds(p, rho)
    assert lower <= moment_exact(p, 1, rho).moment <= upper


def test_enumeration_cap(uniform_binary):
    with pytest.raises(CapExceededError) as err:
        moment_exact(uniform_binary, 7, 1.0, cap=64)
    assert err.value.cap_name == "enumeration_cap"


def test_decentralized_cap_mentions_simulation(uniform_binary, small_caps):
    with pytest.raises(CapExceededError, match="simulate"):
        decentralized_moment_exact(uniform_binary, bsc(0.1), 4, 2, 1.0)


def test_moment_never_below_one():
    report = moment_exact(Pmf.point_mass(3), 4, 2.0)
    assert report.moment == 1.0
    assert report.log2_moment == 0.0
    assert report.per_symbol_exponent == 0.0
