import math

import numpy as np
import pytest

from app.exceptions import CapExceededError, DistributionError, InfeasibleError, ResolutionError
from app.models import Channel, LogBase, Pmf
from app.services.channels import bec, bsc
from app.services.exponents import bec_decentralized_exponent, bsc_decentralized_exponent
from app.services.threshold import alpha_star, dmc_decentralized_exponent, solve_threshold, tilted_entropy_curve

ONE_Y = Pmf.from_probs([1.0])


def test_threshold_above_log_alphabet_is_infeasible():
    with pytest.raises(InfeasibleError):
        solve_threshold(1.5, ONE_Y, [[0.9, 0.1]])


def test_zero_threshold_returns_vertex():
    solution = solve_threshold(0.0, ONE_Y, [[0.9, 0.1]])
    assert math.isinf(solution.s)
    assert solution.q == [[1.0, 0.0]]
    assert solution.achieved_h == pytest.approx(0.0, abs=1e-12)
    assert solution.objective == pytest.approx(-math.log2(0.9), abs=1e-12)


def test_full_threshold_returns_uniform():
    solution = solve_threshold(1.0, ONE_Y, [[0.9, 0.1]])
    assert solution.s == pytest.approx(0.0, abs=1e-9)
    assert solution.q[0] == pytest.approx([0.5, 0.5], abs=1e-9)


def test_interior_threshold_hits_the_constraint():
    solution = solve_threshold(0.5, ONE_Y, [[0.9, 0.1]])
    assert 0.0 < solution.s < math.inf
    assert solution.achieved_h == pytest.approx(0.5, abs=1e-9)
    vertex = solve_threshold(0.0, ONE_Y, [[0.9, 0.1]])
    assert vertex.objective < solution.objective < 0.5 * (-math.log2(0.9) - math.log2(0.1))


def test_nats_threshold():
    bits = solve_threshold(0.5, ONE_Y, [[0.9, 0.1]])
    nats = solve_threshold(0.5 * math.log(2), ONE_Y, [[0.9, 0.1]], LogBase.NATS)
    assert nats.s == pytest.approx(bits.s, rel=1e-9)


def test_threshold_outside_support_is_infinite():
    """Носій рядка складається з одного символу, тож будь-яке α > 0 виводить Q за носій."""
    solution = solve_threshold(1.0, ONE_Y, [[1.0, 0.0, 0.0]])
    assert math.isinf(solution.objective)


def test_posterior_rows_are_validated():
    with pytest.raises(DistributionError):
        solve_threshold(0.5, ONE_Y, [[0.9, 0.3]])
    with pytest.raises(DistributionError):
        solve_threshold(0.5, Pmf.uniform(2), [[0.9, 0.1]])


def test_tilted_entropy_is_nonincreasing():
    curve = tilted_entropy_curve(Pmf.uniform(2), [[0.7, 0.2, 0.1], [0.5, 0.3, 0.2]], [0, 0.5, 1, 2, 4, 8, 16])
    entropies = [h for _, h in curve]
    assert entropies[0] == pytest.approx(math.log2(3))
    assert all(a >= b - 1e-12 for a, b in zip(entropies, entropies[1:]))


def test_alpha_star_extremes():
    posterior = np.array([[0.9, 0.1]])
    assert alpha_star(np.array([[0.5], [0.5]]), posterior) == pytest.approx(math.log(2), abs=1e-12)
    assert alpha_star(np.array([[1.0], [0.0]]), posterior) == pytest.approx(0.0, abs=1e-12)


# ---------- Загальний DMC ----------
def test_dmc_alphabet_cap(uniform_binary):
    p_x = Pmf.uniform(5)
    w = Channel.from_matrix(np.eye(5).tolist())
    with pytest.raises(CapExceededError) as err:
        dmc_decentralized_exponent(p_x, w, 2, 1.0)
    assert err.value.cap_name == "dmc_alphabet"


def test_dmc_resolution_guard(uniform_binary):
    with pytest.raises(ResolutionError):
        dmc_decentralized_exponent(uniform_binary, bec(0.5), 1, 1.0, resolution=0.5)
    with pytest.raises(ResolutionError):
        dmc_decentralized_exponent(uniform_binary, bec(0.5), 1, 1.0, grid_points=5)


@pytest.mark.slow
@pytest.mark.parametrize(
    "w, m, expected",
    [
        (bec(0.5), 1, bec_decentralized_exponent(0.5, 1, 1.0).value),
        (bec(0.5), 2, bec_decentralized_exponent(0.5, 2, 1.0).value),
        (bsc(0.2), 2, bsc_decentralized_exponent(0.2, 2, 1.0).value),
    ],
)
def test_dmc_matches_closed_forms(uniform_binary, w, m, expected):
    result = dmc_decentralized_exponent(uniform_binary, w, m, 1.0)
    assert result.value == pytest.approx(expected, abs=5e-3)
    assert result.method == "type-grid"
    assert result.maximizer.joint is not None
