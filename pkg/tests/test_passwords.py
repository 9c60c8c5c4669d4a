import pytest

from app.constants import DEFAULT_TOY_BUDGETS, TOY_CHECK_LENGTH, TOY_CHECK_M, TOY_CHECK_SEEDS
from app.exceptions import CorpusError, GuessworkError
from app.models import PasswordCorpus, PooledPattern
from app.schemas import SuccessCurve, SuccessPoint, ToyConfig
from app.services.passwords import (
    budget_for_fraction,
    budget_to_fraction,
    centralized_guess_count,
    centralized_index,
    decentralized_guess_count,
    decentralized_index,
    erasure_candidates,
    gen_sisters,
    hamming_shell_candidates,
    load_corpus,
    pool_sisters,
    strategy_budgets,
    strategy_costs,
    success_curve,
    synthetic_corpus,
)


# ---------- Копії та голосування ----------
@pytest.mark.parametrize(
    "sisters, expected",
    [
        (("wasswgrd", "phssyotd", "password"), "password"),
        (("rockyeu", "rockyou", "hozkyxu"), "rocky?u"),
        (("qwerty",), "qwerty"),
        (("ab", "cd"), "??"),
    ],
)
def test_pool_sisters(sisters, expected):
    assert pool_sisters(sisters).pattern == expected


def test_pool_sisters_needs_equal_lengths():
    with pytest.raises(GuessworkError):
        pool_sisters(["abc", "ab"])


def test_sisters_are_seeded():
    assert gen_sisters("password", 3, 0.3, 42) == gen_sisters("password", 3, 0.3, 42)
    assert gen_sisters("password", 2, 0.0, 1) == ["password", "password"]


def test_full_flip_changes_every_letter():
    for sister in gen_sisters("password", 20, 1.0, 3):
        assert all(a != b for a, b in zip(sister, "password"))


def test_flip_rate():
    sisters = gen_sisters("abcdefghij", 2000, 0.3, 9)
    mean = sum(sum(a != b for a, b in zip(s, "abcdefghij")) for s in sisters) / len(sisters)
    assert mean == pytest.approx(3.0, abs=0.15)


@pytest.mark.parametrize("bad", [dict(flip_prob=1.5), dict(m=0), dict(password="Pass")])
def test_gen_sisters_validation(bad):
    kwargs = dict(password="pass", m=2, flip_prob=0.3, seed=0)
    kwargs.update(bad)
    with pytest.raises(GuessworkError):
        gen_sisters(**kwargs)


# ---------- Лічильники спроб ----------
def test_decentralized_index_examples():
    assert decentralized_index("password", "password") == 1
    # оболонка 0, дві позиції перед останньою, остання літера 'z' (24-та серед 25 замін 'c')
    assert decentralized_index("abz", "abc") == 76


@pytest.mark.parametrize("sister, depth", [("ab", 2), ("cat", 2)])
def test_decentralized_index_follows_the_enumeration(sister, depth):
    for position, candidate in enumerate(hamming_shell_candidates(sister, depth), start=1):
        assert decentralized_index(candidate, sister) == position


def test_hamming_shells_cover_everything_once():
    words = list(hamming_shell_candidates("ab", 2))
    assert len(words) == 26 ** 2
    assert len(set(words)) == 26 ** 2


def test_decentralized_budget():
    assert decentralized_guess_count("abz", "abc", 100).index == 76
    assert decentralized_guess_count("abz", "abc", 75).status == "exhausted"


def test_centralized_index():
    pattern = PooledPattern(pattern="rocky?u")
    assert centralized_index("rockyou", pattern) == 15
    assert centralized_index("rockyou", PooledPattern(pattern="rockyou")) == 1
    assert centralized_guess_count("rockeou", PooledPattern(pattern="rocky?u"), 10 ** 6).status == "mismatch"
    assert centralized_guess_count("rockyou", pattern, 14).status == "exhausted"


def test_centralized_index_follows_erasure_fill():
    pattern = PooledPattern(pattern="a??")
    words = list(erasure_candidates(pattern))
    assert len(words) == 676
    for position, word in enumerate(words, start=1):
        assert centralized_index(word, pattern) == position


def test_length_mismatch():
    with pytest.raises(GuessworkError):
        decentralized_index("abc", "ab")
    with pytest.raises(GuessworkError):
        centralized_index("abc", PooledPattern(pattern="a?"))


# ---------- Корпус ----------
def test_load_corpus(tmp_path):
    path = tmp_path / "list.txt"
    path.write_text("abc\nabc\nzzz\nAbc\nabc1\n\n5\tqwe\n", encoding="utf-8")
    corpus = load_corpus(path)
    assert corpus.entries == (("qwe", 5.0), ("abc", 2.0), ("zzz", 1.0))
    assert load_corpus(path, top_k=1).passwords == ["qwe"]
    assert load_corpus(path, length_filter=3).total_weight == 8.0


def test_load_corpus_errors(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "missing.txt")
    empty = tmp_path / "empty.txt"
    empty.write_text("123\nABC\n", encoding="utf-8")
    with pytest.raises(CorpusError):
        load_corpus(empty)


def test_synthetic_corpus():
    corpus = synthetic_corpus(50, seed=3)
    assert len(corpus) == 50
    assert corpus == synthetic_corpus(50, seed=3)
    weights = [w for _, w in corpus.entries]
    assert weights == sorted(weights, reverse=True)
    assert all(6 <= len(p) <= 10 for p in corpus.passwords)


def test_corpus_rejects_duplicates():
    with pytest.raises(ValueError):
        PasswordCorpus(entries=(("abc", 1.0), ("abc", 2.0)))


# ---------- Криві успіху ----------
def test_clean_sisters_are_found_at_once():
    corpus = synthetic_corpus(20, seed=0)
    curves = success_curve(corpus, ToyConfig(m=3, flip_prob=0.0), budgets=[1, 2])
    for curve in curves.values():
        assert curve.points[0].fraction_recovered == pytest.approx(1.0)


def test_decentralized_never_loses_to_a_single_sister():
    corpus = synthetic_corpus(300, seed=1)
    costs = strategy_costs(corpus, ToyConfig(m=3, flip_prob=0.3), seed=5)
    assert all(d <= s for d, s in zip(costs["decentralized"], costs["single"]))
    curves = success_curve(corpus, ToyConfig(m=3, flip_prob=0.3), seed=5)
    for single, decentralized in zip(curves["single"].points, curves["decentralized"].points):
        assert decentralized.fraction_recovered >= single.fraction_recovered


@pytest.mark.parametrize("seed", TOY_CHECK_SEEDS)
def test_pooling_wins_by_a_wide_margin_on_zipf_corpus(seed):
    corpus = synthetic_corpus(1000, seed, TOY_CHECK_LENGTH, TOY_CHECK_LENGTH)
    half = strategy_budgets(corpus, ToyConfig(m=TOY_CHECK_M, flip_prob=0.3), seed)
    assert None not in half.values()
    assert half["centralized"] < half["decentralized"] < half["single"]
    assert 5 * half["centralized"] <= half["decentralized"]


def test_budget_for_fraction_is_an_exact_weighted_quantile():
    corpus = PasswordCorpus(entries=(("abc", 2.0), ("abd", 1.0), ("abe", 1.0)))
    costs = [10, None, 3]
    assert budget_for_fraction(corpus, costs, 0.25) == 3
    assert budget_for_fraction(corpus, costs, 0.5) == 10
    assert budget_for_fraction(corpus, costs, 0.75) == 10
    assert budget_for_fraction(corpus, costs, 0.9) is None
    assert budget_for_fraction(corpus, [None, None, None], 0.1) is None


def test_budget_for_fraction_validation():
    corpus = PasswordCorpus(entries=(("abc", 1.0),))
    with pytest.raises(GuessworkError):
        budget_for_fraction(corpus, [1, 2])
    with pytest.raises(GuessworkError):
        budget_for_fraction(corpus, [1], 0.0)


def test_exact_budget_agrees_with_the_curve_grid():
    corpus = synthetic_corpus(200, seed=3)
    config = ToyConfig(m=3, flip_prob=0.3)
    exact = strategy_budgets(corpus, config, seed=3)
    curves = success_curve(corpus, config, seed=3)
    for strategy, budget in exact.items():
        gridded = budget_to_fraction(curves[strategy])
        if budget is None:
            assert gridded is None
        else:
            # сітка степенів двійки: перша точка не менша за точний бюджет
            assert gridded == min((b for b in DEFAULT_TOY_BUDGETS if b >= budget), default=None)


def test_success_curve_is_reproducible():
    corpus = synthetic_corpus(30, seed=2)
    assert success_curve(corpus, seed=4) == success_curve(corpus, seed=4)


def test_budget_to_fraction():
    curve = SuccessCurve(
        strategy="single",
        points=[SuccessPoint(budget=1, fraction_recovered=0.1), SuccessPoint(budget=8, fraction_recovered=0.6)],
    )
    assert budget_to_fraction(curve, 0.5) == 8
    assert budget_to_fraction(curve, 0.9) is None


def test_success_curve_rejects_bad_budgets():
    with pytest.raises(GuessworkError):
        success_curve(synthetic_corpus(5), budgets=[0, 4])
