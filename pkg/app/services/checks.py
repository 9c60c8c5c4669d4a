"""
Набори перевірок для `guesswork check`.

Кожен набір повертає список CheckResult; CLI завершується з кодом 3, якщо хоч
одна перевірка не пройшла. Перевіряються тотожності закритих форм, узгодженість
методів, еквівалентність рангів з повним переліком і якісні тренди.
"""

import itertools
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from app.constants import CONVERGENCE_TOL, DEFAULT_FLIP_PROB, TOY_CHECK_LENGTH, TOY_CHECK_M, TOY_CHECK_SEEDS
from app.models import Pmf
from app.schemas import CheckResult, ToyConfig
from app.services import exponents, lemmas, oracle, passwords, simulation
from app.services.channels import bec, bsc, noiseless
from app.services.information import binary_renyi, binary_shannon
from app.services.ranking import engine_for
from app.services.threshold import dmc_decentralized_exponent

logger = logging.getLogger(__name__)

_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def _result(suite: str, name: str, passed: bool, detail: str = "") -> CheckResult:
    return CheckResult(suite=suite, name=name, passed=bool(passed), detail=detail)


def closed_forms() -> List[CheckResult]:
    suite = "closed-forms"
    out = []
    for eps, m in itertools.product(_GRID, (1, 2, 3)):
        value = exponents.bec_centralized_exponent(eps, m, 1.0).value
        delta = abs(value - math.log2(1.0 + eps ** m))
        out.append(_result(suite, f"bec-centralized eps={eps} m={m}", delta <= 1e-8, f"delta={delta:.3g}"))
    for delta_p in [round(0.05 * k, 2) for k in range(1, 10)]:
        value = exponents.bsc_centralized_exponent_m2(delta_p, 1.0).value
        delta = abs(value - math.log2(1.0 + 4.0 * delta_p * (1.0 - delta_p)))
        out.append(_result(suite, f"bsc-centralized-m2 delta={delta_p}", delta <= 1e-6, f"delta={delta:.3g}"))

    # об'єднання спостережень = умовний показник каналу-добутку
    pooled = exponents.centralized_exponent(Pmf.uniform(2), bec(0.5), 2, 1.0).value
    direct = exponents.bec_centralized_exponent(0.5, 2, 1.0).value
    out.append(_result(suite, "bec product channel", abs(pooled - direct) <= 1e-9, f"{pooled:.9g} vs {direct:.9g}"))

    bec_limit = exponents.bec_decentralized_exponent(0.5, 64, 1.0).value
    out.append(_result(suite, "bec decentralized m=64", abs(bec_limit - 0.5) <= 0.01, f"{bec_limit:.9g}"))
    bsc_limit = exponents.bsc_decentralized_exponent(0.2, 64, 1.0).value
    out.append(_result(suite, "bsc decentralized m=64", abs(bsc_limit - binary_shannon(0.2)) <= 0.01, f"{bsc_limit:.9g}"))

    bounds = [exponents.majority_collapse_bound(0.1, m, 1.0).value for m in (1, 3, 5, 7)]
    decreasing = all(b < a for a, b in zip(bounds, bounds[1:]))
    out.append(_result(suite, "majority bound decreasing", decreasing, ",".join(f"{b:.6g}" for b in bounds)))
    return out


def dmc() -> List[CheckResult]:
    suite = "dmc"
    out = []
    for m in (1, 2):
        got = dmc_decentralized_exponent(Pmf.uniform(2), bec(0.5), m, 1.0).value
        want = exponents.bec_decentralized_exponent(0.5, m, 1.0).value
        out.append(_result(suite, f"bec(0.5) m={m}", abs(got - want) <= 5e-3, f"{got:.6g} vs {want:.6g}"))
        got = dmc_decentralized_exponent(Pmf.uniform(2), bsc(0.2), m, 1.0).value
        want = exponents.bsc_decentralized_exponent(0.2, m, 1.0).value
        out.append(_result(suite, f"bsc(0.2) m={m}", abs(got - want) <= 5e-3, f"{got:.6g} vs {want:.6g}"))
    return out


def rank_mismatches(p_x: Pmf, w, n: int) -> int:
    """Кількість пар (x, y), де ранг без перебору відрізняється від повного переліку."""
    engine = engine_for(p_x, w)
    table = oracle.rank_table(p_x, w, n)
    xs = list(itertools.product(range(len(w.input)), repeat=n))
    ys = itertools.product(range(len(w.output)), repeat=n)
    return sum(int(np.count_nonzero(engine.ranks_for(xs, y) != table[:, j])) for j, y in enumerate(ys))


def rank_equivalence(max_n_bsc: int = 8, max_n_bec: int = 8) -> List[CheckResult]:
    suite = "rank-equivalence"
    out = []
    p_x = Pmf.uniform(2)
    for name, w, max_n in (("bsc(0.3)", bsc(0.3), max_n_bsc), ("bec(0.4)", bec(0.4), max_n_bec)):
        for n in range(1, max_n + 1):
            mismatches = rank_mismatches(p_x, w, n)
            out.append(_result(suite, f"{name} n={n}", mismatches == 0, f"mismatches={mismatches}"))
    return out


def finite_n() -> List[CheckResult]:
    suite = "finite-n"
    p_x, w = Pmf.uniform(2), bec(0.5)
    cases = [
        ("conditional m=1", oracle.conditional_moment_exact(p_x, w, 1, 1.0).moment, 1.25),
        ("centralized m=2", oracle.centralized_moment_exact(p_x, w, 1, 2, 1.0).moment, 1.125),
        ("decentralized m=2", oracle.decentralized_moment_exact(p_x, w, 1, 2, 1.0).moment, 1.125),
    ]
    out = [_result(suite, name, abs(got - want) <= 1e-12, f"{got!r}") for name, got, want in cases]

    source = Pmf.from_probs([0.5, 0.3, 0.2])
    for rho in (0.5, 1.0, 2.0):
        lower, upper = oracle.single_letter_bounds(source, rho)
        moment = oracle.moment_exact(source, 1, rho).moment
        out.append(_result(suite, f"single-letter sandwich rho={rho}", lower <= moment <= upper, f"{lower:.6g}<={moment:.6g}<={upper:.6g}"))
    return out


def approaches_monotonically(values: Sequence[float], target: float, tol: float = CONVERGENCE_TOL) -> bool:
    """|v_k − target| не зростає вздовж послідовності (з допуском tol)."""
    gaps = [abs(v - target) for v in values]
    return all(later <= earlier + tol for earlier, later in zip(gaps, gaps[1:]))


def convergence(max_n: int = 10) -> List[CheckResult]:
    """bsc(0.25), m=2: скінченні значення не перевищують одиночного агента і монотонно наближаються до межі."""
    suite = "convergence"
    p_x, w = Pmf.uniform(2), bsc(0.25)
    target = binary_renyi(0.25, 2.0 / 3.0)
    per_symbol = []
    out = []
    for n in range(2, max_n + 1):
        dec = oracle.decentralized_moment_exact(p_x, w, n, 2, 1.0)
        single = oracle.conditional_moment_exact(p_x, w, n, 1.0)
        per_symbol.append(dec.per_symbol_exponent)
        out.append(
            _result(suite, f"min over agents n={n}", dec.log2_moment <= single.log2_moment + 1e-9,
                    f"{dec.log2_moment:.9g} vs {single.log2_moment:.9g}")
        )
    out.append(
        _result(suite, "approaches the exponent monotonically", approaches_monotonically(per_symbol, target),
                ",".join(f"{v:.4g}" for v in per_symbol) + f" -> {target:.6g}")
    )
    return out


def soft_elimination() -> List[CheckResult]:
    suite = "soft-elimination"
    failures = []
    total = 0
    for n_size in range(3, 65):
        for k in range(2, n_size + 1):
            for rho in (0.5, 1.0, 2.0):
                total += 1
                if not lemmas.soft_elimination_check(n_size, k, rho).inequalities_hold:
                    failures.append(f"N={n_size},K={k},rho={rho}")
    example = lemmas.soft_elimination_check(4, 2, 1.0)
    exact = (
        abs(example.moment_uniform_n - 2.5) <= 1e-12
        and abs(example.moment_soft - 13.0 / 6.0) <= 1e-12
        and abs(example.moment_uniform_n_minus_1 - 2.0) <= 1e-12
    )
    return [
        _result(suite, "grid N=3..64", not failures, f"checked={total} failed={failures[:5]}"),
        _result(suite, "N=4 K=2 rho=1", exact, repr(example.model_dump())),
    ]


def concatenation() -> List[CheckResult]:
    suite = "concatenation"
    out = []
    n = 10
    uniform = lemmas.concatenation_moment_exact(1.0, 0.2, n, 1.0).moment
    out.append(_result(suite, "lambda=1 is uniform", abs(uniform - (2 ** n + 1) / 2) <= 1e-9 * uniform, f"{uniform!r}"))
    bern = lemmas.concatenation_moment_exact(0.0, 0.2, n, 1.0).moment
    plain = oracle.moment_exact(Pmf.bernoulli(0.2), n, 1.0).moment
    out.append(_result(suite, "lambda=0 is Bernoulli", abs(bern - plain) <= 1e-9 * plain, f"{bern!r} vs {plain!r}"))

    # верхня межа (Σ P^{1/2})^2 дорівнює 2^{n·показник}; нижня менша на (1 + n ln 2)^ρ
    n = 12
    value = lemmas.concatenation_moment_exact(0.5, 0.2, n, 1.0).per_symbol_exponent
    exponent = exponents.concatenation_exponent(0.5, 0.2, 1.0)
    slack = math.log2(1.0 + n * math.log(2)) / n
    within = exponent - slack - 1e-9 <= value <= exponent + 1e-9
    out.append(_result(suite, "lambda=0.5 p=0.2 n=12 sandwich", within, f"{value:.6g} in [{exponent - slack:.6g}, {exponent:.6g}]"))
    return out


def monte_carlo(trials: int = 10 ** 6, seeds: int = 20, required: int = 19) -> List[CheckResult]:
    suite = "monte-carlo"
    p_x, w = Pmf.uniform(2), bec(0.5)
    out = []
    for name, run, exact in (
        ("decentralized m=1", lambda s: simulation.simulate_decentralized(p_x, w, 1, 1, 1.0, trials, s), 1.25),
        ("centralized m=2", lambda s: simulation.simulate_centralized(p_x, w, 1, 2, 1.0, trials, s), 1.125),
    ):
        hits = 0
        for seed in range(seeds):
            summary = run(seed)
            hits += abs(summary.moment - exact) <= 3 * summary.standard_error
        out.append(_result(suite, name, hits >= required, f"{hits}/{seeds} within 3 se, need {required}"))

    clean = simulation.simulate_decentralized(p_x, noiseless(2), 4, 1, 1.0, 1000, 0)
    out.append(_result(suite, "noiseless channel", clean.moment == 1.0, f"{clean.moment!r}"))
    return out


def shape(points: int = 61) -> List[CheckResult]:
    """Централізована пара строго краща за будь-яку децентралізовану групу m ≤ 8."""
    suite = "shape"
    out = []
    bad = []
    for eps in np.linspace(0.2, 0.8, points):
        c = exponents.bec_centralized_exponent(float(eps), 2, 1.0).value
        if not all(c < exponents.bec_decentralized_exponent(float(eps), m, 1.0).value for m in range(1, 9)):
            bad.append(round(float(eps), 4))
    out.append(_result(suite, "bec eps-sweep", not bad, f"violations={bad[:5]}"))
    bad = []
    for delta in np.linspace(0.1, 0.4, points):
        c = exponents.bsc_centralized_exponent_m2(float(delta), 1.0).value
        if not all(c < exponents.bsc_decentralized_exponent(float(delta), m, 1.0).value for m in range(1, 9)):
            bad.append(round(float(delta), 4))
    out.append(_result(suite, "bsc delta-sweep", not bad, f"violations={bad[:5]}"))
    return out


def toy(size: int = 1000, seeds: Sequence[int] = TOY_CHECK_SEEDS) -> List[CheckResult]:
    """
    Бюджет до 50% зваженого відновлення на корпусі Ципфа.

    При m=3 і довжинах 6..10 стійко лише decentralized ≤ single (поточково).
    Строгий порядок centralized < decentralized < single з п'ятикратним відривом
    перевіряється для m=TOY_CHECK_M і паролів довжини TOY_CHECK_LENGTH.
    """
    suite = "toy"
    out = []

    def cost(value: Optional[int]) -> float:
        return math.inf if value is None else value

    pooled = ToyConfig(m=TOY_CHECK_M, flip_prob=DEFAULT_FLIP_PROB)
    for seed in seeds:
        corpus = passwords.synthetic_corpus(size, seed, TOY_CHECK_LENGTH, TOY_CHECK_LENGTH)
        half = {s: cost(b) for s, b in passwords.strategy_budgets(corpus, pooled, seed).items()}
        c, d, s = half["centralized"], half["decentralized"], half["single"]
        out.append(
            _result(suite, f"m={TOY_CHECK_M} L={TOY_CHECK_LENGTH} seed={seed} centralized 5x below decentralized below single",
                    c < d < s and 5 * c <= d, f"centralized={c},decentralized={d},single={s}")
        )

    corpus = passwords.synthetic_corpus(size, 0)
    costs = passwords.strategy_costs(corpus, ToyConfig(m=3, flip_prob=DEFAULT_FLIP_PROB), seed=0)
    pointwise = all(
        dec <= single for dec, single in zip(costs["decentralized"], costs["single"])
    )
    exact_copies = passwords.success_curve(corpus, ToyConfig(m=3, flip_prob=0.0), budgets=[1], seed=0)
    out.extend([
        _result(suite, "m=3 decentralized <= single for every entry", pointwise),
        _result(
            suite,
            "flip_prob=0 recovers everything at budget 1",
            all(c.points[0].fraction_recovered == 1.0 for c in exact_copies.values()),
        ),
    ])
    return out


SUITES: Dict[str, Callable[[], List[CheckResult]]] = {
    "closed-forms": closed_forms,
    "dmc": dmc,
    "rank-equivalence": rank_equivalence,
    "finite-n": finite_n,
    "convergence": convergence,
    "soft-elimination": soft_elimination,
    "concatenation": concatenation,
    "monte-carlo": monte_carlo,
    "shape": shape,
    "toy": toy,
}


def run_checks(suite: Optional[str] = "all") -> List[CheckResult]:
    names = list(SUITES) if suite in (None, "all") else [suite]
    results: List[CheckResult] = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        suite_results = SUITES[name]()
        failed = sum(not r.passed for r in suite_results)
        logger.info("check.suite name=%s checks=%d failed=%d", name, len(suite_results), failed)
        results.extend(suite_results)
    return results
