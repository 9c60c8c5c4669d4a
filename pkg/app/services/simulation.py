"""
Відтворюваний Монте-Карло для централізованої та децентралізованої атак.

Випадковість спроби t береться лише з (master_seed, потік, t): потік 0 дає секрет,
потік i дає шум агента i. Тому результат не залежить від кількості воркерів і
розміру блоку, а агент i бачить той самий шум при будь-якому m (спільні випадкові числа).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.stats import linregress

from app.exceptions import GuessworkError
from app.models import Channel, LogBase, Pmf
from app.schemas import FitResult, MomentReport, SimulationSummary, TrialRecord
from app.services.channels import product_channel
from app.services.ranking import RankEngine, engine_for
from app.settings import get_settings
from app.utils.numeric import log2_sum_exp2
from app.utils.seeding import SECRET_STREAM, guarded_cdf, sample_rows, stream_uniforms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Block:
    start: int
    count: int


@dataclass
class _Sampler:
    p_x: Pmf
    w: Channel
    n: int
    master_seed: int

    def __post_init__(self):
        self.x_cdf = guarded_cdf(self.p_x.array)
        self.w_cdf = guarded_cdf(self.w.matrix)

    def secrets(self, block: _Block) -> np.ndarray:
        u = stream_uniforms(self.master_seed, SECRET_STREAM, block.start, block.count, self.n)
        return sample_rows(self.x_cdf, np.zeros_like(u, dtype=np.int64), u)

    def observations(self, block: _Block, x: np.ndarray, agent: int) -> np.ndarray:
        u = stream_uniforms(self.master_seed, agent + 1, block.start, block.count, self.n)
        return sample_rows(self.w_cdf, x, u)


def _log2_ranks(engine: RankEngine, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """log2 G*(x|y) по рядках; кожна унікальна пара (x, y) рангується один раз."""
    pairs = np.concatenate([x, y], axis=1)
    uniq, inverse = np.unique(pairs, axis=0, return_inverse=True)
    n = x.shape[1]
    logs = np.array([math.log2(engine.rank(row[:n].tolist(), row[n:].tolist())) for row in uniq])
    return logs[np.asarray(inverse).reshape(-1)]


def _pool(observations: List[np.ndarray], ny: int) -> np.ndarray:
    """Кортеж (y_1..y_m) на кожній позиції → індекс у лексикографічному алфавіті 𝒴^m."""
    pooled = np.zeros_like(observations[0])
    for y in observations:
        pooled = pooled * ny + y
    return pooled


def _validate(n: int, m: int, rho: float, trials: int, master_seed: int) -> None:
    if n < 1 or m < 1:
        raise GuessworkError("n and m must be at least 1")
    if not rho > 0:
        raise GuessworkError(f"rho must be positive, got {rho}")
    if trials < 2:
        raise GuessworkError("at least two trials are needed for a standard error")
    if master_seed < 0:
        raise GuessworkError("master_seed must be nonnegative")


def _blocks(trials: int, block_size: int) -> List[_Block]:
    return [_Block(start, min(block_size, trials - start)) for start in range(0, trials, block_size)]


def _run_blocks(fn, blocks: Sequence[_Block], workers: int) -> List[np.ndarray]:
    if workers <= 1 or len(blocks) == 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map зберігає порядок блоків → детермінована редукція
        return list(pool.map(fn, blocks))


def summarize(log2_values: np.ndarray, rho: float, n: int, m: int, trials: int, master_seed: int, strategy: str) -> SimulationSummary:
    """
    Середнє rank^ρ у лог-домені та стандартна похибка лінійної оцінки.
    v_t = ρ·log2 R_t; працюємо з 2^{v_t − max v}, щоб пережити сотні біт.
    """
    values = rho * np.asarray(log2_values, dtype=float)
    top = float(values.max())
    scaled = np.exp2(values - top)
    mean_scaled = math.fsum(scaled.tolist()) / trials
    second_scaled = math.fsum((scaled * scaled).tolist()) / trials
    var_scaled = max(second_scaled - mean_scaled ** 2, 0.0) * trials / (trials - 1)
    se_scaled = math.sqrt(var_scaled / trials)

    log2_moment = log2_sum_exp2(values) - math.log2(trials)
    moment = math.inf if log2_moment >= 1024 else 2.0 ** log2_moment
    standard_error = se_scaled * 2.0 ** top if top < 1024 else math.inf
    relative = se_scaled / mean_scaled
    return SimulationSummary(
        strategy=strategy,
        n=n,
        m=m,
        rho=rho,
        trials=trials,
        master_seed=master_seed,
        moment=moment,
        log2_moment=log2_moment,
        standard_error=standard_error,
        per_symbol_exponent=log2_moment / n,
        exponent_error=relative / math.log(2) / n,
    )


def _simulate(
    p_x: Pmf,
    w: Channel,
    n: int,
    m: int,
    rho: float,
    trials: int,
    master_seed: int,
    centralized: bool,
    workers: Optional[int],
    block_size: Optional[int],
) -> np.ndarray:
    _validate(n, m, rho, trials, master_seed)
    settings = get_settings()
    sampler = _Sampler(p_x, w, n, master_seed)
    ny = len(w.output)
    engine = engine_for(p_x, product_channel(w, m) if centralized else w)

    def run(block: _Block) -> np.ndarray:
        x = sampler.secrets(block)
        observations = [sampler.observations(block, x, agent) for agent in range(m)]
        if centralized:
            return _log2_ranks(engine, x, _pool(observations, ny))
        per_agent = np.stack([_log2_ranks(engine, x, y) for y in observations])
        return per_agent.min(axis=0)

    blocks = _blocks(trials, block_size or settings.sim_block)
    results = _run_blocks(run, blocks, workers or settings.workers)
    return np.concatenate(results)


def simulate_decentralized(
    p_x: Pmf,
    w: Channel,
    n: int,
    m: int,
    rho: float,
    trials: int,
    master_seed: int,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> SimulationSummary:
    """E[min_i G*(X|Y_i)^ρ]: кожен агент рангує за власним спостереженням."""
    log2_min = _simulate(p_x, w, n, m, rho, trials, master_seed, False, workers, block_size)
    summary = summarize(log2_min, rho, n, m, trials, master_seed, "decentralized")
    logger.info("sim.decentralized n=%d m=%d trials=%d seed=%d log2_moment=%.9g", n, m, trials, master_seed, summary.log2_moment)
    return summary


def simulate_centralized(
    p_x: Pmf,
    w: Channel,
    n: int,
    m: int,
    rho: float,
    trials: int,
    master_seed: int,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> SimulationSummary:
    """E[G*(X|Y_1..Y_m)^ρ]: ранг за апостеріорним розподілом каналу-добутку."""
    log2_pooled = _simulate(p_x, w, n, m, rho, trials, master_seed, True, workers, block_size)
    summary = summarize(log2_pooled, rho, n, m, trials, master_seed, "centralized")
    logger.info("sim.centralized n=%d m=%d trials=%d seed=%d log2_moment=%.9g", n, m, trials, master_seed, summary.log2_moment)
    return summary


def trial_records(
    p_x: Pmf,
    w: Channel,
    n: int,
    m: int,
    trials: int,
    master_seed: int,
    with_pooled: bool = True,
) -> List[TrialRecord]:
    """Поспробні точні ранги (для невеликих прогонів і налагодження)."""
    _validate(n, m, 1.0, max(trials, 2), master_seed)
    sampler = _Sampler(p_x, w, n, master_seed)
    block = _Block(0, trials)
    x = sampler.secrets(block)
    observations = [sampler.observations(block, x, agent) for agent in range(m)]
    agent_engine = engine_for(p_x, w)
    pooled_engine = engine_for(p_x, product_channel(w, m)) if with_pooled else None
    pooled_y = _pool(observations, len(w.output)) if with_pooled else None

    records = []
    for t in range(trials):
        ranks = [agent_engine.rank(x[t].tolist(), y[t].tolist()) for y in observations]
        pooled = pooled_engine.rank(x[t].tolist(), pooled_y[t].tolist()) if with_pooled else None
        records.append(TrialRecord(trial_index=t, agent_ranks=ranks, min_rank=min(ranks), pooled_rank=pooled))
    return records


def exponent_fit(summaries: Sequence[Union[SimulationSummary, MomentReport]], base: LogBase = LogBase.BITS) -> FitResult:
    """Нахил найменших квадратів log2(момент) від n; потрібно щонайменше 3 різних n."""
    n_values = [s.n for s in summaries]
    if len(set(n_values)) < 3:
        raise GuessworkError("exponent_fit needs at least three distinct n values")
    y = np.array([s.log2_moment for s in summaries], dtype=float)
    x = np.array(n_values, dtype=float)
    fit = linregress(x, y)
    residuals = y - (fit.intercept + fit.slope * x)
    return FitResult(
        slope=base.from_bits(float(fit.slope)),
        intercept=base.from_bits(float(fit.intercept)),
        r_value=float(fit.rvalue),
        slope_stderr=base.from_bits(float(fit.stderr)),
        residuals=[base.from_bits(float(r)) for r in residuals],
        n_values=n_values,
    )
