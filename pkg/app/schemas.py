import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.constants import DEFAULT_FLIP_PROB
from app.models import LogBase

Strategy = Literal["centralized", "decentralized", "single"]
Family = Literal["bec", "bsc", "custom"]


# ---------- Errors ----------
class ErrorSchema(BaseModel):
    detail: str


# ---------- Models of the side information ----------
class ChannelSpec(BaseModel):
    family: Family = "bec"
    param: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    px: Optional[List[float]] = None
    w: Optional[List[List[float]]] = None
    alphabet_x: Optional[List[str]] = None
    alphabet_y: Optional[List[str]] = None

    @model_validator(mode="after")
    def _complete(self) -> "ChannelSpec":
        if self.family in ("bec", "bsc") and self.param is None:
            raise ValueError(f"{self.family} needs a parameter")
        if self.family == "custom" and (self.px is None or self.w is None):
            raise ValueError("custom channel needs px and w")
        return self


# ---------- Moments ----------
class MomentReport(BaseModel):
    n: int
    rho: float
    m: int = 1
    strategy: str = "single"
    moment: float
    log2_moment: float
    per_symbol_exponent: float
    model_config = ConfigDict(frozen=True)

    @field_validator("moment")
    @classmethod
    def _at_least_one(cls, v: float) -> float:
        if v < 1.0 - 1e-12:
            raise ValueError(f"a guesswork moment is at least 1, got {v}")
        return v

    @classmethod
    def from_log2(cls, n: int, rho: float, log2_moment: float, strategy: str = "single", m: int = 1) -> "MomentReport":
        moment = math.inf if log2_moment >= 1024 else 2.0 ** log2_moment
        return cls(
            n=n,
            rho=rho,
            m=m,
            strategy=strategy,
            moment=moment,
            log2_moment=log2_moment,
            per_symbol_exponent=log2_moment / n,
        )


class MomentRequest(BaseModel):
    channel: ChannelSpec
    n: int = Field(ge=1)
    m: int = Field(default=1, ge=1)
    rho: float = Field(default=1.0, gt=0)
    strategy: Strategy = "single"


# ---------- Exponents ----------
class Maximizer(BaseModel):
    lambda_star: Optional[float] = None
    alpha_star: Optional[float] = None
    tilt: Optional[float] = None
    joint: Optional[List[List[float]]] = None
    extras: Dict[str, float] = Field(default_factory=dict)


class ExponentResult(BaseModel):
    value: float
    maximizer: Maximizer = Field(default_factory=Maximizer)
    method: Literal["closed-form", "scalar-optimize", "type-grid"]
    closed_form: Optional[float] = None
    is_bound: bool = False
    base: LogBase = LogBase.BITS

    @field_validator("value")
    @classmethod
    def _nonnegative(cls, v: float) -> float:
        if not v >= -1e-12:
            raise ValueError(f"exponent must be nonnegative, got {v}")
        return max(v, 0.0)


class ExponentQuery(BaseModel):
    channel: ChannelSpec
    rho: float = Field(default=1.0, gt=0)
    m: int = Field(default=1, ge=1)
    base: LogBase = LogBase.BITS


class ExponentRequest(ExponentQuery):
    strategy: Strategy = "centralized"
    resolution: float = Field(default=1e-3, gt=0)


class SweepRequest(BaseModel):
    family: Literal["bec", "bsc"] = "bec"
    rho: float = Field(default=1.0, gt=0)
    max_m: int = Field(default=4, ge=1)
    points: int = Field(default=11, ge=2, le=1001)


class SweepRow(BaseModel):
    family: str
    param: float
    strategy: Strategy
    m: int
    rho: float
    value: float
    method: str
    is_bound: bool = False


class TiltedSolution(BaseModel):
    s: float = Field(ge=0)
    q: List[List[float]]
    achieved_h: float
    objective: float


# ---------- Finite lemma checks ----------
class SoftEliminationResult(BaseModel):
    n_size: int
    k: int
    rho: float
    moment_uniform_n: float
    moment_soft: float
    moment_uniform_n_minus_1: float
    inequalities_hold: bool


class CheckResult(BaseModel):
    suite: str
    name: str
    passed: bool
    detail: str = ""


# ---------- Simulation ----------
class TrialRecord(BaseModel):
    trial_index: int
    agent_ranks: List[int]
    min_rank: int
    pooled_rank: Optional[int] = None

    @model_validator(mode="after")
    def _min(self) -> "TrialRecord":
        if self.agent_ranks and self.min_rank != min(self.agent_ranks):
            raise ValueError("min_rank must equal the minimum of the agent ranks")
        return self


class SimulationSummary(BaseModel):
    strategy: Strategy
    n: int
    m: int
    rho: float
    trials: int
    master_seed: int
    moment: float
    log2_moment: float
    standard_error: float
    per_symbol_exponent: float
    exponent_error: float


class SimulationRequest(BaseModel):
    channel: ChannelSpec
    n: int = Field(ge=1)
    m: int = Field(default=1, ge=1)
    rho: float = Field(default=1.0, gt=0)
    trials: int = Field(default=10_000, ge=2, le=10_000_000)
    master_seed: int = Field(default=0, ge=0)
    strategy: Literal["centralized", "decentralized"] = "decentralized"


class FitResult(BaseModel):
    slope: float
    intercept: float
    r_value: float
    slope_stderr: float
    residuals: List[float]
    n_values: List[int]


# ---------- Password toy ----------
class GuessOutcome(BaseModel):
    status: Literal["found", "exhausted", "mismatch"]
    index: Optional[int] = None


class ToyConfig(BaseModel):
    m: int = Field(default=3, ge=1)
    flip_prob: float = Field(default=DEFAULT_FLIP_PROB, ge=0.0, le=1.0)
    strategies: List[Strategy] = Field(default_factory=lambda: ["centralized", "decentralized", "single"])


class SuccessPoint(BaseModel):
    budget: int
    fraction_recovered: float


class SuccessCurve(BaseModel):
    strategy: Strategy
    points: List[SuccessPoint]

    @model_validator(mode="after")
    def _monotone(self) -> "SuccessCurve":
        fractions = [p.fraction_recovered for p in self.points]
        if any(b < a for a, b in zip(fractions, fractions[1:])):
            raise ValueError("success fractions must be non-decreasing in budget")
        return self


class PoolRequest(BaseModel):
    sisters: List[str] = Field(min_length=1)


class GuessRequest(BaseModel):
    secret: str
    sisters: List[str] = Field(min_length=1)
    budget: int = Field(default=2 ** 20, ge=1)


class GuessComparison(BaseModel):
    pattern: str
    single: GuessOutcome
    decentralized: GuessOutcome
    centralized: GuessOutcome


# ---------- Runs ----------
class RunConfig(BaseModel):
    subcommand: Literal["exponent", "moment", "simulate", "toy", "check", "rank"]
    channel: Optional[ChannelSpec] = None
    channel_file: Optional[str] = None
    rho: float = Field(default=1.0, gt=0)
    m: int = Field(default=1, ge=1)
    n_values: List[int] = Field(default_factory=list)
    trials: int = Field(default=10_000, ge=2)
    master_seed: int = Field(default=0, ge=0)
    base: LogBase = LogBase.BITS
    resolution: float = Field(default=1e-3, gt=0)
    strategy: Strategy = "centralized"
    output: Literal["csv", "json"] = "csv"
    sweep: bool = False
    suite: str = "all"
    corpus: Optional[str] = None
    top_k: int = Field(default=1000, ge=1)
    flip_prob: float = Field(default=DEFAULT_FLIP_PROB, ge=0.0, le=1.0)
    budgets: List[int] = Field(default_factory=list)
    x: Optional[str] = None
    y: Optional[str] = None

    @field_validator("n_values")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("every n must be at least 1")
        return v
