import enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, computed_field, model_validator

from sharpe_pi.core.config import settings
from sharpe_pi.schemas.mdp import Policy, ValidatedMdp
from sharpe_pi.schemas.metrics import PolicyMetrics
from sharpe_pi.schemas.setting import Setting


class Interval(BaseModel):
    """Closed interval [lo, hi] of pseudo-mean values."""
    lo: float
    hi: float

    class Config:
        frozen = True

    @model_validator(mode="after")
    def ordered(self) -> "Interval":
        if self.lo > self.hi:
            raise ValueError(f"interval lower end {self.lo} exceeds upper end {self.hi}")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return (self.hi + self.lo) / 2.0

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    @classmethod
    def around(cls, center: float, radius: float) -> "Interval":
        return cls(lo=center - radius, hi=center + radius)


class IntervalSet(BaseModel):
    """Disjoint closed intervals, kept sorted descending by upper endpoint."""
    parts: Tuple[Interval, ...] = ()

    class Config:
        frozen = True

    @classmethod
    def full(cls, lo: float, hi: float) -> "IntervalSet":
        return cls(parts=(Interval(lo=lo, hi=hi),))

    @property
    def measure(self) -> float:
        return sum(part.width for part in self.parts)

    def is_empty(self) -> bool:
        return not self.parts

    def __len__(self) -> int:
        return len(self.parts)


class ReshapedMdp(BaseModel):
    """Auxiliary standard MDP with reward r'(s,a) = r(s,a)^2 - kappa (r(s,a) - y)^2."""
    base: ValidatedMdp
    kappa: float = Field(..., ge=0.0)
    y: float
    reward: np.ndarray
    allowed: np.ndarray = Field(..., description="Action mask the improvement step may choose from")

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class PolicyIterationResult(BaseModel):
    policy: Policy
    value: float = Field(..., description="Gain (average) or mu.v' (discounted)")
    values: np.ndarray = Field(..., description="Bias h or value vector v'")
    trace: List[Policy]

    class Config:
        arbitrary_types_allowed = True

    @property
    def sweeps(self) -> int:
        return len(self.trace) - 1


class AuxSolution(BaseModel):
    """Outcome of one M(kappa, y) solve, evaluated under the original reward."""
    kappa: float
    y: float
    policy: Policy
    metrics: PolicyMetrics
    m2v: float
    dominated: Interval
    inner_trace: List[Policy]
    pi_sweeps: int


class M2VOptions(BaseModel):
    early_exit: bool = False
    extra_domination: bool = False


class M2VSolution(BaseModel):
    kappa: float
    best: Policy
    best_metrics: PolicyMetrics
    best_m2v: float
    kappa_prime: float
    candidates: List[AuxSolution]
    kappa_prime_max_so_far: List[float] = Field(default_factory=list)
    aborted_early: bool = False
    pi_sweeps: int = 0

    @computed_field
    @property
    def aux_solve_count(self) -> int:
        return len(self.candidates)


class Algorithm(str, enum.Enum):
    srpi = "srpi"
    srpi_plus = "srpi+"


class SolverConfig(BaseModel):
    algorithm: Algorithm = Algorithm.srpi
    setting: Setting = Field(default_factory=Setting.average)
    initial_policy: Optional[Policy] = Field(
        default=None, description="Defaults to the first action in every state")
    initial_kappa: float = Field(default=0.0, ge=0.0)
    kappa_tol: PositiveFloat = Field(default_factory=lambda: settings.KAPPA_TOL)
    big_m: PositiveFloat = Field(default_factory=lambda: settings.BIG_M)
    epsilon_y: PositiveFloat = Field(default_factory=lambda: settings.EPSILON_Y)
    probe_budget: PositiveInt = Field(default_factory=lambda: settings.PROBE_BUDGET)
    outer_budget: PositiveInt = Field(default_factory=lambda: settings.OUTER_BUDGET)
    chain_warm_start: bool = Field(
        default=False,
        description="Carry the last inner policy across outer iterations")


class OuterRow(BaseModel):
    kappa: float
    solution: M2VSolution


class SolveReport(BaseModel):
    algorithm: Algorithm
    optimal_policy: Policy
    optimal_metrics: PolicyMetrics
    kappa_star: float
    sharpe_star: float
    outer_rows: List[OuterRow]
    mdps_solved: int
    pi_sweeps: int
    best_so_far: List[float] = Field(
        default_factory=list, description="Running max of kappa' after each M(kappa, y) solve")
    wall_time: float = 0.0

    @property
    def kappas(self) -> List[float]:
        return [row.kappa for row in self.outer_rows]
