from typing import List, Optional

from pydantic import BaseModel, Field, PositiveInt


class BenchTrial(BaseModel):
    size: int
    trial: int
    seed: int
    srpi_solves: Optional[int] = None
    srpi_plus_solves: Optional[int] = None
    srpi_sweeps: Optional[int] = None
    srpi_plus_sweeps: Optional[int] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class BenchRow(BaseModel):
    size: PositiveInt
    trials: PositiveInt
    completed: int
    srpi_mean: Optional[float] = None
    srpi_sd: Optional[float] = None
    srpi_plus_mean: Optional[float] = None
    srpi_plus_sd: Optional[float] = None
    plus_not_worse: Optional[float] = Field(
        default=None, ge=0.0, le=1.0, description="Fraction of trials where SRPI+ solved no more M(kappa, y)")
    theoretical_bound: Optional[float] = Field(
        default=None, description="(|D| + 1)(2|D| + 1), None when it overflows a double")


class BenchReport(BaseModel):
    seed: int
    rows: List[BenchRow]
    trials: List[BenchTrial]
