from typing import Any, Callable, List, Literal, Optional

from pydantic import BaseModel, Field


class RatioProblem(BaseModel):
    """
    max f(x) / g(x) over a candidate space reachable only through
    ``linearized_solver(kappa)``, which returns a maximizer of
    sign(g(x)) (f(x) - kappa g(x)).
    """
    f: Callable[[Any], float]
    g: Callable[[Any], float]
    linearized_solver: Callable[[float], Any]
    denominator_sign: Optional[Literal[-1, 1]] = Field(
        default=None, description="Global sign of g; None when it varies across candidates")

    class Config:
        arbitrary_types_allowed = True


class RatioTrace(BaseModel):
    kappas: List[float] = Field(default_factory=list, description="kappa_0, kappa_1, ...; the last value repeats")
    solutions: List[Any] = Field(default_factory=list)
    error_ratios: List[float] = Field(default_factory=list)

    class Config:
        arbitrary_types_allowed = True

    @property
    def linearized_solves(self) -> int:
        return len(self.solutions)


class RatioResult(BaseModel):
    candidate: Any
    kappa_star: float
    trace: RatioTrace

    class Config:
        arbitrary_types_allowed = True


class RateDiagnostics(BaseModel):
    error_ratios: List[float]
    decreasing: bool
