from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, computed_field

from sharpe_pi.schemas.mdp import Policy


class PolicyMetrics(BaseModel):
    """
    Evaluation of one policy under one setting.

    For zero-variance policies ``zeta`` holds the big-M substitute while
    ``second_moment`` keeps the true E{Q^2}.
    """
    policy: Optional[Policy] = None
    eta: float
    zeta: float = Field(..., ge=0.0)
    second_moment: float
    sharpe: float
    cv: Optional[float] = Field(
        default=None, description="1/sharpe; undefined when |sharpe| <= 1e-12")
    zero_variance: bool = False

    class Config:
        frozen = True

    @computed_field
    @property
    def kappa(self) -> float:
        """E{Q^2} / zeta, the ratio the outer loop moves to."""
        return self.second_moment / self.zeta

    def moment_gap(self) -> float:
        return abs(self.second_moment - self.eta * self.eta - self.zeta)


class ValueFunctions(BaseModel):
    """Normalized discounted mean (``v``) and variance (``w``) value functions."""
    v: np.ndarray
    w: np.ndarray
    occupation: np.ndarray
    eta: float
    zeta: float

    class Config:
        arbitrary_types_allowed = True
        frozen = True
