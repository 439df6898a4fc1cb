import enum
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from sharpe_pi.core.exceptions import InstanceValidationError


class SettingKind(str, enum.Enum):
    average = "average"
    discounted = "discounted"


class Setting(BaseModel):
    """
    Evaluation setting. ``mu`` is the initial distribution of the discounted
    setting; ``None`` means uniform over the states of the instance.
    """
    kind: SettingKind = Field(default=SettingKind.average)
    alpha: Optional[float] = Field(default=None, description="Discount factor in (0, 1)")
    mu: Optional[Tuple[float, ...]] = Field(default=None)

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_discounted(self) -> "Setting":
        if self.kind == SettingKind.average:
            return self
        if self.alpha is None or not 0.0 < self.alpha < 1.0:
            raise ValueError("discounted setting requires alpha strictly inside (0, 1)")
        if self.mu is not None:
            if any(p < 0.0 for p in self.mu):
                raise ValueError("mu must be nonnegative")
            if abs(math.fsum(self.mu) - 1.0) > 1e-12:
                raise ValueError("mu must sum to 1")
        return self

    @classmethod
    def average(cls) -> "Setting":
        return cls(kind=SettingKind.average)

    @classmethod
    def discounted(cls, alpha: float, mu: Optional[Tuple[float, ...]] = None) -> "Setting":
        return cls(kind=SettingKind.discounted, alpha=alpha,
                   mu=tuple(mu) if mu is not None else None)

    @property
    def is_discounted(self) -> bool:
        return self.kind == SettingKind.discounted

    def initial_distribution(self, n_states: int) -> np.ndarray:
        if self.mu is None:
            return np.full(n_states, 1.0 / n_states)
        if len(self.mu) != n_states:
            raise InstanceValidationError(
                f"mu has {len(self.mu)} entries but the instance has {n_states} states")
        return np.asarray(self.mu, dtype=float)
