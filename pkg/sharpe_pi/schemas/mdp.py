from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, Field, computed_field, field_validator


class MdpSpec(BaseModel):
    """Decoded instance document; stochasticity is checked by ``validate``."""
    states: List[str] = Field(..., description="Ordered state identifiers")
    actions: Dict[str, List[str]] = Field(
        ..., description="Admissible actions per state, in order")
    transition: Dict[str, Dict[str, Dict[str, float]]] = Field(
        ..., description="p(s'|s,a); omitted destinations have probability 0")
    reward: Dict[str, Dict[str, float]] = Field(
        ..., description="r(s,a), already an excess reward")

    class Config:
        json_schema_extra = {
            "example": {
                "states": ["s1"],
                "actions": {"s1": ["a1"]},
                "transition": {"s1": {"a1": {"s1": 1.0}}},
                "reward": {"s1": {"a1": 5.0}},
            }
        }


class Policy(BaseModel):
    """Stationary deterministic policy: one action index per state."""
    choice: Tuple[int, ...]

    class Config:
        frozen = True

    @field_validator("choice")
    @classmethod
    def non_negative(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(index < 0 for index in value):
            raise ValueError("action indices must be non-negative")
        return value

    @classmethod
    def of(cls, *indices: int) -> "Policy":
        return cls(choice=tuple(indices))

    def __len__(self) -> int:
        return len(self.choice)

    def __lt__(self, other: "Policy") -> bool:
        return self.choice < other.choice


class ValidatedMdp(BaseModel):
    """
    Validated, immutable problem instance in dense form.

    ``transition`` has shape (|S|, max|A|, |S|) and ``reward`` shape
    (|S|, max|A|); slots beyond |A(s)| are zero and masked out by
    ``action_mask``.
    """
    state_ids: Tuple[str, ...]
    action_ids: Tuple[Tuple[str, ...], ...]
    transition: np.ndarray
    reward: np.ndarray
    action_mask: np.ndarray
    r_min: float
    r_max: float

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @computed_field
    @property
    def n_states(self) -> int:
        return len(self.state_ids)

    @computed_field
    @property
    def n_actions(self) -> Tuple[int, ...]:
        return tuple(len(ids) for ids in self.action_ids)

    @property
    def max_actions(self) -> int:
        return max(self.n_actions)

    @property
    def policy_count(self) -> int:
        count = 1
        for k in self.n_actions:
            count *= k
        return count


class MarkovRewardProcess(BaseModel):
    """Chain induced by a policy: row-stochastic ``P`` and reward vector ``r``."""
    P: np.ndarray
    r: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        frozen = True
