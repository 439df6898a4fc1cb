from typing import List

from pydantic import BaseModel

from sharpe_pi.schemas.mdp import Policy
from sharpe_pi.schemas.metrics import PolicyMetrics


class FrontierPoint(BaseModel):
    policy: Policy
    zeta: float
    second_moment: float
    eta: float
    sharpe: float

    class Config:
        frozen = True

    @classmethod
    def from_metrics(cls, m: PolicyMetrics) -> "FrontierPoint":
        return cls(policy=m.policy, zeta=m.zeta, second_moment=m.second_moment,
                   eta=m.eta, sharpe=m.sharpe)


class OracleResult(BaseModel):
    """Exhaustive Sharpe optimum; ``all`` lists every policy in lexicographic order."""
    policy: Policy
    sharpe_star: float
    all: List[PolicyMetrics]
    sign_assumption: bool
