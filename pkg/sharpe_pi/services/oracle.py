"""
Ground truth by exhaustive enumeration of deterministic policies, for
instances small enough to enumerate.
"""
import logging
from typing import List, Optional, Tuple

from sharpe_pi.core.exceptions import NumericalError
from sharpe_pi.schemas.mdp import ValidatedMdp
from sharpe_pi.schemas.metrics import PolicyMetrics
from sharpe_pi.schemas.oracle import FrontierPoint, OracleResult
from sharpe_pi.schemas.setting import Setting
from sharpe_pi.schemas.solver import AuxSolution
from sharpe_pi.services.evaluation import evaluate, m2v_value
from sharpe_pi.services.intervals import extra_domination_interval
from sharpe_pi.services.mdp_core import enumerate_policies

logger = logging.getLogger(__name__)

SLOPE_TIE_TOL = 1e-12


def _within(value: float, bound: float) -> bool:
    return value <= bound + 1e-8 * max(1.0, abs(bound))


def enumerate_metrics(mdp: ValidatedMdp, setting: Setting, big_m: Optional[float] = None,
                      cap: Optional[int] = None) -> List[PolicyMetrics]:
    return [evaluate(mdp, d, setting, big_m) for d in enumerate_policies(mdp, cap)]


def sign_assumption_holds(metrics: List[PolicyMetrics]) -> bool:
    """psi* > -psi^d for every policy, so maximizing psi^2 also maximizes psi."""
    best = max(m.sharpe for m in metrics)
    return all(best > -m.sharpe for m in metrics)


def selectable(metrics: List[PolicyMetrics]) -> List[PolicyMetrics]:
    """Policies the solver may return: zero-variance ones only when every policy is riskless."""
    with_variance = [m for m in metrics if not m.zero_variance]
    return with_variance or metrics


def brute_force_optimum(mdp: ValidatedMdp, setting: Setting,
                        big_m: Optional[float] = None) -> OracleResult:
    """Sharpe argmax over all policies; ties keep the lexicographically smallest."""
    metrics = enumerate_metrics(mdp, setting, big_m)
    best = metrics[0]
    for m in metrics[1:]:
        if m.sharpe > best.sharpe:
            best = m
    return OracleResult(policy=best.policy, sharpe_star=best.sharpe, all=metrics,
                        sign_assumption=sign_assumption_holds(metrics))


def risk_free_reward(mdp: ValidatedMdp, setting: Setting, big_m: Optional[float] = None) -> float:
    """Largest mean among zero-variance policies, 0 when there is none."""
    riskless = [m.eta for m in enumerate_metrics(mdp, setting, big_m) if m.zero_variance]
    return max(riskless) if riskless else 0.0


def frontier(mdp: ValidatedMdp, setting: Setting, big_m: Optional[float] = None,
             metrics: Optional[List[PolicyMetrics]] = None) -> List[FrontierPoint]:
    """
    Convex efficient frontier in the (zeta, E{Q^2}) plane, top point first.

    Walks the upper-left hull from the origin: each step takes the point of
    steepest slope among those with both larger zeta and larger E{Q^2}
    (ties: farther point, then smaller policy) until no point has a larger
    second moment. When no point has a positive second moment the frontier is
    the single Pareto-top point.
    """
    if metrics is None:
        metrics = enumerate_metrics(mdp, setting, big_m)
    points = [FrontierPoint.from_metrics(m) for m in metrics]

    hull = []
    zeta0, second0 = 0.0, 0.0
    while True:
        best = None
        best_slope = None
        for p in points:
            if p.zeta <= zeta0 or p.second_moment <= second0:
                continue
            slope = (p.second_moment - second0) / (p.zeta - zeta0)
            if best is None or slope > best_slope + SLOPE_TIE_TOL * max(1.0, abs(best_slope)):
                best, best_slope = p, slope
            elif abs(slope - best_slope) <= SLOPE_TIE_TOL * max(1.0, abs(best_slope)):
                if p.zeta > best.zeta or (p.zeta == best.zeta and p.policy < best.policy):
                    best, best_slope = p, slope
        if best is None:
            break
        hull.append(best)
        zeta0, second0 = best.zeta, best.second_moment

    if not hull and points:
        # every E{Q^2} is 0: keep the Pareto-top point
        hull.append(min(points, key=lambda p: (-p.second_moment, p.zeta, p.policy.choice)))
    hull.reverse()
    return hull


def kappa_interval(points: List[FrontierPoint]) -> Tuple[float, float]:
    """
    (kappa_low, kappa_star) where every kappa in (kappa_low, kappa_star] keeps
    the Sharpe-optimal point (the one nearest the origin) optimal for M(kappa).
    """
    if not points:
        raise NumericalError("empty frontier has no kappa interval")
    optimal = points[-1]
    kappa_star = optimal.second_moment / optimal.zeta
    if len(points) == 1:
        return 0.0, kappa_star
    neighbor = points[-2]
    dz = neighbor.zeta - optimal.zeta
    if dz == 0.0:
        raise NumericalError("collinear frontier points with equal variance")
    return (neighbor.second_moment - optimal.second_moment) / dz, kappa_star


def verify_domination(mdp: ValidatedMdp, setting: Setting, kappa: float, aux: AuxSolution,
                      big_m: Optional[float] = None,
                      metrics: Optional[List[PolicyMetrics]] = None) -> bool:
    """Every selectable policy with eta inside ``aux.dominated`` has m2v no larger than ``aux.m2v``."""
    if metrics is None:
        metrics = enumerate_metrics(mdp, setting, big_m)
    for m in selectable(metrics):
        if aux.dominated.contains(m.eta) and not _within(m2v_value(m, kappa), aux.m2v):
            logger.debug(f"Policy {m.policy.choice} escapes the domination interval of y={aux.y}")
            return False
    return True


def verify_extra_domination(mdp: ValidatedMdp, setting: Setting, kappa: float, aux: AuxSolution,
                            big_m: Optional[float] = None,
                            metrics: Optional[List[PolicyMetrics]] = None) -> bool:
    extra = extra_domination_interval(aux.m2v, kappa)
    if extra is None:
        return True
    if metrics is None:
        metrics = enumerate_metrics(mdp, setting, big_m)
    return all(_within(m2v_value(m, kappa), aux.m2v) for m in selectable(metrics) if extra.contains(m.eta))
