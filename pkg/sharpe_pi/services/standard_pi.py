import logging
from collections import deque
from typing import Iterator, Optional, Tuple

import numpy as np

from sharpe_pi.core.config import settings
from sharpe_pi.core.exceptions import BudgetExceededError, NumericalError
from sharpe_pi.core.linalg import DenseSystem
from sharpe_pi.schemas.mdp import Policy, ValidatedMdp
from sharpe_pi.schemas.setting import Setting
from sharpe_pi.schemas.solver import AuxSolution, Interval, PolicyIterationResult, ReshapedMdp
from sharpe_pi.services.evaluation import evaluate, gain_bias, m2v_value, warn_if_reducible
from sharpe_pi.services.mdp_core import check_policy, format_policy

logger = logging.getLogger(__name__)


def reshape(mdp: ValidatedMdp, kappa: float, y: float,
            allowed: Optional[np.ndarray] = None) -> ReshapedMdp:
    """
    Reward table r'(s, a) = r(s, a)^2 - kappa (r(s, a) - y)^2; padded slots stay 0.
    ``allowed`` narrows the action mask for restricted solves.
    """
    allowed = mdp.action_mask if allowed is None else allowed & mdp.action_mask
    r = mdp.reward
    reward = np.where(allowed, r ** 2 - kappa * (r - y) ** 2, 0.0)
    reward.setflags(write=False)
    allowed.setflags(write=False)
    return ReshapedMdp(base=mdp, kappa=kappa, y=y, reward=reward, allowed=allowed)


def improve(q: np.ndarray, mask: np.ndarray, d: Policy, tol: float) -> Policy:
    """
    Greedy policy for the lookahead table ``q``. The incumbent action is kept
    when it is within ``tol`` of the maximum, otherwise the lowest such index wins.
    """
    q = np.where(mask, q, -np.inf)
    best = q.max(axis=1)
    rows = np.arange(q.shape[0])
    incumbent = np.asarray(d.choice)
    keep = q[rows, incumbent] >= best - tol
    lowest = np.argmax(q >= (best - tol)[:, None], axis=1)
    return Policy(choice=tuple(int(k) for k in np.where(keep, incumbent, lowest)))


def _iteration_cap(mdp: ValidatedMdp) -> int:
    return settings.PI_CAP_FACTOR * mdp.n_states * mdp.max_actions


def _check_monotone(previous: float, current: float, rmdp: ReshapedMdp) -> None:
    if current < previous - settings.IMPROVEMENT_TOL * max(1.0, abs(previous)):
        raise NumericalError(
            f"policy iteration value decreased from {previous!r} to {current!r} "
            f"at kappa={rmdp.kappa}, y={rmdp.y}")


def policy_iteration_average(rmdp: ReshapedMdp, d0: Policy) -> PolicyIterationResult:
    """Unichain average-reward policy iteration on the reshaped reward, from ``d0``."""
    mdp = rmdp.base
    check_policy(mdp, d0)
    rows = np.arange(mdp.n_states)
    cap = _iteration_cap(mdp)

    d = d0
    trace = [d0]
    previous = -np.inf
    while True:
        choice = np.asarray(d.choice)
        P = mdp.transition[rows, choice]
        warn_if_reducible(mdp, d, P)
        gain, bias = gain_bias(P, rmdp.reward[rows, choice])
        _check_monotone(previous, gain, rmdp)
        previous = gain

        q = rmdp.reward + mdp.transition @ bias
        d_next = improve(q, rmdp.allowed, d, settings.IMPROVEMENT_TOL)
        trace.append(d_next)
        if d_next == d:
            return PolicyIterationResult(policy=d, value=gain, values=bias, trace=trace)
        if len(trace) - 1 >= cap:
            raise BudgetExceededError(
                f"policy iteration exceeded {cap} sweeps at kappa={rmdp.kappa}, y={rmdp.y}")
        d = d_next


def policy_iteration_discounted(rmdp: ReshapedMdp, d0: Policy, setting: Setting) -> PolicyIterationResult:
    """Discounted policy iteration on v' = (1 - alpha)(I - alpha P)^-1 r'; value is mu.v'."""
    mdp = rmdp.base
    check_policy(mdp, d0)
    rows = np.arange(mdp.n_states)
    alpha = setting.alpha
    mu = setting.initial_distribution(mdp.n_states)
    cap = _iteration_cap(mdp)

    d = d0
    trace = [d0]
    previous = -np.inf
    while True:
        choice = np.asarray(d.choice)
        P = mdp.transition[rows, choice]
        system = DenseSystem(np.eye(mdp.n_states) - alpha * P, "discounted policy evaluation")
        v = (1.0 - alpha) * system.solve(rmdp.reward[rows, choice])
        value = float(mu @ v)
        _check_monotone(previous, value, rmdp)
        previous = value

        q = (1.0 - alpha) * rmdp.reward + alpha * (mdp.transition @ v)
        d_next = improve(q, rmdp.allowed, d, settings.IMPROVEMENT_TOL)
        trace.append(d_next)
        if d_next == d:
            return PolicyIterationResult(policy=d, value=value, values=v, trace=trace)
        if len(trace) - 1 >= cap:
            raise BudgetExceededError(
                f"policy iteration exceeded {cap} sweeps at kappa={rmdp.kappa}, y={rmdp.y}")
        d = d_next


def solve_aux(mdp: ValidatedMdp, kappa: float, y: float, setting: Setting, warm: Policy,
              big_m: Optional[float] = None, allowed: Optional[np.ndarray] = None) -> AuxSolution:
    """
    Solve M(kappa, y) from ``warm`` and evaluate the result under the original reward.

    The returned interval [y - |y - eta|, y + |y - eta|] holds the means of
    policies the solution dominates in m2v value.
    """
    rmdp = reshape(mdp, kappa, y, allowed)
    if setting.is_discounted:
        result = policy_iteration_discounted(rmdp, warm, setting)
    else:
        result = policy_iteration_average(rmdp, warm)

    metrics = evaluate(mdp, result.policy, setting, big_m)
    m2v = m2v_value(metrics, kappa)
    logger.debug(
        f"M(kappa={kappa:.6g}, y={y:.6g}) -> {format_policy(mdp, result.policy)} "
        f"m2v={m2v:.6g} after {result.sweeps} sweeps")

    return AuxSolution(
        kappa=kappa,
        y=y,
        policy=result.policy,
        metrics=metrics,
        m2v=m2v,
        dominated=Interval.around(y, abs(y - metrics.eta)),
        inner_trace=result.trace,
        pi_sweeps=result.sweeps,
    )


def aux_objective(aux: AuxSolution) -> float:
    """M(kappa, y) value of a solution with positive variance."""
    return aux.m2v - aux.kappa * (aux.metrics.eta - aux.y) ** 2


def _riskless_objective(aux: AuxSolution) -> float:
    return aux.metrics.second_moment - aux.kappa * (aux.metrics.eta - aux.y) ** 2


def _branches(mdp: ValidatedMdp, allowed: np.ndarray, d: Policy) -> Iterator[Tuple[np.ndarray, Policy]]:
    """
    Split the policies allowed by ``allowed``, except ``d``, into disjoint
    restricted masks: branch s keeps d on the states before s and bans d(s).
    """
    for s in range(mdp.n_states):
        if allowed[s].sum() < 2:
            continue
        child = allowed.copy()
        child[:s] = False
        child[np.arange(s), np.asarray(d.choice[:s], dtype=int)] = True
        child[s, d.choice[s]] = False
        warm = d.choice[:s] + (int(np.argmax(child[s])),) + d.choice[s + 1:]
        yield child, Policy(choice=warm)


def solve_aux_with_variance(mdp: ValidatedMdp, kappa: float, y: float, setting: Setting,
                            riskless: AuxSolution, big_m: Optional[float] = None) -> Optional[AuxSolution]:
    """
    Best M(kappa, y) solution among policies with positive variance, given a
    zero-variance winner ``riskless``. None when every policy has zero variance.

    Restricted solves cover every other policy exactly once; a branch whose
    own winner is riskless is split again unless it cannot beat the incumbent.

    Raises:
        BudgetExceededError when more than ENUMERATION_CAP restricted solves are needed
    """
    cap = settings.ENUMERATION_CAP
    pending = deque(_branches(mdp, mdp.action_mask, riskless.policy))
    best = None
    solves = 0
    sweeps = riskless.pi_sweeps
    while pending:
        allowed, warm = pending.popleft()
        solves += 1
        if solves > cap:
            raise BudgetExceededError(
                f"more than {cap} restricted solves at kappa={kappa}, y={y}")
        aux = solve_aux(mdp, kappa, y, setting, warm, big_m, allowed)
        sweeps += aux.pi_sweeps
        if aux.metrics.zero_variance:
            if best is None or _riskless_objective(aux) > aux_objective(best):
                pending.extend(_branches(mdp, allowed, aux.policy))
        elif best is None or aux_objective(aux) > aux_objective(best) + settings.IMPROVEMENT_TOL:
            best = aux

    if best is None:
        return None
    logger.debug(
        f"M(kappa={kappa:.6g}, y={y:.6g}): zero-variance {format_policy(mdp, riskless.policy)} "
        f"replaced by {format_policy(mdp, best.policy)} after {solves} restricted solves")
    return best.model_copy(update={"pi_sweeps": sweeps})
