"""
Exact policy evaluation in the average-reward and discounted settings.

All linear systems are dense and solved by LU with partial pivoting, so
evaluations are deterministic for a given instance and policy.
"""
import logging
import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from sharpe_pi.core.config import settings
from sharpe_pi.core.exceptions import NumericalError
from sharpe_pi.core.linalg import DenseSystem, is_irreducible
from sharpe_pi.schemas.mdp import MarkovRewardProcess, Policy, ValidatedMdp
from sharpe_pi.schemas.metrics import PolicyMetrics, ValueFunctions
from sharpe_pi.schemas.setting import Setting
from sharpe_pi.services.mdp_core import format_policy, restrict

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1024)
def _warn_reducible(state_ids: tuple, action_ids: tuple, choice: Tuple[int, ...], label: str) -> None:
    logger.warning(f"Induced chain of policy {label} is reducible")


def warn_if_reducible(mdp: ValidatedMdp, d: Policy, P: np.ndarray) -> None:
    """Warn once per (instance, policy) whose induced chain is not irreducible."""
    if not is_irreducible(P):
        _warn_reducible(mdp.state_ids, mdp.action_ids, d.choice, format_policy(mdp, d))


def stationary_distribution(mrp: MarkovRewardProcess) -> np.ndarray:
    """
    Solve pi P = pi, sum(pi) = 1 as (P^T - I) pi^T = 0 with the first
    equation replaced by the normalization.

    Raises:
        NumericalError if the system is singular (e.g. several recurrent classes)
        or the residual exceeds the configured tolerance
    """
    P = mrp.P
    n = P.shape[0]
    A = P.T - np.eye(n)
    A[0, :] = 1.0
    b = np.zeros(n)
    b[0] = 1.0
    pi = DenseSystem(A, "stationary distribution system").solve(b)

    if pi.min() < -settings.STATIONARY_RESIDUAL_TOL:
        raise NumericalError(f"stationary distribution has a negative entry {pi.min():.3e}")
    pi = np.clip(pi, 0.0, None)

    residual = float(np.abs(pi @ P - pi).max())
    if residual > settings.STATIONARY_RESIDUAL_TOL:
        raise NumericalError(f"stationary residual {residual:.3e} exceeds tolerance")
    return pi


def gain_bias(P: np.ndarray, r: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Solve h + g e = r + P h with h(s0) = 0 for the first state.

    With h(s0) fixed the unknown in column 0 is replaced by the gain, so the
    system (I - P) with its first column set to ones yields (g, h1, ..., hn-1).
    """
    n = P.shape[0]
    A = np.eye(n) - P
    A[:, 0] = 1.0
    x = DenseSystem(A, "gain/bias system").solve(r)
    h = x.copy()
    h[0] = 0.0
    return float(x[0]), h


def _metrics(d: Optional[Policy], eta: float, zeta: float, second_moment: float,
             big_m: Optional[float]) -> PolicyMetrics:
    big_m = settings.BIG_M if big_m is None else big_m
    zero_variance = zeta < settings.ZERO_VARIANCE_TOL
    if zero_variance:
        zeta = big_m
    sharpe = eta / math.sqrt(zeta)
    return PolicyMetrics(
        policy=d,
        eta=eta,
        zeta=zeta,
        second_moment=second_moment,
        sharpe=sharpe,
        cv=1.0 / sharpe if abs(sharpe) > 1e-12 else None,
        zero_variance=zero_variance,
    )


def evaluate_average(mdp: ValidatedMdp, d: Policy, big_m: Optional[float] = None) -> PolicyMetrics:
    mrp = restrict(mdp, d)
    warn_if_reducible(mdp, d, mrp.P)
    pi = stationary_distribution(mrp)
    eta = float(pi @ mrp.r)
    zeta = float(pi @ (mrp.r - eta) ** 2)
    second_moment = float(pi @ mrp.r ** 2)
    return _metrics(d, eta, zeta, second_moment, big_m)


def discounted_values(mdp: ValidatedMdp, d: Policy, setting: Setting) -> ValueFunctions:
    """Normalized discounted mean and variance value functions plus the occupation measure."""
    mrp = restrict(mdp, d)
    alpha = setting.alpha
    mu = setting.initial_distribution(mdp.n_states)
    system = DenseSystem(np.eye(mdp.n_states) - alpha * mrp.P, "discounted evaluation system")

    v = (1.0 - alpha) * system.solve(mrp.r)
    eta = float(mu @ v)
    w = (1.0 - alpha) * system.solve((mrp.r - eta) ** 2)
    occupation = (1.0 - alpha) * system.solve_transposed(mu)
    return ValueFunctions(v=v, w=w, occupation=occupation, eta=eta, zeta=float(mu @ w))


def evaluate_discounted(mdp: ValidatedMdp, d: Policy, setting: Setting,
                        big_m: Optional[float] = None) -> PolicyMetrics:
    values = discounted_values(mdp, d, setting)
    r = restrict(mdp, d).r
    second_moment = float(values.occupation @ r ** 2)
    return _metrics(d, values.eta, max(values.zeta, 0.0), second_moment, big_m)


def evaluate(mdp: ValidatedMdp, d: Policy, setting: Setting,
             big_m: Optional[float] = None) -> PolicyMetrics:
    if setting.is_discounted:
        return evaluate_discounted(mdp, d, setting, big_m)
    return evaluate_average(mdp, d, big_m)


def m2v_value(m: PolicyMetrics, kappa: float) -> float:
    return m.second_moment - kappa * m.zeta
