"""
Dinkelbach iteration for max f(x)/g(x), independent of MDPs.

Each step solves the linearized problem max sign(g)(f - kappa g) and moves
kappa to the ratio of the maximizer; kappa is non-decreasing after the first
step and stops at the optimal ratio.
"""
import logging
import math
from typing import Any, Callable, Optional, Sequence

import numpy as np

from sharpe_pi.core.config import settings
from sharpe_pi.core.exceptions import BudgetExceededError, NumericalError
from sharpe_pi.schemas.mdp import Policy, ValidatedMdp
from sharpe_pi.schemas.metrics import PolicyMetrics
from sharpe_pi.schemas.ratio import RateDiagnostics, RatioProblem, RatioResult, RatioTrace
from sharpe_pi.schemas.setting import Setting
from sharpe_pi.schemas.solver import M2VOptions
from sharpe_pi.services.m2v import solve_m2v

logger = logging.getLogger(__name__)


def linearized_argmax(problem: RatioProblem, kappa: float) -> Any:
    """
    Maximizer of sign(g)(f - kappa g). A declared ``denominator_sign`` fixes
    the direction for every candidate (max f - kappa g for +1, min for -1), so
    a returned candidate whose g has the other sign is rejected.
    """
    x = problem.linearized_solver(kappa)
    sign = problem.denominator_sign
    if sign is not None and math.copysign(1.0, problem.g(x)) != sign:
        raise NumericalError(
            f"linearized solver returned a candidate with g of sign {-sign} at kappa={kappa!r}")
    return x


def _signed_gap(problem: RatioProblem, x: Any, kappa: float) -> float:
    g = problem.g(x)
    sign = problem.denominator_sign or math.copysign(1.0, g)
    return sign * (problem.f(x) - kappa * g)


def solve_ratio(problem: RatioProblem, kappa0: float = 0.0, tol: Optional[float] = None,
                budget: Optional[int] = None) -> RatioResult:
    """
    Raises:
        BudgetExceededError after ``budget`` linearized solves
        NumericalError on a zero denominator or a broken monotonicity step
    """
    tol = settings.KAPPA_TOL if tol is None else tol
    budget = settings.RATIO_BUDGET if budget is None else budget

    trace = RatioTrace(kappas=[kappa0])
    kappa = kappa0
    while True:
        if trace.linearized_solves >= budget:
            raise BudgetExceededError(f"ratio iteration did not converge within {budget} solves")

        x = linearized_argmax(problem, kappa)
        g = problem.g(x)
        if g == 0.0:
            raise NumericalError("linearized solver returned a candidate with zero denominator")

        # from the second step on kappa is attained by a candidate, so the gap is >= 0
        if trace.linearized_solves >= 1:
            gap = _signed_gap(problem, x, kappa)
            if gap < -tol * max(1.0, abs(g)):
                raise NumericalError(f"linearized optimum {gap!r} is negative at kappa={kappa!r}")

        kappa_next = problem.f(x) / g
        trace.solutions.append(x)
        trace.kappas.append(kappa_next)

        if trace.linearized_solves >= 2 and kappa_next < kappa - tol * max(1.0, abs(kappa)):
            raise NumericalError(f"ratio iterate decreased from {kappa!r} to {kappa_next!r}")
        if abs(kappa - kappa_next) <= tol * max(1.0, abs(kappa)):
            return RatioResult(candidate=x, kappa_star=kappa_next, trace=trace)
        kappa = kappa_next


def rate_diagnostics(trace: RatioTrace, kappa_star: float) -> RateDiagnostics:
    """
    Successive error ratios |k_{t+1} - k*| / |k_t - k*|. Once an error hits 0
    the ratio is reported as 0 and later 0/0 pairs are dropped.
    """
    if len(trace.kappas) < 3:
        raise ValueError("rate diagnostics need at least three iterates")

    errors = [abs(k - kappa_star) for k in trace.kappas]
    ratios = []
    for before, after in zip(errors, errors[1:]):
        if before == 0.0:
            break
        ratios.append(after / before)

    trace.error_ratios = ratios
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    return RateDiagnostics(error_ratios=ratios, decreasing=decreasing)


def finite_ratio_problem(candidates: Sequence[Any], f: Callable[[Any], float],
                         g: Callable[[Any], float]) -> RatioProblem:
    """
    Ratio problem over an explicit candidate list. The linearized solver
    enumerates sign(g)(f - kappa g), so mixed-sign denominators are allowed;
    ties go to the earliest candidate.
    """
    fs = np.array([f(x) for x in candidates], dtype=float)
    gs = np.array([g(x) for x in candidates], dtype=float)
    if np.any(gs == 0.0):
        raise NumericalError("candidate with zero denominator")
    signs = np.sign(gs)
    sign = None
    if np.all(signs > 0):
        sign = 1
    elif np.all(signs < 0):
        sign = -1
    weights = signs if sign is None else float(sign)

    def solver(kappa: float) -> Any:
        return candidates[int(np.argmax(weights * (fs - kappa * gs)))]

    return RatioProblem(f=f, g=g, linearized_solver=solver, denominator_sign=sign)


def sharpe_ratio_problem(mdp: ValidatedMdp, setting: Setting, warm: Policy,
                         big_m: Optional[float] = None) -> RatioProblem:
    """f = E{Q^2}, g = zeta > 0; each linearized solve is a full-coverage M(kappa) solve."""

    def solver(kappa: float) -> PolicyMetrics:
        return solve_m2v(mdp, kappa, setting=setting, warm=warm,
                         options=M2VOptions(), big_m=big_m).best_metrics

    return RatioProblem(
        f=lambda m: m.second_moment,
        g=lambda m: m.zeta,
        linearized_solver=solver,
        denominator_sign=1,
    )
