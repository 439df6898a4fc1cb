import logging
from typing import Optional

from sharpe_pi.core.config import settings
from sharpe_pi.core.exceptions import BudgetExceededError, NumericalError
from sharpe_pi.schemas.mdp import Policy, ValidatedMdp
from sharpe_pi.schemas.setting import Setting
from sharpe_pi.schemas.solver import Interval, IntervalSet, M2VOptions, M2VSolution
from sharpe_pi.services.intervals import extra_domination_interval, next_probe, subtract
from sharpe_pi.services.mdp_core import format_policy
from sharpe_pi.services.standard_pi import solve_aux, solve_aux_with_variance

logger = logging.getLogger(__name__)


def _check_shrink(before: IntervalSet, after: IntervalSet, epsilon_y: float, kappa: float) -> None:
    required = min(epsilon_y, before.parts[0].width)
    decrease = before.measure - after.measure
    if len(after) < len(before) or decrease >= required * (1.0 - 1e-6):
        return
    raise NumericalError(
        f"pseudo-mean set failed to shrink at kappa={kappa} (decrease {decrease:.3e})")


def solve_m2v(
        mdp: ValidatedMdp,
        kappa: float,
        *,
        setting: Setting,
        warm: Policy,
        options: Optional[M2VOptions] = None,
        big_m: Optional[float] = None,
        epsilon_y: Optional[float] = None,
        probe_budget: Optional[int] = None,
        kappa_tol: Optional[float] = None) -> M2VSolution:
    """
    Globally solve M(kappa) = max E{Q^2} - kappa zeta by covering [r_min, r_max]
    with domination intervals of M(kappa, y) solutions.

    With ``early_exit`` the loop stops as soon as a candidate's ratio exceeds
    kappa; with ``extra_domination`` the |eta| <= sqrt(m2v / kappa) band is also
    removed after each solve.

    A zero-variance winner is swapped for the best M(kappa, y) policy with
    positive variance, so it neither cuts nor competes unless every policy is
    riskless.

    Raises:
        BudgetExceededError when more than ``probe_budget`` probes are needed
        NumericalError if a cut does not shrink the remaining set
    """
    options = options or M2VOptions()
    epsilon_y = settings.EPSILON_Y if epsilon_y is None else epsilon_y
    probe_budget = settings.PROBE_BUDGET if probe_budget is None else probe_budget
    kappa_tol = settings.KAPPA_TOL if kappa_tol is None else kappa_tol

    remaining = IntervalSet.full(mdp.r_min, mdp.r_max)
    candidates = []
    max_so_far = []
    policy = warm

    while not remaining.is_empty():
        if len(candidates) >= probe_budget:
            raise BudgetExceededError(f"M(kappa={kappa}) needed more than {probe_budget} probes")

        y = next_probe(remaining)
        aux = solve_aux(mdp, kappa, y, setting, policy, big_m)
        if aux.metrics.zero_variance:
            aux = solve_aux_with_variance(mdp, kappa, y, setting, aux, big_m) or aux
        candidates.append(aux)
        policy = aux.policy

        before = remaining
        radius = max(abs(y - aux.metrics.eta), epsilon_y / 2.0)
        remaining = subtract(remaining, Interval.around(y, radius), epsilon_y)
        if options.extra_domination:
            extra = extra_domination_interval(aux.m2v, kappa)
            if extra is not None:
                remaining = subtract(remaining, extra, epsilon_y)
        _check_shrink(before, remaining, epsilon_y, kappa)

        kappa_prime = aux.metrics.kappa
        max_so_far.append(max(kappa_prime, max_so_far[-1]) if max_so_far else kappa_prime)

        if options.early_exit and kappa_prime > kappa + kappa_tol * max(1.0, abs(kappa)):
            logger.info(
                f"Early exit at kappa={kappa:.6g}: {format_policy(mdp, aux.policy)} "
                f"has ratio {kappa_prime:.6g}")
            return M2VSolution(
                kappa=kappa,
                best=aux.policy,
                best_metrics=aux.metrics,
                best_m2v=aux.m2v,
                kappa_prime=kappa_prime,
                candidates=candidates,
                kappa_prime_max_so_far=max_so_far,
                aborted_early=True,
                pi_sweeps=sum(c.pi_sweeps for c in candidates),
            )

    best = candidates[0]
    for aux in candidates[1:]:
        if aux.m2v > best.m2v:
            best = aux

    return M2VSolution(
        kappa=kappa,
        best=best.policy,
        best_metrics=best.metrics,
        best_m2v=best.m2v,
        kappa_prime=best.metrics.kappa,
        candidates=candidates,
        kappa_prime_max_so_far=max_so_far,
        pi_sweeps=sum(c.pi_sweeps for c in candidates),
    )
