import logging
import math
import time

from sharpe_pi.core.exceptions import BudgetExceededError, InstanceValidationError, NumericalError
from sharpe_pi.schemas.mdp import ValidatedMdp
from sharpe_pi.schemas.solver import Algorithm, M2VOptions, OuterRow, SolveReport, SolverConfig
from sharpe_pi.services.m2v import solve_m2v
from sharpe_pi.services.mdp_core import check_policy, default_policy, format_policy

logger = logging.getLogger(__name__)


def initial_kappa(cfg: SolverConfig) -> float:
    return cfg.initial_kappa


def _run(mdp: ValidatedMdp, cfg: SolverConfig, options: M2VOptions) -> SolveReport:
    started = time.perf_counter()
    initial = cfg.initial_policy or default_policy(mdp)
    check_policy(mdp, initial)

    kappa = initial_kappa(cfg)
    warm = initial
    rows = []
    best_so_far = []

    for _ in range(cfg.outer_budget):
        solution = solve_m2v(
            mdp, kappa,
            setting=cfg.setting,
            warm=warm,
            options=options,
            big_m=cfg.big_m,
            epsilon_y=cfg.epsilon_y,
            probe_budget=cfg.probe_budget,
            kappa_tol=cfg.kappa_tol,
        )
        rows.append(OuterRow(kappa=kappa, solution=solution))
        for aux in solution.candidates:
            ratio = aux.metrics.kappa
            best_so_far.append(max(ratio, best_so_far[-1]) if best_so_far else ratio)
        if cfg.chain_warm_start:
            warm = solution.candidates[-1].policy

        kappa_prime = solution.kappa_prime
        logger.info(
            f"Outer kappa={kappa:.6g} -> {kappa_prime:.6g} after {solution.aux_solve_count} probes")

        tol = cfg.kappa_tol * max(1.0, abs(kappa))
        if abs(kappa - kappa_prime) <= tol:
            return _report(mdp, cfg, rows, best_so_far, started)
        if len(rows) > 1 and kappa_prime < kappa:
            raise NumericalError(f"outer iterate decreased from {kappa!r} to {kappa_prime!r}")
        kappa = kappa_prime

    raise BudgetExceededError(f"outer loop did not converge within {cfg.outer_budget} iterations")


def _report(mdp, cfg, rows, best_so_far, started) -> SolveReport:
    final = rows[-1].solution
    kappa_star = final.kappa_prime
    if kappa_star < 1.0:
        logger.warning(
            f"kappa*={kappa_star:.6g} is below 1; every visited policy has zero variance")
    report = SolveReport(
        algorithm=cfg.algorithm,
        optimal_policy=final.best,
        optimal_metrics=final.best_metrics,
        kappa_star=kappa_star,
        sharpe_star=math.sqrt(max(kappa_star - 1.0, 0.0)),
        outer_rows=rows,
        mdps_solved=sum(row.solution.aux_solve_count for row in rows),
        pi_sweeps=sum(row.solution.pi_sweeps for row in rows),
        best_so_far=best_so_far,
        wall_time=time.perf_counter() - started,
    )
    logger.info(
        f"{cfg.algorithm.value} converged to {format_policy(mdp, report.optimal_policy)}, "
        f"kappa*={kappa_star:.6g}, {report.mdps_solved} M(kappa, y) solves")
    return report


def srpi(mdp: ValidatedMdp, cfg: SolverConfig) -> SolveReport:
    """Every M(kappa) is solved to full coverage."""
    if cfg.algorithm != Algorithm.srpi:
        raise InstanceValidationError(f"srpi called with algorithm '{cfg.algorithm.value}'")
    return _run(mdp, cfg, M2VOptions(early_exit=False, extra_domination=False))


def srpi_plus(mdp: ValidatedMdp, cfg: SolverConfig) -> SolveReport:
    """
    Early kappa-jump plus extra domination. The accepted final iteration can
    never be an early exit, so it always covers the whole pseudo-mean range.
    """
    if cfg.algorithm != Algorithm.srpi_plus:
        raise InstanceValidationError(f"srpi_plus called with algorithm '{cfg.algorithm.value}'")
    return _run(mdp, cfg, M2VOptions(early_exit=True, extra_domination=True))


def solve(mdp: ValidatedMdp, cfg: SolverConfig) -> SolveReport:
    if cfg.algorithm == Algorithm.srpi_plus:
        return srpi_plus(mdp, cfg)
    return srpi(mdp, cfg)
