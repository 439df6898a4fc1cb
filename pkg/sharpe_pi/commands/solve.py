import logging

import click

from sharpe_pi.commands.common import build_setting, handle_errors, setting_options, write_or_echo
from sharpe_pi.core.exceptions import InstanceValidationError
from sharpe_pi.schemas.solver import Algorithm, SolverConfig
from sharpe_pi.services.mdp_core import parse_policy, shift_rewards, validate
from sharpe_pi.services.oracle import risk_free_reward
from sharpe_pi.services.srpi import solve
from sharpe_pi.storage.instances import read_spec
from sharpe_pi.storage.reports import emit_convergence_csv, emit_trace_csv, format_trace_table

logger = logging.getLogger(__name__)


def _risk_free(value: str, mdp, setting, big_m) -> float:
    if value == "auto":
        return risk_free_reward(mdp, setting, big_m)
    try:
        return float(value)
    except ValueError:
        raise InstanceValidationError(f"--risk-free expects a number or 'auto', got '{value}'")


@click.command("solve")
@click.option("--mdp", "mdp_path", required=True, type=click.Path(dir_okay=False), help="Instance JSON file")
@click.option("--algorithm", type=click.Choice([a.value for a in Algorithm]), default="srpi", show_default=True)
@setting_options
@click.option("--initial-policy", default=None, help="Warm start, default first action everywhere")
@click.option("--initial-kappa", type=float, default=0.0, show_default=True)
@click.option("--kappa-tol", type=float, default=None, help="Relative outer tolerance")
@click.option("--big-m", type=float, default=None, help="Variance substitute for zero-variance policies")
@click.option("--chain-warm-start", is_flag=True, help="Carry the last inner policy across outer iterations")
@click.option("--risk-free", default=None, help="Subtract a risk-free reward first: a number or 'auto'")
@click.option("--trace", "trace_path", default=None, type=click.Path(dir_okay=False), help="Trace CSV output")
@click.option("--convergence", "convergence_path", default=None, type=click.Path(dir_okay=False),
              help="Best-so-far ratio CSV output")
@handle_errors
def solve_command(mdp_path, algorithm, setting_kind, alpha, mu, initial_policy, initial_kappa, kappa_tol,
                  big_m, chain_warm_start, risk_free, trace_path, convergence_path):
    """Find the Sharpe-optimal deterministic policy with SRPI or SRPI+."""
    spec = read_spec(mdp_path)
    mdp = validate(spec)
    setting = build_setting(setting_kind, alpha, mu)

    if risk_free is not None:
        eta_tilde = _risk_free(risk_free, mdp, setting, big_m)
        mdp = validate(shift_rewards(spec, eta_tilde))

    overrides = {"kappa_tol": kappa_tol, "big_m": big_m}
    cfg = SolverConfig(
        algorithm=Algorithm(algorithm),
        setting=setting,
        initial_policy=parse_policy(mdp, initial_policy) if initial_policy else None,
        initial_kappa=initial_kappa,
        chain_warm_start=chain_warm_start,
        **{key: value for key, value in overrides.items() if value is not None},
    )
    report = solve(mdp, cfg)

    click.echo(format_trace_table(mdp, report))
    if trace_path:
        write_or_echo(emit_trace_csv(mdp, report), trace_path)
    if convergence_path:
        write_or_echo(emit_convergence_csv(report), convergence_path)
