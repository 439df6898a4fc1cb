import click

from sharpe_pi.commands.common import build_setting, handle_errors, setting_options
from sharpe_pi.services.evaluation import evaluate
from sharpe_pi.services.mdp_core import parse_policy
from sharpe_pi.storage.instances import read_instance
from sharpe_pi.storage.reports import format_metrics


@click.command("evaluate")
@click.option("--mdp", "mdp_path", required=True, type=click.Path(dir_okay=False), help="Instance JSON file")
@click.option("--policy", required=True, help="Policy as action ids, e.g. '(a1,a1,a2)'")
@setting_options
@click.option("--big-m", type=float, default=None, help="Variance substitute for zero-variance policies")
@handle_errors
def evaluate_command(mdp_path, policy, setting_kind, alpha, mu, big_m):
    """Print mean, variance, second moment and Sharpe ratio of one policy."""
    mdp = read_instance(mdp_path)
    setting = build_setting(setting_kind, alpha, mu)
    metrics = evaluate(mdp, parse_policy(mdp, policy), setting, big_m)
    click.echo(format_metrics(mdp, metrics))
