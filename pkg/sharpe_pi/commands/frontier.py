import click

from sharpe_pi.commands.common import build_setting, handle_errors, setting_options, write_or_echo
from sharpe_pi.services.mdp_core import format_policy
from sharpe_pi.services.oracle import enumerate_metrics, frontier, kappa_interval, sign_assumption_holds
from sharpe_pi.storage.instances import read_instance
from sharpe_pi.storage.reports import emit_frontier_csv


@click.command("frontier")
@click.option("--mdp", "mdp_path", required=True, type=click.Path(dir_okay=False), help="Instance JSON file")
@setting_options
@click.option("--big-m", type=float, default=None, help="Variance substitute for zero-variance policies")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="CSV output (default stdout)")
@handle_errors
def frontier_command(mdp_path, setting_kind, alpha, mu, big_m, out):
    """Enumerate all policies and mark the convex efficient frontier."""
    mdp = read_instance(mdp_path)
    setting = build_setting(setting_kind, alpha, mu)
    metrics = enumerate_metrics(mdp, setting, big_m)
    points = frontier(mdp, setting, metrics=metrics)

    write_or_echo(emit_frontier_csv(mdp, points, metrics), out)
    if out is not None:
        kappa_low, kappa_star = kappa_interval(points)
        for p in points:
            click.echo(f"{format_policy(mdp, p.policy)}  zeta={p.zeta:.4f}  E{{Q^2}}={p.second_moment:.4f}")
        click.echo(f"kappa interval ({kappa_low:.4f}, {kappa_star:.4f}]")
        click.echo(f"sign assumption holds: {sign_assumption_holds(metrics)}")
