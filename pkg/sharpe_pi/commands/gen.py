import click

from sharpe_pi.commands.common import handle_errors, write_or_echo
from sharpe_pi.services.generator import gen_random_mdp
from sharpe_pi.services.mdp_core import serialize_mdp


@click.command("gen")
@click.option("--states", type=click.IntRange(min=1), required=True)
@click.option("--actions", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="Instance JSON output (default stdout)")
@handle_errors
def gen_command(states, actions, seed, out):
    """Write a seeded random instance."""
    write_or_echo(serialize_mdp(gen_random_mdp(states, actions, seed)) + "\n", out)
