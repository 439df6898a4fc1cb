import logging

import click

from sharpe_pi.commands.bench import bench_command
from sharpe_pi.commands.evaluate import evaluate_command
from sharpe_pi.commands.frontier import frontier_command
from sharpe_pi.commands.gen import gen_command
from sharpe_pi.commands.solve import solve_command
from sharpe_pi.core.config import settings


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG")
def cli(verbose):
    """Sharpe-ratio policy iteration for finite MDPs."""
    level = {0: settings.LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


cli.add_command(evaluate_command)
cli.add_command(solve_command)
cli.add_command(frontier_command)
cli.add_command(gen_command)
cli.add_command(bench_command)
