import click

from sharpe_pi.commands.common import handle_errors, write_or_echo
from sharpe_pi.core.exceptions import InstanceValidationError
from sharpe_pi.services.bench import run_bench
from sharpe_pi.storage.reports import emit_bench_csv


def _sizes(text: str) -> list:
    try:
        sizes = [int(part) for part in text.split(",")]
    except ValueError:
        raise InstanceValidationError(f"--sizes expects comma-separated integers, got '{text}'")
    if any(size < 1 for size in sizes):
        raise InstanceValidationError("sizes must be positive")
    return sizes


@click.command("bench")
@click.option("--sizes", default="3,10", show_default=True, help="Comma-separated |S| = |A| sizes")
@click.option("--trials", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Concurrent trials")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="CSV output (default stdout)")
@handle_errors
def bench_command(sizes, trials, seed, workers, out):
    """Compare M(kappa, y) solve counts of SRPI and SRPI+ on random instances."""
    report = run_bench(_sizes(sizes), trials, seed, workers)
    write_or_echo(emit_bench_csv(report), out)
