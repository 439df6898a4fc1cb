import asyncio
import logging
import math
from typing import List, Optional

import numpy as np

from sharpe_pi.core.config import settings
from sharpe_pi.core.exceptions import SharpePIError
from sharpe_pi.core.rng import derive_seed
from sharpe_pi.schemas.bench import BenchReport, BenchRow, BenchTrial
from sharpe_pi.schemas.solver import Algorithm, SolverConfig
from sharpe_pi.services.generator import gen_random_mdp
from sharpe_pi.services.mdp_core import validate
from sharpe_pi.services.srpi import solve

logger = logging.getLogger(__name__)


def theoretical_bound(size: int) -> Optional[float]:
    """(|D| + 1)(2|D| + 1) standard-MDP solves for |S| = |A| = size."""
    policies = size ** size
    bound = (policies + 1) * (2 * policies + 1)
    try:
        return float(bound)
    except OverflowError:
        return None


def run_trial(size: int, trial: int, seed: int) -> BenchTrial:
    trial_seed = derive_seed(seed, size, trial)
    record = BenchTrial(size=size, trial=trial, seed=trial_seed)
    try:
        mdp = validate(gen_random_mdp(size, size, trial_seed))
        plain = solve(mdp, SolverConfig(algorithm=Algorithm.srpi))
        plus = solve(mdp, SolverConfig(algorithm=Algorithm.srpi_plus))
    except SharpePIError as e:
        logger.warning(f"Bench trial size={size} #{trial} failed: {e.detail}")
        return record.model_copy(update={"error": e.detail})

    return record.model_copy(update={
        "srpi_solves": plain.mdps_solved,
        "srpi_plus_solves": plus.mdps_solved,
        "srpi_sweeps": plain.pi_sweeps,
        "srpi_plus_sweeps": plus.pi_sweeps,
    })


def summarize(size: int, trials: List[BenchTrial]) -> BenchRow:
    done = [t for t in trials if t.ok]
    row = BenchRow(size=size, trials=len(trials), completed=len(done),
                   theoretical_bound=theoretical_bound(size))
    if not done:
        return row

    plain = np.array([t.srpi_solves for t in done], dtype=float)
    plus = np.array([t.srpi_plus_solves for t in done], dtype=float)
    return row.model_copy(update={
        "srpi_mean": float(plain.mean()),
        "srpi_sd": float(plain.std()),
        "srpi_plus_mean": float(plus.mean()),
        "srpi_plus_sd": float(plus.std()),
        "plus_not_worse": float(np.mean(plus <= plain)),
    })


async def run_bench_async(sizes: List[int], trials: int, seed: int,
                          workers: Optional[int] = None) -> BenchReport:
    """Trials run concurrently in worker threads; each has its own seed stream."""
    if trials < 1:
        raise ValueError("trials must be positive")
    semaphore = asyncio.Semaphore(workers or settings.BENCH_WORKERS)

    async def bounded(size: int, trial: int) -> BenchTrial:
        async with semaphore:
            return await asyncio.to_thread(run_trial, size, trial, seed)

    results = await asyncio.gather(*(bounded(size, t) for size in sizes for t in range(trials)))

    rows = []
    for size in sizes:
        rows.append(summarize(size, [r for r in results if r.size == size]))
        logger.info(f"Bench size={size}: {rows[-1].completed}/{trials} trials completed")
    return BenchReport(seed=seed, rows=rows, trials=list(results))


def run_bench(sizes: List[int], trials: int, seed: int, workers: Optional[int] = None) -> BenchReport:
    return asyncio.run(run_bench_async(sizes, trials, seed, workers))


def orders_below_bound(row: BenchRow) -> Optional[float]:
    """log10 of bound / mean SRPI solves, the gap to the worst-case count."""
    if row.theoretical_bound is None or not row.srpi_mean:
        return None
    return math.log10(row.theoretical_bound / row.srpi_mean)
