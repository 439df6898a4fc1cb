"""
CSV and text renderings of solver results.

CSV floats carry 17 significant digits so they read back to the same double;
human-readable tables use 4 decimals.
"""
import csv
import io
from typing import Iterable, List, Optional

from sharpe_pi.schemas.bench import BenchReport
from sharpe_pi.schemas.mdp import Policy, ValidatedMdp
from sharpe_pi.schemas.metrics import PolicyMetrics
from sharpe_pi.schemas.oracle import FrontierPoint
from sharpe_pi.schemas.solver import SolveReport
from sharpe_pi.services.mdp_core import format_policy


def _num(x: Optional[float]) -> str:
    return "" if x is None else format(x, ".17g")


def _csv(header: List[str], rows: Iterable[List[str]], summary: Optional[str] = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if summary is not None:
        buffer.write(f"# {summary}\n")
    return buffer.getvalue()


def _sequence(mdp: ValidatedMdp, trace: List[Policy]) -> str:
    return " ".join(format_policy(mdp, d) for d in trace)


def emit_trace_csv(mdp: ValidatedMdp, report: SolveReport) -> str:
    """One row per M(kappa, y) solve, grouped by outer kappa, plus a summary line."""
    rows = []
    for outer in report.outer_rows:
        for aux in outer.solution.candidates:
            rows.append([
                _num(outer.kappa),
                _num(aux.y),
                _sequence(mdp, aux.inner_trace),
                _num(aux.m2v),
                _num(aux.metrics.kappa),
            ])
    summary = (f"optimal_policy={format_policy(mdp, report.optimal_policy)} "
               f"kappa_star={_num(report.kappa_star)} sharpe_star={_num(report.sharpe_star)}")
    return _csv(["kappa", "y", "policy_sequence", "m2v", "kappa_prime"], rows, summary)


def emit_convergence_csv(report: SolveReport) -> str:
    """Best ratio found so far after each M(kappa, y) solve."""
    rows = [[str(i + 1), _num(k)] for i, k in enumerate(report.best_so_far)]
    return _csv(["solve", "best_kappa_prime"], rows)


def emit_frontier_csv(mdp: ValidatedMdp, points: List[FrontierPoint], metrics: List[PolicyMetrics]) -> str:
    on_frontier = {p.policy for p in points}
    rows = [[
        format_policy(mdp, m.policy),
        _num(m.zeta),
        _num(m.second_moment),
        _num(m.eta),
        _num(m.sharpe),
        "true" if m.policy in on_frontier else "false",
    ] for m in metrics]
    return _csv(["policy", "zeta", "second_moment", "eta", "sharpe", "on_frontier"], rows)


def emit_bench_csv(report: BenchReport) -> str:
    rows = [[
        str(row.size),
        str(row.trials),
        str(row.completed),
        _num(row.srpi_mean),
        _num(row.srpi_sd),
        _num(row.srpi_plus_mean),
        _num(row.srpi_plus_sd),
        _num(row.plus_not_worse),
        _num(row.theoretical_bound),
    ] for row in report.rows]
    header = ["size", "trials", "completed", "srpi_mean", "srpi_sd", "srpi_plus_mean",
              "srpi_plus_sd", "plus_not_worse", "theoretical_bound"]
    return _csv(header, rows, summary=f"seed={report.seed}")


def format_trace_table(mdp: ValidatedMdp, report: SolveReport) -> str:
    lines = [f"{'kappa':>10} {'y':>8} {'m2v':>12} {'kappa_prime':>12}  policies"]
    for outer in report.outer_rows:
        for aux in outer.solution.candidates:
            lines.append(f"{outer.kappa:>10.4f} {aux.y:>8.4f} {aux.m2v:>12.4f} "
                         f"{aux.metrics.kappa:>12.4f}  {_sequence(mdp, aux.inner_trace)}")
    lines.append(
        f"optimal {format_policy(mdp, report.optimal_policy)}  kappa*={report.kappa_star:.4f}  "
        f"sharpe*={report.sharpe_star:.4f}  M(kappa, y) solves={report.mdps_solved}  "
        f"PI sweeps={report.pi_sweeps}")
    return "\n".join(lines)


def format_metrics(mdp: ValidatedMdp, m: PolicyMetrics) -> str:
    cv = "undefined" if m.cv is None else f"{m.cv:.4f}"
    lines = [
        f"policy         {format_policy(mdp, m.policy)}",
        f"eta            {m.eta:.4f}",
        f"zeta           {m.zeta:.4f}" + ("  (zero variance, big-M)" if m.zero_variance else ""),
        f"second_moment  {m.second_moment:.4f}",
        f"sharpe         {m.sharpe:.4f}",
        f"cv             {cv}",
    ]
    return "\n".join(lines)
