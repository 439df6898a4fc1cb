"""Cross-checks of the solver stack against exhaustive enumeration on generated instances."""
import pytest

from conftest import chain_spec, random_mdp
from sharpe_pi.schemas.mdp import Policy
from sharpe_pi.schemas.setting import Setting
from sharpe_pi.schemas.solver import Algorithm, SolverConfig
from sharpe_pi.services.bench import theoretical_bound
from sharpe_pi.services.evaluation import evaluate
from sharpe_pi.services.mdp_core import enumerate_policies, to_spec, validate
from sharpe_pi.services.oracle import (
    brute_force_optimum, enumerate_metrics, frontier, verify_domination, verify_extra_domination,
)
from sharpe_pi.services.srpi import solve

AVERAGE = Setting.average()
# (a1, a1) earns 10 everywhere: zero variance, yet the largest E{Q^2}
RISKLESS_FIRST = [[10.0, 1.0], [10.0, 0.0]]
SETTINGS = [AVERAGE, Setting.discounted(0.5), Setting.discounted(0.9), Setting.discounted(0.99)]


def scaled(mdp, c):
    spec = to_spec(mdp)
    reward = {s: {a: c * r for a, r in row.items()} for s, row in spec.reward.items()}
    return validate(spec.model_copy(update={"reward": reward}))


def run(mdp, setting=AVERAGE, algorithm=Algorithm.srpi):
    return solve(mdp, SolverConfig(algorithm=algorithm, setting=setting))


def assert_matches_oracle(mdp, setting):
    oracle = brute_force_optimum(mdp, setting)
    assert oracle.sign_assumption
    report = run(mdp, setting)
    assert report.sharpe_star == pytest.approx(oracle.sharpe_star, rel=1e-6, abs=1e-9)
    assert report.optimal_metrics.sharpe == pytest.approx(oracle.sharpe_star, rel=1e-6, abs=1e-9)


def count_verified_aux_solves(mdp, setting, algorithm=Algorithm.srpi):
    metrics = enumerate_metrics(mdp, setting)
    report = run(mdp, setting, algorithm)
    solves = 0
    for row in report.outer_rows:
        for aux in row.solution.candidates:
            assert verify_domination(mdp, setting, row.kappa, aux, metrics=metrics)
            assert verify_extra_domination(mdp, setting, row.kappa, aux, metrics=metrics)
            solves += 1
    return solves


@pytest.mark.parametrize("setting", SETTINGS, ids=["avg", "disc-0.5", "disc-0.9", "disc-0.99"])
@pytest.mark.parametrize("seed", range(4))
def test_moment_identity(seed, setting):
    mdp = random_mdp(3, seed)
    for d in enumerate_policies(mdp):
        m = evaluate(mdp, d, setting)
        assert not m.zero_variance
        assert m.moment_gap() <= 1e-9 * max(1.0, m.second_moment)


@pytest.mark.parametrize("c", [0.5, 3.0])
def test_scale_equivariance(three_state_mdp, c):
    base = run(three_state_mdp)
    report = run(scaled(three_state_mdp, c))
    assert report.optimal_policy == base.optimal_policy
    assert report.kappa_star == pytest.approx(base.kappa_star, rel=1e-9)
    assert report.sharpe_star == pytest.approx(base.sharpe_star, rel=1e-9)
    assert report.optimal_metrics.eta == pytest.approx(c * base.optimal_metrics.eta, rel=1e-9)
    assert report.optimal_metrics.zeta == pytest.approx(c * c * base.optimal_metrics.zeta, rel=1e-9)

    oracle = brute_force_optimum(scaled(three_state_mdp, c), AVERAGE)
    assert oracle.policy == brute_force_optimum(three_state_mdp, AVERAGE).policy
    assert oracle.policy == report.optimal_policy


@pytest.mark.parametrize("size, seed", [(3, s) for s in range(8)] + [(4, s) for s in range(2)])
def test_average_matches_oracle(size, seed):
    assert_matches_oracle(random_mdp(size, seed), AVERAGE)


@pytest.mark.parametrize("alpha", [0.5, 0.9, 0.99])
@pytest.mark.parametrize("seed", range(3))
def test_discounted_matches_oracle(seed, alpha):
    assert_matches_oracle(random_mdp(3, seed), Setting.discounted(alpha))


@pytest.mark.slow
@pytest.mark.parametrize("size, trials", [(3, 200), (4, 50)])
def test_average_matches_oracle_many(size, trials):
    for seed in range(trials):
        assert_matches_oracle(random_mdp(size, 1000 + seed), AVERAGE)


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [0.5, 0.9, 0.99])
def test_discounted_matches_oracle_many(alpha):
    for seed in range(100):
        assert_matches_oracle(random_mdp(3, 2000 + seed), Setting.discounted(alpha))


def test_domination_intervals_hold(three_state_mdp):
    assert count_verified_aux_solves(three_state_mdp, AVERAGE) == 17
    assert count_verified_aux_solves(three_state_mdp, AVERAGE, Algorithm.srpi_plus) == 9
    for seed in range(3):
        count_verified_aux_solves(random_mdp(3, seed), AVERAGE, Algorithm.srpi_plus)
        count_verified_aux_solves(random_mdp(3, seed), Setting.discounted(0.9))


@pytest.mark.slow
def test_domination_intervals_hold_many():
    solves = 0
    seed = 0
    while solves < 500:
        setting = AVERAGE if seed % 2 == 0 else Setting.discounted(0.9)
        solves += count_verified_aux_solves(random_mdp(3, 3000 + seed), setting)
        seed += 1
    assert solves >= 500


@pytest.mark.parametrize("seed", range(5))
def test_outer_bests_lie_on_frontier(seed):
    mdp = random_mdp(3, seed)
    on_frontier = {p.policy for p in frontier(mdp, AVERAGE)}
    report = run(mdp)
    for row in report.outer_rows:
        assert row.solution.best in on_frontier


def test_outer_bests_lie_on_frontier_three_state(three_state_mdp):
    on_frontier = {p.policy for p in frontier(three_state_mdp, AVERAGE)}
    assert all(row.solution.best in on_frontier for row in run(three_state_mdp).outer_rows)


@pytest.mark.parametrize("seed", range(5))
def test_solve_count_below_worst_case(seed):
    report = run(random_mdp(3, seed))
    assert report.mdps_solved <= theoretical_bound(3)


@pytest.mark.parametrize("seed", range(5))
def test_outer_iterates_increase_to_zero_gap(seed):
    report = run(random_mdp(3, seed))
    kappas = report.kappas
    assert all(b > a for a, b in zip(kappas, kappas[1:]))
    final = report.outer_rows[-1].solution
    assert final.kappa_prime == report.kappa_star
    assert abs(final.best_m2v) <= 1e-6 * max(1.0, final.best_metrics.second_moment)


@pytest.mark.parametrize("setting", [AVERAGE, Setting.discounted(0.9)], ids=["avg", "disc"])
@pytest.mark.parametrize("seed", range(5))
def test_srpi_and_srpi_plus_agree(seed, setting):
    mdp = random_mdp(3, seed)
    plain = run(mdp, setting)
    plus = run(mdp, setting, Algorithm.srpi_plus)
    assert plus.kappa_star == pytest.approx(plain.kappa_star, rel=1e-9)
    assert plus.sharpe_star == pytest.approx(plain.sharpe_star, rel=1e-9)
    assert plus.outer_rows[-1].solution.aborted_early is False


@pytest.mark.slow
def test_moment_identity_many():
    checked = 0
    seed = 0
    while checked < 1000:
        mdp = random_mdp(3, 4000 + seed)
        setting = SETTINGS[seed % len(SETTINGS)]
        for d in enumerate_policies(mdp):
            m = evaluate(mdp, d, setting)
            assert m.moment_gap() <= 1e-8 * max(1.0, m.second_moment)
            checked += 1
        seed += 1


@pytest.mark.parametrize("algorithm", list(Algorithm))
@pytest.mark.parametrize("setting", [AVERAGE, Setting.discounted(0.9)], ids=["avg", "disc"])
def test_zero_variance_winner_does_not_hide_optimum(setting, algorithm):
    mdp = validate(chain_spec(RISKLESS_FIRST))
    oracle = brute_force_optimum(mdp, setting)
    assert oracle.sign_assumption
    assert not next(m for m in oracle.all if m.policy == oracle.policy).zero_variance

    report = run(mdp, setting, algorithm)
    assert report.optimal_policy == oracle.policy
    assert report.sharpe_star == pytest.approx(oracle.sharpe_star, rel=1e-6)
    assert report.kappa_star >= 1.0
    assert count_verified_aux_solves(mdp, setting, algorithm) >= 1


def test_zero_variance_winner_average_optimum():
    mdp = validate(chain_spec(RISKLESS_FIRST))
    report = run(mdp)
    assert report.optimal_policy == Policy.of(1, 0)
    assert report.sharpe_star == pytest.approx(1.2222, abs=1e-4)
    assert not any(aux.metrics.zero_variance for row in report.outer_rows for aux in row.solution.candidates)
