import pytest

from conftest import chain_spec, random_mdp
from sharpe_pi.core.exceptions import BudgetExceededError, EmptyIntervalSetError
from sharpe_pi.schemas.mdp import Policy
from sharpe_pi.schemas.setting import Setting
from sharpe_pi.schemas.solver import Interval, IntervalSet, M2VOptions
from sharpe_pi.services.evaluation import evaluate_average, m2v_value
from sharpe_pi.services.intervals import extra_domination_interval, next_probe, subtract
from sharpe_pi.services.m2v import solve_m2v
from sharpe_pi.services.mdp_core import enumerate_policies, validate

AVERAGE = Setting.average()
FULL_PSEUDO_MEANS_AT_99 = [4.5, 6.8333, 8.6556, 5.0110, 2.1667, 3.6208, 0.7125]


def bounds(interval_set):
    return [(part.lo, part.hi) for part in interval_set.parts]


def test_subtract_splits_interval():
    result = subtract(IntervalSet.full(0.0, 9.0), Interval(lo=3.0, hi=6.0))
    assert bounds(result) == [(6.0, 9.0), (0.0, 3.0)]


def test_subtract_first_table_cut():
    result = subtract(IntervalSet.full(0.0, 9.0), Interval(lo=2.8348, hi=6.1652))
    assert bounds(result) == [(6.1652, 9.0), (0.0, 2.8348)]
    assert next_probe(result) == pytest.approx(7.5826)


def test_subtract_full_cover():
    assert subtract(IntervalSet.full(0.0, 3.0), Interval(lo=-1.0, hi=5.0)).is_empty()


def test_subtract_drops_slivers():
    result = subtract(IntervalSet.full(0.0, 1.0), Interval(lo=5e-8, hi=1.0), epsilon_y=1e-7)
    assert result.is_empty()


def test_subtract_keeps_descending_order():
    result = subtract(IntervalSet.full(0.0, 10.0), Interval(lo=2.0, hi=3.0))
    result = subtract(result, Interval(lo=6.0, hi=7.0))
    assert bounds(result) == [(7.0, 10.0), (3.0, 6.0), (0.0, 2.0)]
    assert result.measure == pytest.approx(8.0)


def test_next_pseudo_mean():
    assert next_probe(IntervalSet.full(0.0, 9.0)) == 4.5
    parts = (Interval(lo=4.6667, hi=5.3555), Interval(lo=0.0, hi=4.3333))
    assert next_probe(IntervalSet(parts=parts)) == pytest.approx(5.0111, abs=1e-3)
    with pytest.raises(EmptyIntervalSetError):
        next_probe(IntervalSet())


def test_interval_rejects_reversed_ends():
    with pytest.raises(ValueError):
        Interval(lo=2.0, hi=1.0)


def test_extra_domination_interval():
    extra = extra_domination_interval(20.0242, 8.8910)
    assert extra.hi == pytest.approx(1.5007, abs=1e-3)
    assert extra.lo == -extra.hi
    assert extra_domination_interval(20.0, 0.0) is None
    assert extra_domination_interval(-5.0, 2.0) is None


def test_full_coverage_at_zero(three_state_mdp, policy):
    solution = solve_m2v(three_state_mdp, 0.0, setting=AVERAGE, warm=policy("(a1,a1,a1)"))
    assert [c.y for c in solution.candidates] == pytest.approx([4.5, 7.5826, 1.4174], abs=1e-3)
    assert solution.best == policy("(a2,a1,a2)")
    assert solution.kappa_prime == pytest.approx(8.8910, abs=1e-3)
    assert not solution.aborted_early
    assert solution.aux_solve_count == 3


def test_early_exit_at_zero(three_state_mdp, policy):
    solution = solve_m2v(three_state_mdp, 0.0, setting=AVERAGE, warm=policy("(a1,a1,a1)"),
                         options=M2VOptions(early_exit=True, extra_domination=True))
    assert solution.aux_solve_count == 1
    assert solution.candidates[0].y == 4.5
    assert solution.aborted_early
    assert solution.kappa_prime == pytest.approx(8.8910, abs=1e-3)


@pytest.mark.parametrize("options", [M2VOptions(), M2VOptions(early_exit=True, extra_domination=True)])
def test_full_coverage_at_optimal_ratio(three_state_mdp, policy, options):
    solution = solve_m2v(three_state_mdp, 99.0, setting=AVERAGE, warm=policy("(a1,a1,a1)"), options=options)
    assert [c.y for c in solution.candidates] == pytest.approx(FULL_PSEUDO_MEANS_AT_99, abs=1e-3)
    assert solution.best == policy("(a1,a1,a2)")
    assert solution.best_m2v == pytest.approx(0.0, abs=1e-6)
    assert not solution.aborted_early


def test_best_is_argmax_of_candidates(three_state_mdp, policy):
    solution = solve_m2v(three_state_mdp, 8.8910, setting=AVERAGE, warm=policy("(a1,a1,a1)"))
    assert solution.best_m2v == max(c.m2v for c in solution.candidates)
    assert solution.kappa_prime == pytest.approx(
        solution.best_metrics.second_moment / solution.best_metrics.zeta, abs=1e-9)
    assert solution.kappa_prime_max_so_far == sorted(solution.kappa_prime_max_so_far)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("kappa", [0.0, 1.5, 7.0, 40.0])
def test_full_coverage_is_globally_optimal(seed, kappa):
    mdp = random_mdp(3, seed)
    solution = solve_m2v(mdp, kappa, setting=AVERAGE, warm=Policy.of(0, 0, 0))
    for d in enumerate_policies(mdp):
        assert solution.best_m2v >= m2v_value(evaluate_average(mdp, d), kappa) - 1e-8 * max(1.0, kappa)


def test_solve_budget(three_state_mdp, policy):
    with pytest.raises(BudgetExceededError):
        solve_m2v(three_state_mdp, 0.0, setting=AVERAGE, warm=policy("(a1,a1,a1)"), probe_budget=2)


def test_degenerate_reward_range(single_policy_mdp):
    solution = solve_m2v(single_policy_mdp, 0.0, setting=AVERAGE, warm=Policy.of(0))
    assert solution.aux_solve_count == 1
    assert solution.best == Policy.of(0)


def test_zero_variance_winners_do_not_cut():
    # (a1, a1) maximizes E{Q^2} for every y at kappa = 0 but has no variance
    mdp = validate(chain_spec([[10.0, 1.0], [10.0, 0.0]]))
    solution = solve_m2v(mdp, 0.0, setting=AVERAGE, warm=Policy.of(0, 0))
    assert [c.y for c in solution.candidates] == pytest.approx([5.0, 7.75, 2.25])
    assert all(c.policy == Policy.of(1, 0) for c in solution.candidates)
    assert solution.best == Policy.of(1, 0)
    assert solution.kappa_prime == pytest.approx(50.5 / 20.25)


def test_riskless_only_instance_keeps_its_policy():
    mdp = validate(chain_spec([[2.0, 3.0]]))
    solution = solve_m2v(mdp, 0.0, setting=AVERAGE, warm=Policy.of(0))
    assert solution.best == Policy.of(1)
    assert solution.best_metrics.zero_variance
