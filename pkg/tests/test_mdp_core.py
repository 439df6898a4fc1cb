import json

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from conftest import THREE_STATE_INSTANCE, chain_spec, random_mdp
from sharpe_pi.core.exceptions import EnumerationCapError, InstanceFormatError, InstanceValidationError
from sharpe_pi.schemas.mdp import Policy
from sharpe_pi.services.mdp_core import (
    enumerate_policies, format_policy, parse_mdp, parse_policy, restrict, serialize_mdp, shift_rewards,
    validate,
)


def single_entry(row=None) -> dict:
    return {
        "states": ["s1", "s2"],
        "actions": {"s1": ["a1"], "s2": ["a1"]},
        "transition": {"s1": {"a1": row or {"s1": 0.5, "s2": 0.5}}, "s2": {"a1": {"s1": 1.0}}},
        "reward": {"s1": {"a1": 1.0}, "s2": {"a1": 2.0}},
    }


def test_parse_three_state_instance():
    spec = parse_mdp(THREE_STATE_INSTANCE.read_text())
    assert spec.states == ["s1", "s2", "s3"]
    assert all(len(spec.actions[s]) == 3 for s in spec.states)


def test_parse_smallest_instance():
    spec = parse_mdp(json.dumps({
        "states": ["s1"],
        "actions": {"s1": ["a1"]},
        "transition": {"s1": {"a1": {"s1": 1.0}}},
        "reward": {"s1": {"a1": 5.0}},
    }))
    assert spec.reward["s1"]["a1"] == 5.0


def test_parse_does_not_check_row_sums():
    spec = parse_mdp(json.dumps(single_entry({"s1": 0.5, "s2": 0.4})))
    assert spec.transition["s1"]["a1"]["s2"] == 0.4
    with pytest.raises(InstanceValidationError, match=r"\(s1, a1\)"):
        validate(spec)


def test_parse_reports_json_paths():
    with pytest.raises(InstanceFormatError) as e:
        parse_mdp("{not json")
    assert e.value.path == "$"

    doc = single_entry()
    del doc["reward"]
    with pytest.raises(InstanceFormatError) as e:
        parse_mdp(json.dumps(doc))
    assert e.value.path == "$.reward"

    doc = single_entry({"s1": "lots", "s2": 0.5})
    with pytest.raises(InstanceFormatError) as e:
        parse_mdp(json.dumps(doc))
    assert e.value.path == "$.transition.s1.a1.s1"


def test_validate_three_state_bounds(three_state_mdp):
    assert three_state_mdp.r_min == 0.0
    assert three_state_mdp.r_max == 9.0
    assert three_state_mdp.n_actions == (3, 3, 3)
    assert three_state_mdp.policy_count == 27


def test_validate_row_sum_tolerance():
    validate(parse_mdp(json.dumps(single_entry({"s1": 0.5, "s2": 0.499999999999}))))
    with pytest.raises(InstanceValidationError, match=r"\(s1, a1\)"):
        validate(parse_mdp(json.dumps(single_entry({"s1": 0.5, "s2": 0.6}))))


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d["transition"]["s1"].update({"a1": {"s1": 1.5, "s2": -0.5}}), "negative probability"),
    (lambda d: d["actions"].update({"s1": []}), "empty"),
    (lambda d: d.update({"states": ["s1", "s2", "s1"]}), "duplicate"),
    (lambda d: d["transition"]["s1"].update({"a1": {"s9": 1.0}}), "unknown state"),
    (lambda d: d["reward"]["s2"].pop("a1"), "missing reward"),
])
def test_validate_rejections(mutate, message):
    doc = single_entry()
    mutate(doc)
    with pytest.raises(InstanceValidationError, match=message):
        validate(parse_mdp(json.dumps(doc)))


def test_validated_arrays_are_read_only(three_state_mdp):
    with pytest.raises(ValueError):
        three_state_mdp.transition[0, 0, 0] = 1.0


def test_restrict_three_state_policies(three_state_mdp, policy):
    mrp = restrict(three_state_mdp, policy("(a1,a1,a1)"))
    assert_allclose(mrp.P, [[0.2, 0.4, 0.4], [0.3, 0.3, 0.4], [0.3, 0.3, 0.4]])
    assert_array_equal(mrp.r, [5.0, 5.0, 2.0])
    assert_array_equal(restrict(three_state_mdp, policy("(a2,a1,a2)")).r, [9.0, 5.0, 4.0])


def test_restrict_single_state(single_policy_mdp):
    mrp = restrict(single_policy_mdp, Policy.of(0))
    assert_array_equal(mrp.P, [[1.0]])
    assert_array_equal(mrp.r, [5.0])


def test_restrict_rejects_out_of_range_policy(three_state_mdp):
    with pytest.raises(InstanceValidationError):
        restrict(three_state_mdp, Policy.of(0, 3, 0))
    with pytest.raises(InstanceValidationError):
        restrict(three_state_mdp, Policy.of(0, 0))


def test_enumerate_three_state_policies(three_state_mdp):
    policies = list(enumerate_policies(three_state_mdp))
    assert len(policies) == 27
    assert len(set(policies)) == 27
    assert policies[0] == Policy.of(0, 0, 0)
    assert policies[-1] == Policy.of(2, 2, 2)
    assert policies == sorted(policies)


def test_enumerate_single_state_four_actions():
    mdp = validate(chain_spec([[1.0, 2.0, 3.0, 4.0]]))
    assert len(list(enumerate_policies(mdp))) == 4


def test_enumeration_cap():
    mdp = random_mdp(10, seed=7)
    with pytest.raises(EnumerationCapError):
        list(enumerate_policies(mdp, cap=10 ** 7))


def test_restricted_rows_are_stochastic():
    mdp = random_mdp(3, seed=11)
    for d in enumerate_policies(mdp):
        assert_allclose(restrict(mdp, d).P.sum(axis=1), 1.0, atol=1e-12)


def test_serialize_round_trip(three_state_mdp):
    again = validate(parse_mdp(serialize_mdp(three_state_mdp)))
    assert again.state_ids == three_state_mdp.state_ids
    assert again.action_ids == three_state_mdp.action_ids
    assert_array_equal(again.transition, three_state_mdp.transition)
    assert_array_equal(again.reward, three_state_mdp.reward)


def test_policy_text_round_trip(three_state_mdp):
    d = parse_policy(three_state_mdp, "(a3, a1, a2)")
    assert d == Policy.of(2, 0, 1)
    assert format_policy(three_state_mdp, d) == "(a3,a1,a2)"
    with pytest.raises(InstanceValidationError, match="unknown action"):
        parse_policy(three_state_mdp, "(a1,a4,a1)")


def test_shift_rewards():
    spec = chain_spec([[1.0, 4.0], [3.0]])
    shifted = validate(shift_rewards(spec, 1.0))
    assert shifted.r_min == 0.0
    assert shifted.r_max == 3.0
    assert np.isclose(shifted.reward[1, 0], 2.0)
