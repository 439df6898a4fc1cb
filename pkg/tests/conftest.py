from pathlib import Path

import pytest

from sharpe_pi.schemas.mdp import MdpSpec, Policy, ValidatedMdp
from sharpe_pi.services.generator import gen_random_mdp
from sharpe_pi.services.mdp_core import parse_policy, validate
from sharpe_pi.storage.instances import read_instance

INSTANCES = Path(__file__).resolve().parent.parent / "instances"
THREE_STATE_INSTANCE = INSTANCES / "three_state.json"


def chain_spec(rewards, transition=None) -> MdpSpec:
    """
    Instance whose state i offers one action per entry of ``rewards[i]``.
    Transitions default to the uniform row for every action.
    """
    n = len(rewards)
    states = [f"s{i + 1}" for i in range(n)]
    actions = {s: [f"a{k + 1}" for k in range(len(rewards[i]))] for i, s in enumerate(states)}
    uniform = {dest: 1.0 / n for dest in states}
    return MdpSpec(
        states=states,
        actions=actions,
        transition={
            s: {a: (transition[i][k] if transition else dict(uniform)) for k, a in enumerate(actions[s])}
            for i, s in enumerate(states)
        },
        reward={s: {a: float(rewards[i][k]) for k, a in enumerate(actions[s])} for i, s in enumerate(states)},
    )


def random_mdp(size: int, seed: int) -> ValidatedMdp:
    return validate(gen_random_mdp(size, size, seed))


@pytest.fixture(scope="session")
def three_state_mdp() -> ValidatedMdp:
    return read_instance(THREE_STATE_INSTANCE)


@pytest.fixture(scope="session")
def policy(three_state_mdp):
    def make(text: str) -> Policy:
        return parse_policy(three_state_mdp, text)
    return make


@pytest.fixture
def symmetric_chain() -> ValidatedMdp:
    """Two states, both rows (0.5, 0.5), rewards 1 and 3."""
    return validate(chain_spec([[1.0], [3.0]]))


@pytest.fixture
def single_policy_mdp() -> ValidatedMdp:
    return validate(chain_spec([[5.0]]))
