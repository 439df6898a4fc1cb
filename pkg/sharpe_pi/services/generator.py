import math

from sharpe_pi.core.rng import SplitMix64
from sharpe_pi.schemas.mdp import MdpSpec

REWARD_SCALE = 10.0


def gen_random_mdp(n_states: int, n_actions: int, seed: int) -> MdpSpec:
    """
    Random instance fully determined by ``seed``.

    For every state s1..sN and action a1..aK, in that order, N exponential
    variates are drawn and normalized into the transition row (a uniform
    point of the simplex), then one uniform variate u gives the reward 10 u.
    """
    if n_states < 1 or n_actions < 1:
        raise ValueError("n_states and n_actions must be at least 1")

    rng = SplitMix64(seed)
    states = [f"s{i + 1}" for i in range(n_states)]
    actions = [f"a{k + 1}" for k in range(n_actions)]
    transition = {}
    reward = {}
    for s in states:
        transition[s] = {}
        reward[s] = {}
        for a in actions:
            draws = [rng.exponential() for _ in states]
            total = math.fsum(draws)
            transition[s][a] = {dest: x / total for dest, x in zip(states, draws)}
            reward[s][a] = REWARD_SCALE * rng.uniform()

    return MdpSpec(
        states=states,
        actions={s: list(actions) for s in states},
        transition=transition,
        reward=reward,
    )
