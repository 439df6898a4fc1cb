import itertools
import logging
import math
from typing import Iterator, Optional

import numpy as np
from pydantic import ValidationError

from sharpe_pi.core.config import settings
from sharpe_pi.core.exceptions import EnumerationCapError, InstanceFormatError, InstanceValidationError
from sharpe_pi.schemas.mdp import MarkovRewardProcess, MdpSpec, Policy, ValidatedMdp

logger = logging.getLogger(__name__)


def _json_path(loc) -> str:
    return "$" + "".join(f"[{part}]" if isinstance(part, int) else f".{part}" for part in loc)


def parse_mdp(text: str) -> MdpSpec:
    """
    Decode an instance document. Stochasticity is not checked here.

    Raises:
        InstanceFormatError naming the JSON path of the first problem
    """
    try:
        return MdpSpec.model_validate_json(text)
    except ValidationError as e:
        error = e.errors()[0]
        raise InstanceFormatError(error["msg"], path=_json_path(error["loc"]))


def _check_ids(ids, what: str) -> None:
    if not ids:
        raise InstanceValidationError(f"{what} list is empty")
    seen = set()
    for identifier in ids:
        if identifier in seen:
            raise InstanceValidationError(f"duplicate {what} identifier '{identifier}'")
        seen.add(identifier)


def validate(spec: MdpSpec) -> ValidatedMdp:
    """Check every instance invariant and build the dense, read-only arrays."""
    _check_ids(spec.states, "state")
    index = {s: i for i, s in enumerate(spec.states)}

    unknown = set(spec.actions) - set(index)
    if unknown:
        raise InstanceValidationError(f"actions given for unknown state '{sorted(unknown)[0]}'")

    for s in spec.states:
        if s not in spec.actions:
            raise InstanceValidationError(f"state '{s}' has no action list")
        _check_ids(spec.actions[s], f"action (state '{s}')")

    n = len(spec.states)
    max_actions = max(len(spec.actions[s]) for s in spec.states)
    transition = np.zeros((n, max_actions, n))
    reward = np.zeros((n, max_actions))
    mask = np.zeros((n, max_actions), dtype=bool)

    for i, s in enumerate(spec.states):
        for k, a in enumerate(spec.actions[s]):
            row = spec.transition.get(s, {}).get(a)
            if row is None:
                raise InstanceValidationError(f"missing transition row for ({s}, {a})")
            if a not in spec.reward.get(s, {}):
                raise InstanceValidationError(f"missing reward for ({s}, {a})")

            for dest, p in row.items():
                if dest not in index:
                    raise InstanceValidationError(f"transition ({s}, {a}) targets unknown state '{dest}'")
                if p < 0.0:
                    raise InstanceValidationError(f"negative probability {p} in transition ({s}, {a}) -> {dest}")
                transition[i, k, index[dest]] = p

            total = math.fsum(row.values())
            # a few ulps of slack so a decimal row written at exactly the tolerance is accepted
            if abs(total - 1.0) > settings.ROW_SUM_TOL + 8 * math.ulp(1.0):
                raise InstanceValidationError(
                    f"transition row ({s}, {a}) sums to {total!r}, expected 1")

            r = spec.reward[s][a]
            if not math.isfinite(r):
                raise InstanceValidationError(f"reward ({s}, {a}) is not finite")
            reward[i, k] = r
            mask[i, k] = True

    for array in (transition, reward, mask):
        array.setflags(write=False)

    return ValidatedMdp(
        state_ids=tuple(spec.states),
        action_ids=tuple(tuple(spec.actions[s]) for s in spec.states),
        transition=transition,
        reward=reward,
        action_mask=mask,
        r_min=float(reward[mask].min()),
        r_max=float(reward[mask].max()),
    )


def check_policy(mdp: ValidatedMdp, d: Policy) -> None:
    if len(d) != mdp.n_states:
        raise InstanceValidationError(
            f"policy has {len(d)} entries but the instance has {mdp.n_states} states")
    for s, (k, count) in enumerate(zip(d.choice, mdp.n_actions)):
        if k >= count:
            raise InstanceValidationError(
                f"action index {k} out of range for state '{mdp.state_ids[s]}'")


def restrict(mdp: ValidatedMdp, d: Policy) -> MarkovRewardProcess:
    """Markov reward process induced by ``d``: P(s, s') = p(s'|s, d(s)), r(s) = r(s, d(s))."""
    check_policy(mdp, d)
    rows = np.arange(mdp.n_states)
    choice = np.asarray(d.choice)
    return MarkovRewardProcess(P=mdp.transition[rows, choice], r=mdp.reward[rows, choice])


def enumerate_policies(mdp: ValidatedMdp, cap: Optional[int] = None) -> Iterator[Policy]:
    """Every deterministic policy, in lexicographic order of action indices."""
    cap = settings.ENUMERATION_CAP if cap is None else cap
    if mdp.policy_count > cap:
        raise EnumerationCapError(f"{mdp.policy_count} policies exceed the enumeration cap {cap}")
    for choice in itertools.product(*(range(k) for k in mdp.n_actions)):
        yield Policy(choice=choice)


def default_policy(mdp: ValidatedMdp) -> Policy:
    return Policy(choice=(0,) * mdp.n_states)


def to_spec(mdp: ValidatedMdp) -> MdpSpec:
    """Instance document of a validated MDP; zero-probability destinations are omitted."""
    transition = {}
    reward = {}
    for i, s in enumerate(mdp.state_ids):
        transition[s] = {}
        reward[s] = {}
        for k, a in enumerate(mdp.action_ids[i]):
            transition[s][a] = {
                dest: float(p) for dest, p in zip(mdp.state_ids, mdp.transition[i, k]) if p != 0.0
            }
            reward[s][a] = float(mdp.reward[i, k])
    return MdpSpec(
        states=list(mdp.state_ids),
        actions={s: list(ids) for s, ids in zip(mdp.state_ids, mdp.action_ids)},
        transition=transition,
        reward=reward,
    )


def serialize_mdp(mdp: ValidatedMdp | MdpSpec) -> str:
    spec = to_spec(mdp) if isinstance(mdp, ValidatedMdp) else mdp
    return spec.model_dump_json(indent=2)


def shift_rewards(spec: MdpSpec, eta_tilde: float) -> MdpSpec:
    """Subtract a risk-free reward from every r(s, a), turning rewards into excess rewards."""
    reward = {s: {a: r - eta_tilde for a, r in row.items()} for s, row in spec.reward.items()}
    logger.info(f"Shifted rewards by risk-free reward {eta_tilde}")
    return spec.model_copy(update={"reward": reward})


def parse_policy(mdp: ValidatedMdp, text: str) -> Policy:
    """Read a policy written as action identifiers, e.g. ``(a1,a1,a2)``."""
    names = [name.strip() for name in text.strip().strip("()").split(",") if name.strip()]
    if len(names) != mdp.n_states:
        raise InstanceValidationError(
            f"policy '{text}' names {len(names)} actions but the instance has {mdp.n_states} states")
    choice = []
    for s, name in enumerate(names):
        try:
            choice.append(mdp.action_ids[s].index(name))
        except ValueError:
            raise InstanceValidationError(
                f"unknown action '{name}' for state '{mdp.state_ids[s]}'")
    return Policy(choice=tuple(choice))


def format_policy(mdp: ValidatedMdp, d: Policy) -> str:
    return "(" + ",".join(mdp.action_ids[s][k] for s, k in enumerate(d.choice)) + ")"
