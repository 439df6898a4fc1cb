import logging
from pathlib import Path
from typing import Union

from sharpe_pi.core.exceptions import InstanceFormatError
from sharpe_pi.schemas.mdp import MdpSpec, ValidatedMdp
from sharpe_pi.services.mdp_core import parse_mdp, serialize_mdp, validate

logger = logging.getLogger(__name__)


def read_spec(path: Union[str, Path]) -> MdpSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"cannot read instance file {path}: {e.strerror}")
    return parse_mdp(text)


def read_instance(path: Union[str, Path]) -> ValidatedMdp:
    mdp = validate(read_spec(path))
    logger.info(f"Loaded {path}: {mdp.n_states} states, {mdp.policy_count} policies")
    return mdp


def write_instance(path: Union[str, Path], mdp: Union[ValidatedMdp, MdpSpec]) -> None:
    Path(path).write_text(serialize_mdp(mdp) + "\n", encoding="utf-8")
    logger.info(f"Wrote instance to {path}")
