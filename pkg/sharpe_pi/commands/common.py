import functools
import logging
import sys
from typing import Optional

import click
from pydantic import ValidationError

from sharpe_pi.core.exceptions import EXIT_VALIDATION, InstanceValidationError, SharpePIError
from sharpe_pi.schemas.setting import Setting

logger = logging.getLogger(__name__)


def handle_errors(command):
    """Report solver errors on stderr and exit with the code the error carries."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SharpePIError as e:
            click.echo(f"error: {e.detail}", err=True)
            sys.exit(e.exit_code)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first["loc"]) or "value"
            click.echo(f"error: invalid {field}: {first['msg']}", err=True)
            sys.exit(EXIT_VALIDATION)

    return wrapper


def parse_floats(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise InstanceValidationError(f"expected comma-separated numbers, got '{text}'")


def build_setting(kind: str, alpha: Optional[float], mu: Optional[str]) -> Setting:
    if kind == "avg":
        return Setting.average()
    if alpha is None:
        raise InstanceValidationError("the discounted setting requires --alpha")
    return Setting.discounted(alpha, parse_floats(mu) if mu else None)


def setting_options(command):
    command = click.option("--mu", default=None, help="Initial distribution, comma-separated (default uniform)")(command)
    command = click.option("--alpha", type=float, default=None, help="Discount factor in (0, 1)")(command)
    command = click.option("--setting", "setting_kind", type=click.Choice(["avg", "disc"]), default="avg",
                           show_default=True)(command)
    return command


def write_or_echo(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Wrote {out}")
