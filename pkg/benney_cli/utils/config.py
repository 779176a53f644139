import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from benney_cli.errors import ParameterDomainError

logger = logging.getLogger(__name__)

_LINE = re.compile(r"^\s*([A-Za-z0-9_-]+)\s*[=:]\s*(.*?)\s*$")


def normalize_key(key):
    """`--grid-size`, `grid-size` and `grid_size` all name the same option."""
    return key.strip().lstrip("-").replace("-", "_").lower()


def load_config(path, known_keys=None):
    """Read `key = value` lines into a dict of option defaults.

    Blank lines and `#` comments are skipped. Keys outside `known_keys` are rejected.
    """
    path = Path(path)
    values = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise ParameterDomainError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = normalize_key(match.group(1)), match.group(2)
        if known_keys is not None and key not in known_keys:
            raise ParameterDomainError(f"{path}:{lineno}: unknown option {match.group(1)!r}")
        values[key] = value
    logger.info("loaded %d option(s) from %s", len(values), path)
    return values


def parse_range(text):
    """Parse `a,b,c` or `start:stop:count` into a tuple of floats."""
    if isinstance(text, (int, float)):
        return (float(text),)
    text = str(text).strip()
    if not text:
        raise ParameterDomainError("empty range")
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ParameterDomainError(f"range {text!r} must look like start:stop:count")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ParameterDomainError(f"range {text!r} needs count >= 1")
            return tuple(float(v) for v in np.linspace(start, stop, count))
        return tuple(float(v) for v in text.split(","))
    except ParameterDomainError:
        raise
    except ValueError as e:
        raise ParameterDomainError(f"cannot parse range {text!r}: {e}") from e


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs; scalar fields hold tuples for ranged commands."""

    command: str
    family: Optional[str] = None
    c: object = None
    beta: object = None
    sigma: object = None
    omega: object = 0.0
    kappa: object = None
    grid_size: int = 256
    out: Optional[str] = None
    fmt: str = "json"
    extras: dict = field(default_factory=dict)
