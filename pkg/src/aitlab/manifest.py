"""Run manifests and JSON helpers shared by the CLI and scripts."""

from __future__ import annotations

import datetime as _dt
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import __version__


def rational(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def _default(obj):
    if isinstance(obj, Fraction):
        return rational(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_default)


def timestamp() -> str:
    """UTC timestamp; honours SOURCE_DATE_EPOCH for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
            else _dt.datetime.now(_dt.timezone.utc))
    return when.replace(microsecond=0).isoformat()


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seed: Optional[int] = None
    instruction_set: Optional[str] = None
    tool: str = "aitlab"
    version: str = __version__
    timestamp: str = field(default_factory=timestamp)

    def to_json(self) -> dict:
        out = {"tool": self.tool, "version": self.version, "subcommand": self.subcommand,
               "params": self.params, "timestamp": self.timestamp}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.instruction_set is not None:
            out["instruction_set_version"] = self.instruction_set
        return out
