"""Wire-level description of a visualization tool."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConfigError, ProtocolError
from ..params import ParamSpace

PROTOCOL_VERSION = 1

# wire field names are part of the protocol contract
FIELD_VERSION = "ava_proto"
FIELD_PARAMS = "params"
FIELD_IMAGE = "image"
FIELD_STATS = "stats"


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    param_space: ParamSpace
    protocol_version: int = PROTOCOL_VERSION
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.protocol_version != PROTOCOL_VERSION:
            raise ConfigError(f"unsupported protocol version {self.protocol_version}")
        if len(self.param_space) == 0:
            raise ConfigError("tool must expose a non-empty parameter space")

    def to_dict(self) -> dict:
        return {
            FIELD_VERSION: self.protocol_version,
            "name": self.name,
            "param_space": self.param_space.to_dict(),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, d) -> "ToolDescriptor":
        if FIELD_VERSION not in d:
            raise ProtocolError("bad_descriptor", f"missing {FIELD_VERSION} field")
        return cls(
            name=d.get("name", ""),
            param_space=ParamSpace.from_dict(d["param_space"]),
            protocol_version=int(d[FIELD_VERSION]),
            metadata=dict(d.get("metadata", {})),
        )
