"""Named, bounded parameter spaces and the vectors that live in them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Sequence

from .errors import ConfigError

KIND_CONTINUOUS = "continuous"
KIND_INTEGER = "integer"
KIND_CATEGORICAL = "categorical"
_KINDS = (KIND_CONTINUOUS, KIND_INTEGER, KIND_CATEGORICAL)


@dataclass(frozen=True)
class ParamEntry:
    """One adjustable parameter: a numeric range or a categorical choice set."""

    name: str
    kind: str = KIND_CONTINUOUS
    lower: float = 0.0
    upper: float = 1.0
    choices: tuple = ()

    def __post_init__(self):
        if not self.name:
            raise ConfigError("parameter name must be non-empty")
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown parameter kind {self.kind!r}")
        if self.kind == KIND_CATEGORICAL:
            if len(self.choices) < 1:
                raise ConfigError(f"categorical parameter {self.name!r} needs at least one choice")
        else:
            if not (self.lower <= self.upper):
                raise ConfigError(f"parameter {self.name!r}: lower {self.lower} > upper {self.upper}")

    def clamp(self, value) -> Any:
        """Force a raw value into this entry's bounds / choice set."""
        if self.kind == KIND_CATEGORICAL:
            return value if value in self.choices else self.choices[0]
        try:
            v = float(value)
        except (TypeError, ValueError):
            v = self.lower
        if math.isnan(v):
            v = self.lower
        v = min(max(v, self.lower), self.upper)
        if self.kind == KIND_INTEGER:
            v = int(round(v))
            v = min(max(v, int(math.ceil(self.lower))), int(math.floor(self.upper)))
        return v

    def contains(self, value) -> bool:
        if self.kind == KIND_CATEGORICAL:
            return value in self.choices
        if self.kind == KIND_INTEGER:
            return isinstance(value, (int, float)) and float(value).is_integer() and self.lower <= value <= self.upper
        return isinstance(value, (int, float)) and self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind}
        if self.kind == KIND_CATEGORICAL:
            d["choices"] = list(self.choices)
        else:
            d["lower"] = self.lower
            d["upper"] = self.upper
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "ParamEntry":
        return cls(
            name=d["name"],
            kind=d.get("kind", KIND_CONTINUOUS),
            lower=float(d.get("lower", 0.0)),
            upper=float(d.get("upper", 1.0)),
            choices=tuple(d.get("choices", ())),
        )


@dataclass(frozen=True)
class ParamSpace:
    """Ordered collection of uniquely named parameter entries."""

    entries: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate parameter names in space: {names}")

    def names(self) -> list:
        return [e.name for e in self.entries]

    def entry(self, name: str) -> ParamEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def clamp(self, values: Mapping) -> tuple["ParamVector", list]:
        """Clamp a raw mapping into the space.

        Unknown names are dropped, missing names keep no entry (callers merge
        with previous params). Returns the vector and a log of adjustments.
        """
        out = {}
        log = []
        for e in self.entries:
            if e.name not in values:
                continue
            raw = values[e.name]
            v = e.clamp(raw)
            if not _same_value(raw, v):
                log.append(f"clamped {e.name} to {v!r} (was {raw!r})")
            out[e.name] = v
        for name in values:
            if name not in self:
                log.append(f"dropped unknown parameter {name!r}")
        return ParamVector(out), log

    def validate(self, vector: "ParamVector") -> None:
        for name, value in vector.items():
            if name not in self:
                raise ConfigError(f"parameter {name!r} not in space")
            if not self.entry(name).contains(value):
                raise ConfigError(f"parameter {name!r}={value!r} out of bounds")

    def to_dict(self) -> list:
        return [e.to_dict() for e in self.entries]

    @classmethod
    def from_dict(cls, entries: Sequence[Mapping]) -> "ParamSpace":
        return cls(tuple(ParamEntry.from_dict(d) for d in entries))


def _same_value(a, b) -> bool:
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    return a == b


class ParamVector(Mapping):
    """Immutable name→value assignment for some ParamSpace."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping | None = None):
        self._values = dict(values or {})

    def __getitem__(self, name: str):
        return self._values[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self._values.items())
        return f"ParamVector({inner})"

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamVector):
            return self._values == other._values
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self._values.items(), key=lambda kv: kv[0])))

    def merged(self, other: Mapping) -> "ParamVector":
        merged = dict(self._values)
        merged.update(other)
        return ParamVector(merged)

    def to_dict(self) -> dict:
        return dict(self._values)

    @classmethod
    def from_dict(cls, d: Mapping) -> "ParamVector":
        return cls(d)
