"""Run configuration: tolerances, caps, quadrature and optimizer settings.

Every numerical routine takes its tolerances as keyword arguments whose
defaults are the values below; :class:`RunConfig` bundles them for the CLI
and for reports so that a run can be reproduced from its JSON alone.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import ArgumentError

TOL_HERM = 1e-9
TOL_TR = 1e-9
TOL_PSD = 1e-8
TOL_RANK = 1e-8
TOL_NORM = 1e-9

MAX_ENTRIES = 2**26
MAX_PERM_N = 8
MAX_IID_N = 14
MAX_ANTISYM_D = 5


@dataclass(frozen=True)
class Tolerances:
    herm: float = TOL_HERM
    tr: float = TOL_TR
    psd: float = TOL_PSD
    rank: float = TOL_RANK
    norm: float = TOL_NORM


@dataclass(frozen=True)
class Caps:
    max_entries: int = MAX_ENTRIES
    max_perm_n: int = MAX_PERM_N
    max_iid_n: int = MAX_IID_N
    max_antisym_d: int = MAX_ANTISYM_D


@dataclass(frozen=True)
class QuadratureConfig:
    kind: str = "auto"
    resolution: int = 2000
    seed: int = 0


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 8
    iterations: int = 500
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    tolerances: Tolerances = field(default_factory=Tolerances)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    format: str = "json"
    caps: Caps = field(default_factory=Caps)

    def __post_init__(self):
        for name, value in dataclasses.asdict(self.tolerances).items():
            if not value > 0:
                raise ArgumentError(f"tolerance {name} must be positive, got {value}")
        if self.quadrature.resolution < 2:
            raise ArgumentError("quadrature resolution must be at least 2")
        if self.format not in ("json", "csv", "text"):
            raise ArgumentError(f"unknown output format {self.format!r}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(
            tolerances=Tolerances(**data.get("tolerances", {})),
            quadrature=QuadratureConfig(**data.get("quadrature", {})),
            optimizer=OptimizerConfig(**data.get("optimizer", {})),
            format=data.get("format", "json"),
            caps=Caps(**data.get("caps", {})),
        )

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **sections) -> "RunConfig":
        """Return a copy with whole sections or nested fields replaced.

        ``cfg.replace(quadrature={"seed": 3})`` updates a single field.
        """
        kwargs = {}
        for key, value in sections.items():
            current = getattr(self, key)
            if isinstance(value, dict) and dataclasses.is_dataclass(current):
                value = dataclasses.replace(current, **value)
            kwargs[key] = value
        return dataclasses.replace(self, **kwargs)
