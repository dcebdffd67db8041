"""Scenario families: two-level systems whose energies and coupling are affine in ``a``."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from .errors import ConfigError, UnknownPreset
from .spectral import TwoLevelSystem

__all__ = ["Affine", "ComplexAffine", "Grid", "ScenarioConfig", "PRESETS", "preset", "DEFAULT_COUNT"]

DEFAULT_COUNT = 601


def _finite(x: float, what: str) -> float:
    try:
        x = float(x)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: expected a number, got {x!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"{what}: not finite ({x!r})")
    return x


def _complex(x: Any, what: str) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ConfigError(f"{what}: complex value must be [re, im]")
        return complex(_finite(x[0], what), _finite(x[1], what))
    if isinstance(x, dict):
        return complex(_finite(x.get("re", 0.0), what), _finite(x.get("im", 0.0), what))
    if isinstance(x, complex):
        return complex(_finite(x.real, what), _finite(x.imag, what))
    return complex(_finite(x, what), 0.0)


@dataclass(frozen=True)
class Affine:
    """c0 + c1 * a."""

    c0: float
    c1: float = 0.0

    def __call__(self, a: float) -> float:
        return self.c0 + self.c1 * a

    def to_dict(self) -> dict:
        return {"c0": self.c0, "c1": self.c1}

    @classmethod
    def parse(cls, obj: Any, what: str) -> "Affine":
        if isinstance(obj, dict):
            return cls(_finite(obj.get("c0", 0.0), what), _finite(obj.get("c1", 0.0), what))
        if isinstance(obj, (list, tuple)):
            if len(obj) != 2:
                raise ConfigError(f"{what}: affine expression must be [c0, c1]")
            return cls(_finite(obj[0], what), _finite(obj[1], what))
        return cls(_finite(obj, what), 0.0)


@dataclass(frozen=True)
class ComplexAffine:
    """c0 + c1 * a with complex coefficients, evaluated componentwise."""

    c0: complex
    c1: complex = 0j

    def __call__(self, a: float) -> complex:
        return complex(self.c0.real + self.c1.real * a, self.c0.imag + self.c1.imag * a)

    def to_dict(self) -> dict:
        return {"c0": [self.c0.real, self.c0.imag], "c1": [self.c1.real, self.c1.imag]}

    @classmethod
    def parse(cls, obj: Any, what: str) -> "ComplexAffine":
        if isinstance(obj, dict):
            return cls(_complex(obj.get("c0", 0.0), what), _complex(obj.get("c1", 0.0), what))
        return cls(_complex(obj, what), 0j)


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int = DEFAULT_COUNT

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("a_grid bounds must be finite")
        if self.count < 2:
            raise ConfigError(f"a_grid count must be >= 2, got {self.count}")
        if not self.stop > self.start:
            raise ConfigError("a_grid must be strictly increasing (stop > start)")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.count - 1)


@dataclass(frozen=True)
class ScenarioConfig:
    """A one-parameter family of two-level systems.

    Widths ``g1``/``g2`` are full widths (the figure parameters are quoted as half-widths).
    ``channels`` is carried as metadata only.
    """

    name: str
    e1_expr: Affine
    e2_expr: Affine
    g1: float
    g2: float
    omega_expr: ComplexAffine
    a_grid: Grid
    channels: int = 1

    def __post_init__(self):
        _finite(self.g1, "g1")
        _finite(self.g2, "g2")
        if not isinstance(self.channels, int) or self.channels < 1:
            raise ConfigError("channels must be a positive integer")

    def e1(self, a: float) -> float:
        return self.e1_expr(a)

    def e2(self, a: float) -> float:
        return self.e2_expr(a)

    def omega(self, a: float) -> complex:
        return self.omega_expr(a)

    def system_at(self, a: float) -> TwoLevelSystem:
        return TwoLevelSystem(self.e1(a), self.e2(a), self.g1, self.g2, self.omega(a))

    def grid(self) -> np.ndarray:
        return self.a_grid.values()

    def with_count(self, count: int) -> "ScenarioConfig":
        return replace(self, a_grid=Grid(self.a_grid.start, self.a_grid.stop, int(count)))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "e1_expr": self.e1_expr.to_dict(),
            "e2_expr": self.e2_expr.to_dict(),
            "g1": self.g1,
            "g2": self.g2,
            "omega_expr": self.omega_expr.to_dict(),
            "a_grid": [self.a_grid.start, self.a_grid.stop, self.a_grid.count],
            "channels": self.channels,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        if not isinstance(d, dict):
            raise ConfigError("scenario config must be a JSON object")
        if "config" in d and isinstance(d["config"], dict):
            # a run manifest: re-use the config it echoes
            d = d["config"]
        required = ("e1_expr", "e2_expr", "g1", "g2", "omega_expr", "a_grid")
        missing = [k for k in required if k not in d]
        if missing:
            raise ConfigError(f"config missing fields: {', '.join(missing)}")
        grid = d["a_grid"]
        if isinstance(grid, dict):
            grid = [grid.get("start"), grid.get("stop"), grid.get("count", DEFAULT_COUNT)]
        if not isinstance(grid, (list, tuple)) or len(grid) not in (2, 3):
            raise ConfigError("a_grid must be [start, stop, count]")
        count = grid[2] if len(grid) == 3 else DEFAULT_COUNT
        if isinstance(count, bool) or not isinstance(count, int):
            raise ConfigError("a_grid count must be an integer")
        channels = d.get("channels", 1)
        if isinstance(channels, bool) or not isinstance(channels, int):
            raise ConfigError("channels must be an integer")
        return cls(
            name=str(d.get("name", "custom")),
            e1_expr=Affine.parse(d["e1_expr"], "e1_expr"),
            e2_expr=Affine.parse(d["e2_expr"], "e2_expr"),
            g1=_finite(d["g1"], "g1"),
            g2=_finite(d["g2"], "g2"),
            omega_expr=ComplexAffine.parse(d["omega_expr"], "omega_expr"),
            a_grid=Grid(_finite(grid[0], "a_grid start"), _finite(grid[1], "a_grid stop"), count),
            channels=channels,
        )


_SQRT2 = math.sqrt(2.0)

# Figure parameters are quoted as gamma_i/2; the configs store full widths.
PRESETS: dict[str, ScenarioConfig] = {
    "fig1_left": ScenarioConfig(
        name="fig1_left",
        e1_expr=Affine(1.0, -0.5),
        e2_expr=Affine(0.0, 1.0),
        g1=2 * -0.05,
        g2=2 * 0.06,
        omega_expr=ComplexAffine(0.055 + 0j),
        a_grid=Grid(0.0, 1.5),
    ),
    "fig1_right": ScenarioConfig(
        name="fig1_right",
        e1_expr=Affine(1.0, -0.5),
        e2_expr=Affine(0.0, 1.0),
        g1=2 * -0.05,
        g2=2 * 0.06,
        omega_expr=ComplexAffine(complex(0.0789 / _SQRT2, 0.0789 / _SQRT2)),
        a_grid=Grid(0.0, 1.5),
    ),
    "fig2_left": ScenarioConfig(
        name="fig2_left",
        e1_expr=Affine(2 / 3),
        e2_expr=Affine(2 / 3),
        g1=2 * -0.05,
        g2=2 * 0.05,
        omega_expr=ComplexAffine(0j, 1 + 0j),
        a_grid=Grid(0.0, 0.1),
    ),
    "fig2_right": ScenarioConfig(
        name="fig2_right",
        e1_expr=Affine(2 / 3),
        e2_expr=Affine(-2 / 3),
        g1=2 * -0.05,
        g2=2 * 0.05,
        omega_expr=ComplexAffine(0j, 1j),
        a_grid=Grid(0.0, 0.12),
    ),
}


def preset(name: str) -> ScenarioConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}"
        ) from None
