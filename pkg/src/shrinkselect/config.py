"""Experiment configuration: JSON file plus ``key.subkey=value`` overrides."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .noise import NoiseFamilyBounds, NoiseParams, check_family
from .selection import PRESETS


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending key path."""


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple = (100, 200)
    replications: int = 200
    eval_points: int = 2001
    steps_per_unit: int = 200
    noise: NoiseParams = field(default_factory=NoiseParams)
    bounds: NoiseFamilyBounds = field(default_factory=NoiseFamilyBounds)
    grid_preset: str = "paper-sim"
    root_seed: int = 0
    # penalty coefficient; None means (3 + ln n)^-2 per horizon
    rho: float | None = None
    # signal-norm radius in c_n; None means ln(n + 1)
    r_star: float | None = None
    # use the true proxy variance instead of its estimate
    known_sigma: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        _require(len(self.n_values) > 0 and all(n >= 2 for n in self.n_values), "n_values", "every n must be >= 2")
        _require(self.replications >= 1, "replications", "must be >= 1")
        _require(self.eval_points >= 2, "eval_points", "must be >= 2")
        _require(self.steps_per_unit >= 100, "steps_per_unit", "must be >= 100")
        _require(self.grid_preset in PRESETS, "grid_preset", f"must be one of {PRESETS}")
        _require(self.rho is None or 0 < self.rho < 0.5, "rho", "must lie in (0, 1/2)")
        _require(self.r_star is None or self.r_star > 0, "r_star", "must be > 0")
        _require(self.workers >= 1, "workers", "must be >= 1")
        _require(
            check_family(self.noise, self.bounds),
            "noise",
            "parameters fall outside the family given by bounds",
        )

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["n_values"] = list(self.n_values)
        return d

    def full_scale(self) -> "ExperimentConfig":
        return dataclasses.replace(
            self, n_values=(100, 200, 500, 1000), replications=1000, steps_per_unit=1000, eval_points=100001
        )


def _require(ok: bool, key: str, msg: str) -> None:
    if not ok:
        raise ConfigError(f"{key}: {msg}")


_NESTED = {"noise": NoiseParams, "bounds": NoiseFamilyBounds}

_INT_KEYS = {"replications", "eval_points", "steps_per_unit", "root_seed", "workers"}
_OPTIONAL_REAL_KEYS = {"rho", "r_star"}


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check_type(key: str, value) -> None:
    if key in _INT_KEYS and not _is_int(value):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    if key in _OPTIONAL_REAL_KEYS and value is not None and not _is_real(value):
        raise ConfigError(f"{key}: expected a number or null, got {value!r}")
    if key == "n_values" and not (isinstance(value, list) and value and all(_is_int(v) for v in value)):
        raise ConfigError(f"{key}: expected a non-empty list of integers, got {value!r}")
    if key == "grid_preset" and not isinstance(value, str):
        raise ConfigError(f"{key}: expected a string, got {value!r}")
    if key == "known_sigma" and not isinstance(value, bool):
        raise ConfigError(f"{key}: expected true or false, got {value!r}")


def _fields(cls) -> set:
    return {f.name for f in dataclasses.fields(cls)}


def from_dict(data: dict) -> ExperimentConfig:
    """Build a config from a (possibly partial) dict, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError("<root>: config must be a JSON object")
    kwargs = {}
    for key, value in data.items():
        if key not in _fields(ExperimentConfig):
            raise ConfigError(f"{key}: unknown key")
        if key in _NESTED:
            cls = _NESTED[key]
            if not isinstance(value, dict):
                raise ConfigError(f"{key}: expected an object")
            for sub, subval in value.items():
                if sub not in _fields(cls):
                    raise ConfigError(f"{key}.{sub}: unknown key")
                if not _is_real(subval):
                    raise ConfigError(f"{key}.{sub}: expected a number, got {subval!r}")
            try:
                value = cls(**{**dataclasses.asdict(cls()), **value})
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: {exc}") from exc
        else:
            _check_type(key, value)
        kwargs[key] = value
    try:
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"<root>: {exc}") from exc


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(data: dict, overrides: Iterable[str]) -> dict:
    data = json.loads(json.dumps(data))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"{item}: override must look like key=value")
        key, raw = item.split("=", 1)
        parts = key.strip().split(".")
        node = data
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"{key}: {p} is not an object")
        node[parts[-1]] = _parse_value(raw.strip())
    return data


def parse_config(path=None, overrides: Iterable[str] = ()) -> ExperimentConfig:
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"<file {path}>: malformed JSON ({exc})") from exc
    return from_dict(apply_overrides(data, overrides))


def dump_config(config: ExperimentConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"
