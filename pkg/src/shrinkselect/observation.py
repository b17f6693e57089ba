"""Observed process ``dy_t = S(t) dt + dxi_t`` on a uniform grid."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .io import atomic_write_text
from .noise import SamplePath


@dataclass(frozen=True)
class Signal:
    """A 1-periodic signal; arguments are reduced mod 1 before evaluation."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    description: str = ""

    def __call__(self, t):
        return self.evaluator(np.mod(np.asarray(t, dtype=float), 1.0))


def test_signal(t):
    """``t sin(2 pi t) + t^2 (1 - t) cos(4 pi t)`` extended with period 1."""
    t = np.mod(np.asarray(t, dtype=float), 1.0)
    return t * np.sin(2 * np.pi * t) + t**2 * (1 - t) * np.cos(4 * np.pi * t)


# keep pytest from collecting the benchmark signal as a test
test_signal.__test__ = False

TEST_SIGNAL = Signal(test_signal, "t*sin(2*pi*t) + t^2*(1-t)*cos(4*pi*t)")


@dataclass(frozen=True)
class ObservationRecord:
    """Increments ``y_{t_{i+1}} - y_{t_i}`` over ``t_i = i / M``, ``i < n*M``."""

    horizon_n: int
    steps_per_unit: int
    dy: np.ndarray

    def __post_init__(self):
        if len(self.dy) != self.horizon_n * self.steps_per_unit:
            raise ValueError(
                f"dy must have n*M = {self.horizon_n * self.steps_per_unit} entries, got {len(self.dy)}"
            )

    @property
    def step(self) -> float:
        return 1.0 / self.steps_per_unit

    @property
    def left_points(self) -> np.ndarray:
        return np.arange(len(self.dy)) / self.steps_per_unit

    def levels(self) -> np.ndarray:
        """``y`` at all grid nodes, starting from ``y_0 = 0``."""
        return np.concatenate(([0.0], np.cumsum(self.dy)))


def generate_observations(signal: Signal | Callable, path: SamplePath) -> ObservationRecord:
    m = path.steps_per_unit
    t = np.arange(path.horizon_n * m) / m
    dy = signal(t) / m + np.diff(path.xi)
    return ObservationRecord(path.horizon_n, m, dy)


def integrate_against_dy(f_samples, obs: ObservationRecord) -> float:
    """Left-point Ito sum ``sum_i f(t_i) dy_i``."""
    f_samples = np.asarray(f_samples, dtype=float)
    if f_samples.shape != obs.dy.shape:
        raise ValueError(f"f_samples has shape {f_samples.shape}, expected {obs.dy.shape}")
    return float(f_samples @ obs.dy)


def write_observations_csv(obs: ObservationRecord, path) -> None:
    """Write ``t,y`` levels at every grid node."""
    y = obs.levels()
    t = np.arange(len(y)) / obs.steps_per_unit
    lines = ["t,y"] + [f"{ti!r},{yi!r}" for ti, yi in zip(t.tolist(), y.tolist())]
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_observations_csv(path) -> ObservationRecord:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["t", "y"]:
            raise ValueError(f"{path}: expected header 't,y', got {header}")
        rows = np.array([[float(a), float(b)] for a, b in reader])
    t, y = rows[:, 0], rows[:, 1]
    if len(t) < 2 or t[0] != 0.0:
        raise ValueError(f"{path}: grid must start at t=0 and have at least two nodes")
    m = int(round(1.0 / (t[1] - t[0])))
    n = int(round(t[-1]))
    if n * m + 1 != len(t) or not np.allclose(t, np.arange(len(t)) / m, atol=1e-9):
        raise ValueError(f"{path}: t column is not a uniform grid over [0, n]")
    return ObservationRecord(n, m, np.diff(y))
