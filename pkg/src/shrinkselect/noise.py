"""Ornstein-Uhlenbeck noise driven by Brownian motion plus compound Poisson jumps.

The noise obeys

    dxi_t = a xi_t dt + rho1 dw_t + rho2 dz_t,    xi_0 = 0,

where ``z`` is a compound Poisson process with intensity ``intensity`` and
centered Gaussian jumps of standard deviation ``jump_sd``. The jump measure is
normalised so that ``intensity * jump_sd**2 == 1``. Because the jumps are
centered, the compensator has zero drift and ``z`` is simply the raw jump sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.signal import lfilter

from .rng import SeedLike, generator, substream

MIN_STEPS_PER_UNIT = 100


@dataclass(frozen=True)
class NoiseParams:
    """Parameters of the OU-Levy noise.

    Attributes
    ----------
    a : float
        Drift coefficient, must be ``<= 0``.
    rho1 : float
        Brownian scale, ``> 0``.
    rho2 : float
        Jump scale, ``>= 0``.
    intensity : float
        Poisson rate of the jump process.
    jump_sd : float
        Standard deviation of the Gaussian jump sizes.
    """

    a: float = -1.0
    rho1: float = 0.5
    rho2: float = 0.5
    intensity: float = 1.0
    jump_sd: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a <= 0):
            raise ValueError(f"a must be <= 0, got {self.a}")
        if not self.rho1 > 0:
            raise ValueError(f"rho1 must be > 0, got {self.rho1}")
        if not self.rho2 >= 0:
            raise ValueError(f"rho2 must be >= 0, got {self.rho2}")
        if not (self.intensity > 0 and self.jump_sd > 0):
            raise ValueError("intensity and jump_sd must be > 0")
        if not math.isclose(self.intensity * self.jump_sd**2, 1.0, rel_tol=1e-9):
            raise ValueError(
                "intensity * jump_sd**2 must equal 1 "
                f"(got {self.intensity} * {self.jump_sd}**2)"
            )


@dataclass(frozen=True)
class NoiseFamilyBounds:
    """Bounds ``(a_max, rho_lower, sigma_upper)`` describing the admissible family."""

    a_max: float = 1.0
    rho_lower: float = 0.25
    sigma_upper: float = 0.5

    def __post_init__(self):
        if not self.a_max > 0:
            raise ValueError(f"a_max must be > 0, got {self.a_max}")
        if not 0 < self.rho_lower <= self.sigma_upper:
            raise ValueError("need 0 < rho_lower <= sigma_upper")

    @property
    def kappa_star(self) -> float:
        return 2.0 * self.sigma_upper


@dataclass(frozen=True)
class SamplePath:
    horizon_n: int
    steps_per_unit: int
    xi: np.ndarray

    def __post_init__(self):
        if len(self.xi) != self.horizon_n * self.steps_per_unit + 1:
            raise ValueError("xi must hold n*M + 1 grid values")

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.xi)) / self.steps_per_unit


class Jumps(NamedTuple):
    times: np.ndarray
    sizes: np.ndarray


def sigma_q(params) -> float:
    """Proxy variance ``rho1**2 + rho2**2``."""
    return params.rho1**2 + params.rho2**2


def kappa_q(params) -> float:
    """Second-moment constant of the stochastic integral, ``2 * sigma_q``."""
    return 2.0 * sigma_q(params)


def check_family(params: NoiseParams, bounds: NoiseFamilyBounds) -> bool:
    return bool(
        -bounds.a_max <= params.a <= 0
        and bounds.rho_lower <= params.rho1**2
        and sigma_q(params) <= bounds.sigma_upper
    )


def simulate_jumps(params: NoiseParams, horizon: float, seed: SeedLike) -> Jumps:
    """Jump times and sizes of the compound Poisson process on ``[0, horizon]``."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    rng = generator(seed)
    count = rng.poisson(params.intensity * horizon) if horizon > 0 else 0
    times = np.sort(rng.uniform(0.0, horizon, size=count))
    sizes = rng.normal(0.0, params.jump_sd, size=count)
    return Jumps(times, sizes)


def _gaussian_step_sd(a: float, h: float) -> float:
    if a == 0:
        return math.sqrt(h)
    return math.sqrt(math.expm1(2 * a * h) / (2 * a))


def simulate_ou_levy(
    params: NoiseParams,
    horizon_n: int,
    steps_per_unit: int,
    seed: SeedLike,
) -> SamplePath:
    """Sample the noise at ``t_i = i / M``, ``i = 0..n*M``.

    The Gaussian part uses the exact OU transition over each step. A jump at
    time ``tau`` is credited to the first grid node at or after ``tau`` with
    the exact decay factor ``exp(a (t_i - tau))``, so grid values are exact in
    distribution.
    """
    if horizon_n < 1:
        raise ValueError("horizon_n must be >= 1")
    if steps_per_unit < MIN_STEPS_PER_UNIT:
        raise ValueError(f"steps_per_unit must be >= {MIN_STEPS_PER_UNIT}, got {steps_per_unit}")
    m = int(steps_per_unit)
    steps = horizon_n * m
    h = 1.0 / m
    a = params.a

    innov = np.zeros(steps + 1)
    innov[1:] = params.rho1 * _gaussian_step_sd(a, h) * generator(seed, 0).standard_normal(steps)

    if params.rho2 > 0:
        jumps = simulate_jumps(params, float(horizon_n), substream(seed, 1))
        if len(jumps.times):
            idx = np.clip(np.ceil(jumps.times * m).astype(np.int64), 1, steps)
            decay = np.exp(a * (idx * h - jumps.times))
            np.add.at(innov, idx, params.rho2 * jumps.sizes * decay)

    xi = lfilter([1.0], [1.0, -math.exp(a * h)], innov)
    xi[0] = 0.0
    return SamplePath(horizon_n, m, xi)

