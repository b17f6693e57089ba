"""James-Stein type shrinkage of the leading Fourier coefficients."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

MIN_BLOCK = 7
DEGENERATE_NORM = 1e-30


def l_n_star(rho_lower: float, d: int) -> float:
    """Lower bound ``rho_lower (d - 6) / 2`` on ``tr G - lambda_max(G)``."""
    if d < MIN_BLOCK:
        raise ValueError(f"block size d must be >= {MIN_BLOCK}, got {d}")
    return rho_lower * (d - 6) / 2


def c_n(l_star: float, r_star: float, d: int, kappa_star: float, n: int) -> float:
    return l_star / ((r_star + math.sqrt(d * kappa_star / n)) * n)


def default_r_star(n: int) -> float:
    return math.log(n + 1)


@dataclass(frozen=True)
class ShrinkageParams:
    d: int
    l_n_star: float
    r_n_star: float
    kappa_star: float
    n: int

    def __post_init__(self):
        if self.d < MIN_BLOCK:
            raise ValueError(f"block size d must be >= {MIN_BLOCK}, got {self.d}")

    @property
    def c_n(self) -> float:
        return c_n(self.l_n_star, self.r_n_star, self.d, self.kappa_star, self.n)

    @classmethod
    def for_block(cls, d: int, n: int, rho_lower: float, kappa_star: float, r_star: float | None = None):
        r = default_r_star(n) if r_star is None else r_star
        return cls(d, l_n_star(rho_lower, d), r, kappa_star, n)


def shrink(theta_hat, d: int, c: float, strict: bool = True) -> np.ndarray:
    """Scale the first ``d`` coefficients by ``1 - c / |theta_hat[:d]|``.

    With ``strict=False`` a degenerate head block (norm below 1e-30) is
    returned unshrunk and logged instead of raising.
    """
    theta = np.asarray(getattr(theta_hat, "theta_hat", theta_hat), dtype=float)
    if d > theta.size:
        raise ValueError(f"d = {d} exceeds coefficient count {theta.size}")
    out = theta.copy()
    norm = float(np.linalg.norm(theta[:d]))
    if norm < DEGENERATE_NORM:
        if strict:
            raise ZeroDivisionError("head block of the coefficient vector has zero norm")
        log.warning("degenerate head block (norm %.3g); shrinkage skipped", norm)
        return out
    out[:d] *= 1.0 - c / norm
    return out
