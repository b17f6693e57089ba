"""Trigonometric basis on [0, 1] and Fourier coefficient estimates.

``Tr_1 = 1``; for ``j >= 2``, ``Tr_j(t) = sqrt(2) cos(2 pi [j/2] t)`` when ``j`` is
even and ``sqrt(2) sin(2 pi [j/2] t)`` when ``j`` is odd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .observation import ObservationRecord

SQRT2 = math.sqrt(2.0)


def frequency(j) -> np.ndarray:
    """Angular frequency ``2 pi [j/2]`` of ``Tr_j``."""
    return 2 * np.pi * (np.asarray(j) // 2)


def trig(j: int, t):
    if j < 1:
        raise ValueError(f"basis index must be >= 1, got {j}")
    t = np.asarray(t, dtype=float)
    if j == 1:
        return np.ones_like(t)
    w = 2 * np.pi * (j // 2)
    return SQRT2 * (np.cos(w * t) if j % 2 == 0 else np.sin(w * t))


def basis_matrix(count: int, t) -> np.ndarray:
    """Rows ``Tr_1 .. Tr_count`` evaluated at ``t``; shape ``(count, len(t))``."""
    t = np.asarray(t, dtype=float)
    out = np.empty((count, t.size))
    if count == 0:
        return out
    out[0] = 1.0
    if count > 1:
        k = np.arange(1, count // 2 + 1)
        phase = 2 * np.pi * np.outer(k, t)
        cos_rows = np.arange(1, count, 2)  # j = 2, 4, ... at row j-1
        sin_rows = np.arange(2, count, 2)  # j = 3, 5, ...
        out[cos_rows] = SQRT2 * np.cos(phase[: len(cos_rows)])
        out[sin_rows] = SQRT2 * np.sin(phase[: len(sin_rows)])
    return out


@dataclass(frozen=True)
class FourierEstimates:
    """``theta_hat[j-1]`` estimates the coefficient of ``Tr_j``."""

    theta_hat: np.ndarray
    horizon_n: int

    def head(self, d: int) -> np.ndarray:
        return self.theta_hat[:d]


def estimate_coefficients(obs: ObservationRecord, count: int | None = None) -> FourierEstimates:
    """``theta_hat_j = (1/n) sum_i Tr_j(t_i) dy_i`` for ``j = 1..count``.

    The basis is 1-periodic and the grid has exactly ``M`` nodes per unit, so
    the increments are first folded onto one period and the sums are read off
    a single length-``M`` FFT.
    """
    n, m = obs.horizon_n, obs.steps_per_unit
    count = n if count is None else int(count)
    if count > n:
        raise ValueError(f"count {count} exceeds horizon n = {n}")
    if count < 1:
        raise ValueError("count must be >= 1")
    if count // 2 > m // 2:
        raise ValueError(f"frequency {count // 2} aliases on a grid with M = {m} steps per unit")
    folded = obs.dy.reshape(n, m).sum(axis=0)
    spectrum = np.fft.fft(folded)
    j = np.arange(1, count + 1)
    k = j // 2
    f = spectrum[k]
    theta = np.where(j % 2 == 0, SQRT2 * f.real, -SQRT2 * f.imag)
    theta[0] = f[0].real
    return FourierEstimates(theta / n, n)


def reconstruct(coeffs, eval_points) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    nz = np.flatnonzero(coeffs)
    t = np.asarray(eval_points, dtype=float)
    if nz.size == 0:
        return np.zeros_like(t)
    top = int(nz[-1]) + 1
    return coeffs[:top] @ basis_matrix(top, t)


def l2_norm_sq(samples) -> float:
    """Trapezoidal ``int_0^1 f(t)^2 dt`` from samples on a uniform grid including both ends."""
    f = np.asarray(samples, dtype=float)
    if f.size < 2:
        raise ValueError("need at least two grid points")
    return float(np.trapezoid(f**2, dx=1.0 / (f.size - 1)))


def phi_star_integral(d: int, grid_size: int = 1000, t_points: int = 10_000) -> float:
    """Quadrature of ``v -> max_t |sum_{j<=d} Tr_j(t) Tr_j(t - v)|`` over ``[0, 1]``.

    The maximum is taken over ``t_points`` equispaced ``t`` in one period; the
    outer integral is a trapezoid rule on ``grid_size + 1`` nodes.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    t = np.arange(t_points) / t_points
    w = frequency(np.arange(1, d + 1))
    B = basis_matrix(d, t)
    # Tr_j(t - v) = cos(w_j v) Tr_j(t) + sin(w_j v) Tc_j(t)
    Tc = np.empty_like(B)
    Tc[0] = 0.0
    Tc[1::2] = SQRT2 * np.sin(np.outer(w[1::2], t))
    Tc[2::2] = -SQRT2 * np.cos(np.outer(w[2::2], t))
    P, Q = B * B, B * Tc
    v = np.linspace(0.0, 1.0, grid_size + 1)
    phi = np.empty_like(v)
    chunk = max(1, 2_000_000 // t_points)
    for s in range(0, v.size, chunk):
        vv = v[s : s + chunk, None] * w[None, :]
        vals = np.cos(vv) @ P + np.sin(vv) @ Q
        phi[s : s + chunk] = np.abs(vals).max(axis=1)
    return float(np.trapezoid(phi, v))


def a_check(a_max: float) -> float:
    """``(1 - exp(-a_max)) / (4 a_max)``, with the limit 1/4 at ``a_max = 0``."""
    if a_max < 0:
        raise ValueError("a_max must be >= 0")
    if a_max == 0:
        return 0.25
    return -math.expm1(-a_max) / (4 * a_max)


def d_zero(a_max: float) -> int:
    """Smallest ``d >= 7`` with ``5 + ln d <= a_check(a_max) * d``."""
    ac = a_check(a_max)
    d = 7
    while 5 + math.log(d) > ac * d:
        d += 1
    return d


@dataclass(frozen=True)
class BasisDiagnostics:
    phi_star_bound: float
    d0: int
    a_check: float


def basis_diagnostics(a_max: float) -> BasisDiagnostics:
    return BasisDiagnostics(phi_star_bound=SQRT2, d0=d_zero(a_max), a_check=a_check(a_max))
