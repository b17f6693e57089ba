"""Pinsker-type weight family and penalized model selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import estimate_coefficients, reconstruct
from .observation import ObservationRecord
from .shrinkage import MIN_BLOCK, ShrinkageParams, shrink

PRESETS = ("theory", "paper-sim")


def tau_beta(beta: int) -> float:
    if beta < 1:
        raise ValueError("beta must be >= 1")
    return (beta + 1) * (2 * beta + 1) / (math.pi ** (2 * beta) * beta)


def pinsker_weights(n: int, beta: int, r: float, v_n: float):
    """Weights ``gamma(j), j = 1..n`` for ``alpha = (beta, r)``.

    Returns ``(values, d, omega)`` where ``omega = (tau_beta r v_n)^(1/(2 beta + 1))``
    and ``d = floor(omega / ln(n + 1))`` is the all-ones prefix length.
    """
    omega = (tau_beta(beta) * r * v_n) ** (1.0 / (2 * beta + 1))
    d = math.floor(omega / math.log(n + 1))
    j = np.arange(1, n + 1, dtype=float)
    values = np.where(j <= omega, 1.0 - np.minimum(j / omega, 1.0) ** beta, 0.0)
    values[: min(d, n)] = 1.0
    return values, d, omega


@dataclass(frozen=True)
class WeightVector:
    values: np.ndarray
    d: int
    alpha: tuple
    omega: float = float("nan")


@dataclass(frozen=True)
class WeightGrid:
    """Grid of weight vectors stored row-wise in ``weights`` (shape ``(nu, n)``)."""

    weights: np.ndarray
    betas: np.ndarray
    rs: np.ndarray
    omegas: np.ndarray
    ds: np.ndarray
    k_star: int
    eps: float
    m: int
    v_n: float
    n: int = field(default=0)

    def __len__(self) -> int:
        return self.weights.shape[0]

    def __getitem__(self, i: int) -> WeightVector:
        return WeightVector(
            self.weights[i], int(self.ds[i]), (int(self.betas[i]), float(self.rs[i])), float(self.omegas[i])
        )

    @property
    def vectors(self) -> list[WeightVector]:
        return [self[i] for i in range(len(self))]

    @property
    def norm_star(self) -> float:
        """``max_gamma sum_j gamma(j)``."""
        return float(self.weights.sum(axis=1).max())

    @property
    def support(self) -> int:
        """Largest index carrying a nonzero weight anywhere in the grid."""
        nz = np.flatnonzero(self.weights.any(axis=0))
        return int(nz[-1]) + 1 if nz.size else 0


def build_grid(n: int, sigma_upper: float, k_star: int, eps: float, m: int | None = None) -> WeightGrid:
    """Weights for ``alpha`` in ``{1..k_star} x {eps, 2 eps, .., m eps}``.

    ``m`` defaults to ``ceil(1 / eps**2)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not sigma_upper > 0:
        raise ValueError("sigma_upper must be > 0")
    if k_star < 1:
        raise ValueError("k_star must be >= 1")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if m is None:
        m = math.ceil(1.0 / eps**2)
    v_n = n / sigma_upper
    rows, betas, rs, omegas, ds = [], [], [], [], []
    for beta in range(1, k_star + 1):
        for i in range(1, m + 1):
            r = i * eps
            values, d, omega = pinsker_weights(n, beta, r, v_n)
            rows.append(values)
            betas.append(beta)
            rs.append(r)
            omegas.append(omega)
            ds.append(d)
    return WeightGrid(
        weights=np.vstack(rows),
        betas=np.array(betas),
        rs=np.array(rs),
        omegas=np.array(omegas),
        ds=np.array(ds),
        k_star=k_star,
        eps=eps,
        m=m,
        v_n=v_n,
        n=n,
    )


def grid_preset(n: int, sigma_upper: float, preset: str = "paper-sim") -> WeightGrid:
    """``theory``: eps = 1/ln(n+1), k* = sqrt(ln(n+1)), m = ceil(1/eps^2).
    ``paper-sim``: k* = 100 + sqrt(ln(n+1)), r_i = i/ln(n+1), m = floor(ln^2(n+1)).
    Non-integer k* and m are floored.
    """
    L = math.log(n + 1)
    if preset == "theory":
        return build_grid(n, sigma_upper, max(1, math.floor(math.sqrt(L))), 1.0 / L)
    if preset == "paper-sim":
        return build_grid(n, sigma_upper, math.floor(100 + math.sqrt(L)), 1.0 / L, m=math.floor(L * L))
    raise ValueError(f"unknown grid preset {preset!r}; expected one of {PRESETS}")


def default_rho(n: int) -> float:
    return (3 + math.log(n)) ** -2


def proxy_variance(theta_hat, n: int) -> float:
    """``sum_{j = [sqrt n] + 1}^{n} theta_hat_j^2``."""
    theta = np.asarray(getattr(theta_hat, "theta_hat", theta_hat), dtype=float)
    start = math.isqrt(n)
    return float(np.sum(theta[start:n] ** 2))


def estimate_sigma(obs: ObservationRecord) -> float:
    if obs.horizon_n < 2:
        raise ValueError("n must be >= 2")
    return proxy_variance(estimate_coefficients(obs), obs.horizon_n)


def _values(gamma) -> np.ndarray:
    return np.asarray(getattr(gamma, "values", gamma), dtype=float)


def penalty(gamma, sigma_hat: float, n: int) -> float:
    if sigma_hat < 0:
        raise ValueError("sigma_hat must be >= 0")
    g = _values(gamma)
    return float(sigma_hat * np.dot(g, g) / n)


def cost(gamma, theta_star, theta_hat, sigma_hat: float, rho: float, n: int) -> float:
    g = _values(gamma)
    k = g.size
    ts = np.asarray(theta_star, dtype=float)[:k]
    th = np.asarray(theta_hat, dtype=float)[:k]
    cross = ts * th - sigma_hat / n
    return float(np.dot(g**2, ts**2) - 2 * np.dot(g, cross) + rho * penalty(g, sigma_hat, n))


@dataclass(frozen=True)
class ShrinkageConfig:
    """Inputs for per-vector shrinkage; ``c_n`` is recomputed with ``d = d(gamma)``."""

    rho_lower: float
    kappa_star: float
    r_star: float | None = None

    def params_for(self, d: int, n: int) -> ShrinkageParams | None:
        if d < MIN_BLOCK or d > n:
            return None
        return ShrinkageParams.for_block(d, n, self.rho_lower, self.kappa_star, self.r_star)


def shrunk_coefficients(theta_hat, d: int, n: int, shrink_cfg: ShrinkageConfig | None):
    """``(theta_star, c)``; ``c`` is ``None`` when no shrinkage applies to block ``d``."""
    theta = np.asarray(theta_hat, dtype=float)
    params = shrink_cfg.params_for(d, n) if shrink_cfg is not None else None
    if params is None:
        return theta, None
    c = params.c_n
    return shrink(theta, d, c, strict=False), c


@dataclass
class SelectionState:
    sigma_hat: float
    rho: float
    costs: np.ndarray
    index: int
    gamma_star: WeightVector
    theta_star: np.ndarray
    c_n: float | None

    @property
    def coefficients(self) -> np.ndarray:
        """Final estimator coefficients ``gamma*(j) theta*_j``."""
        return self.gamma_star.values * self.theta_star[: self.gamma_star.values.size]


def select_coefficients(
    theta_hat,
    grid: WeightGrid,
    sigma_hat: float,
    rho: float,
    shrink_cfg: ShrinkageConfig | None = None,
) -> SelectionState:
    """Minimise the penalized cost over ``grid``; ties go to the lowest index.

    ``shrink_cfg=None`` gives the plain weighted least squares procedure.
    """
    if len(grid) == 0:
        raise ValueError("weight grid is empty")
    if not 0 < rho < 0.5:
        raise ValueError(f"rho must lie in (0, 1/2), got {rho}")
    theta = np.asarray(getattr(theta_hat, "theta_hat", theta_hat), dtype=float)
    n = grid.n
    W = grid.weights
    W2_sum = np.einsum("ij,ij->i", W, W)
    costs = np.empty(len(grid))
    shrunk = {}
    for d in np.unique(grid.ds):
        rows = np.flatnonzero(grid.ds == d)
        ts, c = shrunk_coefficients(theta, int(d), n, shrink_cfg)
        shrunk[int(d)] = (ts, c)
        Wd = W[rows]
        costs[rows] = (Wd**2) @ ts**2 - 2 * (Wd @ (ts * theta - sigma_hat / n)) + rho * sigma_hat * W2_sum[rows] / n
    index = int(np.argmin(costs))
    gamma = grid[index]
    ts, c = shrunk[gamma.d]
    return SelectionState(sigma_hat, rho, costs, index, gamma, ts, c)


def select(
    obs: ObservationRecord,
    grid: WeightGrid,
    shrink_cfg: ShrinkageConfig | None,
    rho: float,
    eval_points=None,
    sigma_hat: float | None = None,
):
    """Run the full selection on ``obs`` and sample the chosen estimator.

    Returns ``(state, samples)``; ``samples`` is ``None`` when no
    ``eval_points`` are given. Pass ``sigma_hat`` to use a known proxy
    variance instead of the estimate.
    """
    if grid.n != obs.horizon_n:
        raise ValueError(f"grid built for n = {grid.n}, observations have n = {obs.horizon_n}")
    est = estimate_coefficients(obs)
    if sigma_hat is None:
        sigma_hat = proxy_variance(est, obs.horizon_n)
    state = select_coefficients(est.theta_hat, grid, sigma_hat, rho, shrink_cfg)
    samples = None if eval_points is None else reconstruct(state.coefficients, eval_points)
    return state, samples
