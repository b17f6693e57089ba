"""Replication harness for the empirical risk tables."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import basis_matrix, estimate_coefficients
from .config import ExperimentConfig
from .noise import sigma_q, simulate_ou_levy
from .observation import TEST_SIGNAL, Signal, generate_observations
from .selection import (
    ShrinkageConfig,
    WeightGrid,
    default_rho,
    grid_preset,
    proxy_variance,
    select_coefficients,
    shrunk_coefficients,
)

IMPROVED = "improved-selected"
LSE = "lse-selected"
IMPROVED_FIXED = "improved-fixed"
LSE_FIXED = "lse-fixed"
ESTIMATORS = (IMPROVED, LSE, IMPROVED_FIXED, LSE_FIXED)


class ReplicationError(RuntimeError):
    def __init__(self, n: int, index: int, stage: str, cause: BaseException):
        super().__init__(f"replication failed at n={n}, index={index}, stage={stage}: {cause!r}")
        self.n, self.index, self.stage = n, index, stage


def empirical_risk(estimate, truth: Signal, p: int) -> float:
    """Mean squared deviation over ``p`` equispaced points of ``[0, 1]``."""
    if p < 2:
        raise ValueError("p must be >= 2")
    t = np.linspace(0.0, 1.0, p)
    est = estimate(t) if callable(estimate) else np.asarray(estimate, dtype=float)
    if est.shape != t.shape:
        raise ValueError(f"estimate has shape {est.shape}, expected ({p},)")
    return float(np.mean((est - truth(t)) ** 2))


def pinsker_constant(k: int, r: float) -> float:
    if k < 1 or not r > 0:
        raise ValueError("need k >= 1 and r > 0")
    return ((1 + 2 * k) * r) ** (1 / (2 * k + 1)) * (k / (math.pi * (k + 1))) ** (2 * k / (2 * k + 1))


@dataclass(frozen=True)
class PinskerReference:
    k: int
    r: float

    @property
    def value(self) -> float:
        return pinsker_constant(self.k, self.r)


@dataclass(frozen=True)
class RiskRow:
    n: int
    estimator: str
    risk: float
    stderr: float


@dataclass
class RiskReport:
    rows: list
    diagnostics: dict = field(default_factory=dict)

    def risk(self, n: int, estimator: str) -> RiskRow:
        for row in self.rows:
            if row.n == n and row.estimator == estimator:
                return row
        raise KeyError((n, estimator))

    @property
    def n_values(self) -> list:
        return sorted({row.n for row in self.rows})

    def ratio(self, n: int, fixed: bool = False) -> float:
        """LSE risk over improved risk, at selected weights or at the shared LSE weights."""
        imp, lse = (IMPROVED_FIXED, LSE_FIXED) if fixed else (IMPROVED, LSE)
        return self.risk(n, lse).risk / self.risk(n, imp).risk

    def to_csv(self) -> str:
        lines = ["n,estimator,risk,stderr"]
        lines += [f"{r.n},{r.estimator},{r.risk!r},{r.stderr!r}" for r in self.rows]
        return "\n".join(lines) + "\n"

    def ratio_table(self) -> str:
        ns = self.n_values
        header = "\t".join(["n"] + [str(n) for n in ns])

        def line(label, values):
            return "\t".join([label] + [f"{v:.4f}" for v in values])

        def ratio_line(values):
            return "\t".join(["ratio"] + [f"{v:.1f}" for v in values])

        out = ["Selected weights: sample quadratic risks, each procedure with its own choice", header]
        out.append(line("R(S*_{gamma*},S)", [self.risk(n, IMPROVED).risk for n in ns]))
        out.append(line("R(S^_{gamma^},S)", [self.risk(n, LSE).risk for n in ns]))
        out.append(ratio_line([self.ratio(n) for n in ns]))
        out += ["", "Fixed weights: sample quadratic risks, both at the weights chosen by LSE", header]
        out.append(line("R(S*_{gamma^},S)", [self.risk(n, IMPROVED_FIXED).risk for n in ns]))
        out.append(line("R(S^_{gamma^},S)", [self.risk(n, LSE_FIXED).risk for n in ns]))
        out.append(ratio_line([self.ratio(n, fixed=True) for n in ns]))
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        payload = {
            "rows": [r.__dict__ for r in self.rows],
            "diagnostics": {str(n): d for n, d in self.diagnostics.items()},
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


@lru_cache(maxsize=16)
def _grid(n: int, sigma_upper: float, preset: str) -> WeightGrid:
    return grid_preset(n, sigma_upper, preset)


@lru_cache(maxsize=16)
def _eval_basis(support: int, p: int) -> tuple:
    t = np.linspace(0.0, 1.0, p)
    return basis_matrix(support, t), TEST_SIGNAL(t)


def replication_seed(root_seed: int, n: int, index: int) -> tuple:
    return (root_seed, n, index)


def run_replication(config: ExperimentConfig, n: int, index: int) -> dict:
    """One replication at horizon ``n``: per-estimator risks and selection diagnostics."""
    grid = _grid(n, config.bounds.sigma_upper, config.grid_preset)
    support = max(grid.support, 1)
    B, truth = _eval_basis(support, config.eval_points)
    rho = default_rho(n) if config.rho is None else config.rho
    shrink_cfg = ShrinkageConfig(config.bounds.rho_lower, config.bounds.kappa_star, config.r_star)

    stage = "simulate"
    try:
        path = simulate_ou_levy(config.noise, n, config.steps_per_unit, replication_seed(config.root_seed, n, index))
        stage = "observe"
        obs = generate_observations(TEST_SIGNAL, path)
        stage = "estimate"
        theta_hat = estimate_coefficients(obs).theta_hat
        sigma_hat = sigma_q(config.noise) if config.known_sigma else proxy_variance(theta_hat, n)
        stage = "select"
        improved = select_coefficients(theta_hat, grid, sigma_hat, rho, shrink_cfg)
        lse = select_coefficients(theta_hat, grid, sigma_hat, rho, None)
        gamma_hat = lse.gamma_star
        theta_fixed, c_fixed = shrunk_coefficients(theta_hat, gamma_hat.d, n, shrink_cfg)
        stage = "risk"
        coeffs = {
            IMPROVED: improved.coefficients,
            LSE: lse.coefficients,
            IMPROVED_FIXED: gamma_hat.values * theta_fixed,
            LSE_FIXED: gamma_hat.values * theta_hat,
        }
        risks = {k: float(np.mean((c[:support] @ B - truth) ** 2)) for k, c in coeffs.items()}
    except Exception as exc:
        raise ReplicationError(n, index, stage, exc) from exc
    return {
        "risks": risks,
        "sigma_hat": sigma_hat,
        "improved_index": improved.index,
        "lse_index": lse.index,
        "lse_d": gamma_hat.d,
        "lse_omega": gamma_hat.omega,
        "improved_shrunk": improved.c_n is not None,
        "fixed_c_n": c_fixed,
    }


def _run_chunk(args) -> list:
    config, n, indices = args
    return [run_replication(config, n, i) for i in indices]


def _replications(config: ExperimentConfig, n: int) -> list:
    indices = list(range(config.replications))
    if config.workers == 1:
        return _run_chunk((config, n, indices))
    size = math.ceil(len(indices) / (4 * config.workers))
    chunks = [(config, n, indices[s : s + size]) for s in range(0, len(indices), size)]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        # map preserves chunk order, so aggregation stays index-ordered
        return [out for part in pool.map(_run_chunk, chunks) for out in part]


def _mean_se(x: np.ndarray) -> tuple:
    se = float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")
    return float(np.mean(x)), se


def run_experiment(config: ExperimentConfig) -> RiskReport:
    rows, diagnostics = [], {}
    for n in config.n_values:
        outs = _replications(config, n)
        risks = {k: np.array([o["risks"][k] for o in outs]) for k in ESTIMATORS}
        for k in ESTIMATORS:
            mean, se = _mean_se(risks[k])
            rows.append(RiskRow(n, k, mean, se))
        diff_mean, diff_se = _mean_se(risks[IMPROVED_FIXED] - risks[LSE_FIXED])
        c_vals = [o["fixed_c_n"] for o in outs if o["fixed_c_n"] is not None]
        sig = np.array([o["sigma_hat"] for o in outs])
        diagnostics[n] = {
            "replications": len(outs),
            "sigma_hat_mean": float(np.mean(sig)),
            "sigma_hat_mean_abs_error": float(np.mean(np.abs(sig - sigma_q(config.noise)))),
            "improved_shrunk_fraction": float(np.mean([o["improved_shrunk"] for o in outs])),
            "fixed_shrunk_fraction": len(c_vals) / len(outs),
            "fixed_c_n_sq_mean": float(np.mean(np.square(c_vals))) if c_vals else None,
            "fixed_risk_difference_mean": diff_mean,
            "fixed_risk_difference_stderr": diff_se,
            "lse_prefix_d_max": int(max(o["lse_d"] for o in outs)),
            "lse_omega_mean": float(np.mean([o["lse_omega"] for o in outs])),
            "grid_size": len(_grid(n, config.bounds.sigma_upper, config.grid_preset)),
        }
    return RiskReport(rows, diagnostics)
