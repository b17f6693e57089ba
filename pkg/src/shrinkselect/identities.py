"""Monte Carlo checks of the second-moment identities of the OU-Levy noise.

All stochastic checks share one batch of noise paths and use 4-standard-error
bands. ``tau_t(f, g)`` is computed by deterministic nested trapezoid quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .basis import estimate_coefficients, phi_star_integral, trig
from .config import ExperimentConfig
from .noise import NoiseParams, sigma_q, simulate_ou_levy
from .observation import ObservationRecord
from .rng import generator

BAND = 4.0
VARIANCE_TIMES = (1.0, 5.0, 20.0)
COVARIANCE_TIME = 5.0
COVARIANCE_PAIRS = ((2, 2), (2, 3), (1, 2))
STEP_HORIZON = 5
PROXY_HORIZON = 200
PROXY_INDICES = (2, 5, 10)
KERNEL_DIMS = (7, 10, 50, 100)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    target: float
    stderr: float
    slack: float
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"{tag} {self.name}: measured={self.measured:.6g} target={self.target:.6g} "
            f"stderr={self.stderr:.3g} slack={self.slack:.3g}" + (f" ({self.detail})" if self.detail else "")
        )


@dataclass
class ValidationReport:
    checks: list

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        return "\n".join(c.line() for c in self.checks) + "\n"

    def to_json(self) -> str:
        return json.dumps({"all_passed": self.all_passed, "checks": [asdict(c) for c in self.checks]}, indent=2) + "\n"


def ou_second_moment(params: NoiseParams, t: float) -> float:
    """``E xi_t^2 = sigma_Q (e^{2at} - 1) / (2a)``, or ``sigma_Q t`` when ``a = 0``."""
    a = params.a
    if a == 0:
        return sigma_q(params) * t
    return sigma_q(params) * math.expm1(2 * a * t) / (2 * a)


def _correction(a: float, s: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``a int_0^s e^{a(s-u)} f(u) (1 + e^{2au}) / 2 du`` at every node of ``s``."""
    inner = cumulative_trapezoid(np.exp(-a * s) * f * (1 + np.exp(2 * a * s)) / 2, s, initial=0.0)
    return a * np.exp(a * s) * inner


def tau(a: float, f, g, t: float, points_per_unit: int = 1000) -> float:
    """``int_0^t (f g + corr(f) g + f corr(g)) ds`` by trapezoid quadrature."""
    s = np.linspace(0.0, t, int(round(t * points_per_unit)) + 1)
    fs, gs = f(s), g(s)
    integrand = fs * gs + _correction(a, s, fs) * gs + fs * _correction(a, s, gs)
    return float(np.trapezoid(integrand, s))


def _band(name, samples, target, detail=""):
    mean = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(samples.size))
    slack = BAND * se - abs(mean - target)
    return CheckResult(name, slack >= 0, mean, target, se, slack, detail)


def _upper(name, samples, bound, detail=""):
    mean = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(samples.size))
    slack = bound + BAND * se - mean
    return CheckResult(name, slack >= 0, mean, bound, se, slack, detail)


def step_function(seed) -> tuple:
    """Random cadlag step function on ``[0, STEP_HORIZON)`` with half-unit steps."""
    levels = generator(seed, 99).uniform(-1.5, 1.5, size=2 * STEP_HORIZON)

    def f(t):
        idx = np.clip((np.asarray(t) * 2).astype(int), 0, levels.size - 1)
        return levels[idx]

    return f, float(np.sum(levels**2) * 0.5)


def validate_identities(
    config: ExperimentConfig,
    replications: int = 1000,
    steps_per_unit: int | None = None,
) -> ValidationReport:
    params = config.noise
    m = config.steps_per_unit if steps_per_unit is None else steps_per_unit
    horizon = PROXY_HORIZON
    sq = sigma_q(params)
    a = params.a

    grid = np.arange(horizon * m) / m
    cov_nodes = int(COVARIANCE_TIME * m)
    fvals = {j: trig(j, grid[:cov_nodes]) for j in {j for p in COVARIANCE_PAIRS for j in p}}
    step_f, step_l2 = step_function(config.root_seed)
    step_vals = step_f(grid[: STEP_HORIZON * m])

    xi_at = np.empty((replications, len(VARIANCE_TIMES)))
    products = np.empty((replications, len(COVARIANCE_PAIRS)))
    step_sq = np.empty(replications)
    proxy_sq = np.empty((replications, len(PROXY_INDICES)))
    for r in range(replications):
        path = simulate_ou_levy(params, horizon, m, (config.root_seed, 7, r))
        xi_at[r] = path.xi[[int(t * m) for t in VARIANCE_TIMES]]
        dxi = np.diff(path.xi)
        ints = {j: fv @ dxi[:cov_nodes] for j, fv in fvals.items()}
        products[r] = [ints[i] * ints[j] for i, j in COVARIANCE_PAIRS]
        step_sq[r] = (step_vals @ dxi[: STEP_HORIZON * m]) ** 2
        # signal is zero, so sqrt(n) theta_hat_j is the normalised noise coefficient
        est = estimate_coefficients(ObservationRecord(horizon, m, dxi), max(PROXY_INDICES))
        proxy_sq[r] = horizon * est.theta_hat[np.array(PROXY_INDICES) - 1] ** 2

    checks = []
    for k, t in enumerate(VARIANCE_TIMES):
        checks.append(_band(f"ou_variance_t{t:g}", xi_at[:, k] ** 2, ou_second_moment(params, t)))
    for k, (i, j) in enumerate(COVARIANCE_PAIRS):
        target = sq * tau(a, lambda s, i=i: trig(i, s), lambda s, j=j: trig(j, s), COVARIANCE_TIME)
        checks.append(_band(f"covariance_Tr{i}_Tr{j}_t{COVARIANCE_TIME:g}", products[:, k], target))
    checks.append(
        _upper("integral_second_moment_bound", step_sq, 2 * sq * step_l2, f"step function on [0, {STEP_HORIZON}]")
    )
    factor = 4 * a * a + 15 * abs(a) + 2
    for k, j in enumerate(PROXY_INDICES):
        mean = float(np.mean(proxy_sq[:, k]))
        se = float(np.std(proxy_sq[:, k], ddof=1) / math.sqrt(replications))
        bound = sq * factor / j**2
        slack = bound + BAND * se - abs(mean - sq)
        checks.append(
            CheckResult(f"proxy_variance_j{j}_n{horizon}", slack >= 0, mean, sq, se, slack, f"allowed |dev| {bound:.4g}")
        )
    for d in KERNEL_DIMS:
        value = phi_star_integral(d)
        bound = 5 + math.log(d)
        checks.append(CheckResult(f"phi_star_integral_d{d}", value <= bound, value, bound, 0.0, bound - value))
    return ValidationReport(checks)
