"""Command-line front end.

    shrinkselect simulate  [--n N]          noise + observation path -> path.csv
    shrinkselect estimate  [--input FILE]   selection on a path file -> estimate.csv, selection.json
    shrinkselect benchmark [--full-scale]   risk tables -> risks.csv, tables.tsv, report.json
    shrinkselect validate  [--replications] identity checks -> validation.txt, validation.json
    shrinkselect pinsker   --k K --r R      print the Pinsker constant

Every command accepts ``--config FILE``, repeated ``--set key=value``,
``--seed INT`` and ``--out DIR``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .basis import estimate_coefficients, reconstruct
from .config import ConfigError, ExperimentConfig, dump_config, parse_config
from .identities import validate_identities
from .io import atomic_write_text
from .montecarlo import pinsker_constant, run_experiment
from .noise import sigma_q, simulate_ou_levy
from .observation import TEST_SIGNAL, Signal, generate_observations, read_observations_csv, write_observations_csv
from .selection import ShrinkageConfig, default_rho, grid_preset, proxy_variance, select_coefficients

log = logging.getLogger("shrinkselect")


def emit_plot_data(truth: Signal, estimates: dict, path, t) -> None:
    """CSV with columns ``t,truth,<name>...``; every estimate is sampled at ``t``."""
    t = np.asarray(t, dtype=float)
    cols = [t, truth(t)]
    for name, samples in estimates.items():
        samples = np.asarray(samples, dtype=float)
        if samples.shape != t.shape:
            raise ValueError(f"estimate {name!r} is not sampled on the common grid")
        cols.append(samples)
    header = ",".join(["t", "truth", *estimates])
    body = [",".join(repr(float(v)) for v in row) for row in zip(*cols)]
    atomic_write_text(path, "\n".join([header, *body]) + "\n")


def _load(args) -> ExperimentConfig:
    overrides = list(args.set or [])
    if args.seed is not None:
        overrides.append(f"root_seed={args.seed}")
    cfg = parse_config(args.config, overrides)
    if getattr(args, "full_scale", False):
        cfg = cfg.full_scale()
    return cfg


def cmd_simulate(args) -> int:
    cfg = _load(args)
    n = args.n or cfg.n_values[0]
    path = simulate_ou_levy(cfg.noise, n, cfg.steps_per_unit, (cfg.root_seed, n, 0))
    obs = generate_observations(TEST_SIGNAL, path)
    out = Path(args.out)
    write_observations_csv(obs, out / "path.csv")
    meta = {"n": n, "steps_per_unit": cfg.steps_per_unit, "seed": cfg.root_seed, "signal": TEST_SIGNAL.description}
    atomic_write_text(out / "path.json", json.dumps(meta, indent=2) + "\n")
    print(f"wrote {out / 'path.csv'} (n={n}, M={cfg.steps_per_unit})")
    return 0


def estimate_record(obs, cfg: ExperimentConfig, eval_points: int):
    """Improved and LSE selections on one record; returns ``(samples, diagnostics)``."""
    n = obs.horizon_n
    grid = grid_preset(n, cfg.bounds.sigma_upper, cfg.grid_preset)
    rho = default_rho(n) if cfg.rho is None else cfg.rho
    theta_hat = estimate_coefficients(obs).theta_hat
    sigma_hat = sigma_q(cfg.noise) if cfg.known_sigma else proxy_variance(theta_hat, n)
    shrink_cfg = ShrinkageConfig(cfg.bounds.rho_lower, cfg.bounds.kappa_star, cfg.r_star)
    t = np.linspace(0.0, 1.0, eval_points)
    samples, diag = {}, {"n": n, "sigma_hat": sigma_hat, "rho": rho, "grid_size": len(grid)}
    for name, sc in (("improved", shrink_cfg), ("lse", None)):
        state = select_coefficients(theta_hat, grid, sigma_hat, rho, sc)
        samples[name] = reconstruct(state.coefficients, t)
        g = state.gamma_star
        diag[name] = {
            "index": state.index,
            "beta": g.alpha[0],
            "r": g.alpha[1],
            "omega": g.omega,
            "d": g.d,
            "cost": float(state.costs[state.index]),
            "c_n": state.c_n,
            "shrunk": state.c_n is not None,
        }
    return t, samples, diag


def cmd_estimate(args) -> int:
    cfg = _load(args)
    out = Path(args.out)
    obs = read_observations_csv(args.input or out / "path.csv")
    t, samples, diag = estimate_record(obs, cfg, cfg.eval_points)
    emit_plot_data(TEST_SIGNAL, samples, out / "estimate.csv", t)
    atomic_write_text(out / "selection.json", json.dumps(diag, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out / 'estimate.csv'} and {out / 'selection.json'}")
    return 0


def cmd_benchmark(args) -> int:
    cfg = _load(args)
    report = run_experiment(cfg)
    out = Path(args.out)
    atomic_write_text(out / "risks.csv", report.to_csv())
    atomic_write_text(out / "tables.tsv", report.ratio_table())
    atomic_write_text(out / "report.json", report.to_json())
    atomic_write_text(out / "config.json", dump_config(cfg))
    sys.stdout.write(report.ratio_table())
    return 0


def cmd_validate(args) -> int:
    cfg = _load(args)
    report = validate_identities(cfg, replications=args.replications)
    out = Path(args.out)
    atomic_write_text(out / "validation.txt", report.to_text())
    atomic_write_text(out / "validation.json", report.to_json())
    sys.stdout.write(report.to_text())
    return 0 if report.all_passed else 1


def cmd_pinsker(args) -> int:
    print(repr(pinsker_constant(args.k, args.r)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, help="root seed")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="shrinkselect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate one observation path")
    p.add_argument("--n", type=int, help="horizon; defaults to the first of n_values")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="estimate from a path file")
    p.add_argument("--input", help="path CSV with columns t,y (default OUT/path.csv)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("benchmark", parents=[common], help="reproduce the risk tables")
    p.add_argument("--full-scale", action="store_true", help="N=1000, n up to 1000, M=1000, p=100001")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("validate", parents=[common], help="check the noise moment identities")
    p.add_argument("--replications", type=int, default=1000)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pinsker", parents=[common], help="print the Pinsker constant l_k(r)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.set_defaults(func=cmd_pinsker)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
