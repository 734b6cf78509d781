"""Configuration-driven experiment runner.

Commands:

    qvplab run <config>                  execute one experiment, write artifacts
    qvplab selftest                      run the full acceptance suite
    qvplab emit-density <config> --n N   export one coordinate density as CSV
    qvplab version                       print the engine version

Configs are flat key/value files with section headers (INI syntax), parsed
strictly: unknown sections or keys are errors, as are missing required
fields.  Exit codes: 0 all tolerances pass, 1 tolerance failure, 2 config
error, 3 numerical-guard breach (boundary mass).

Angle-valued fields (theta, lambda, theta_values) accept either a plain
float or a "<x>pi" suffix form, e.g. ``theta = 2.23pi``.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__, acceptance, analysis, generators, hilbert, qvp
from .experiments import (EXPERIMENTS, SUMMARY_COLUMNS, ExperimentConfig,
                          ExperimentOutcome, run_experiment)

PI = math.pi

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "experiment": {"name"},
    "grid": {"dim", "extent"},
    "physics": {"sigma", "lambda", "theta", "scale", "n_values",
                "theta_values", "dw_min", "seed_width"},
    "analysis": {"kernel_width", "position_tol", "variance_tol", "match_min",
                 "fidelity_min", "lobe_fidelity_min", "amp_tol",
                 "scan_low", "scan_high"},
    "output": {"directory", "formats"},
}


def _parse_angle(raw: str, field: str) -> float:
    raw = raw.strip().lower()
    try:
        if raw.endswith("pi"):
            return float(raw[:-2]) * PI
        return float(raw)
    except ValueError:
        raise ConfigError(f"field '{field}': cannot parse angle value {raw!r}")


def _parse_float(raw: str, field: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"field '{field}': cannot parse float {raw!r}")


def _parse_int_list(raw: str, field: str) -> list[int]:
    try:
        values = [int(tok.strip()) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"field '{field}': cannot parse integer list {raw!r}")
    if not values:
        raise ConfigError(f"field '{field}': list is empty")
    return values


def parse_config(path: str | Path) -> ExperimentConfig:
    """Strictly parse and validate an experiment configuration file."""
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")

    def get(section, key, default=None):
        if parser.has_option(section, key):
            return parser.get(section, key)
        return default

    name = get("experiment", "name")
    if name is None:
        raise ConfigError("missing required field 'name' in section [experiment]")
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {EXPERIMENTS}")

    sigma_raw = get("physics", "sigma")
    if sigma_raw is None:
        raise ConfigError("missing required field 'sigma' in section [physics]")
    sigma = _parse_float(sigma_raw, "sigma")
    if not sigma > 0:
        raise ConfigError("field 'sigma': must be positive")

    lam_raw = get("physics", "lambda")
    theta_raw = get("physics", "theta")
    scale_raw = get("physics", "scale")
    lam = theta = scale = None
    if name == "commuting-limit":
        if lam_raw is not None or theta_raw is not None:
            raise ConfigError("commuting-limit takes 'scale', not lambda/theta")
        scale = _parse_float(scale_raw, "scale") if scale_raw is not None else 1.0
    else:
        if (lam_raw is None) == (theta_raw is None):
            raise ConfigError(
                "exactly one of 'lambda'/'theta' must be given in [physics]")
        if lam_raw is not None:
            lam = _parse_angle(lam_raw, "lambda")
            theta = sigma * sigma * lam
        else:
            theta = _parse_angle(theta_raw, "theta")
            lam = theta / (sigma * sigma)

    n_values_raw = get("physics", "n_values")
    n_values = (_parse_int_list(n_values_raw, "n_values")
                if n_values_raw is not None else [])
    needs_n = name not in ("schrodinger-check",)
    if needs_n and not n_values:
        raise ConfigError("missing required field 'n_values' in section [physics]")

    theta_values = []
    tv_raw = get("physics", "theta_values")
    if tv_raw is not None:
        theta_values = [_parse_angle(tok.strip(), "theta_values")
                        for tok in tv_raw.split(",") if tok.strip()]
    if name == "theta-scan" and not theta_values:
        raise ConfigError("theta-scan requires 'theta_values' in section [physics]")

    dw_min = None
    dw_raw = get("physics", "dw_min")
    if dw_raw is not None:
        dw_min = _parse_float(dw_raw, "dw_min")
        policy = qvp.resolution_threshold(sigma, dw_min)
        bad = [n for n in n_values if n < policy.n_min]
        if bad:
            raise ConfigError(
                f"n_values {bad} violate the resolution policy (n_min={policy.n_min})")

    seed_width = None
    sw_raw = get("physics", "seed_width")
    if sw_raw is not None and sw_raw.strip().lower() != "auto":
        seed_width = _parse_float(sw_raw, "seed_width")

    dim = extent = None
    if parser.has_section("grid"):
        dim_raw, extent_raw = get("grid", "dim"), get("grid", "extent")
        if (dim_raw is None) != (extent_raw is None):
            raise ConfigError("section [grid] needs both 'dim' and 'extent'")
        if dim_raw is not None:
            try:
                dim = int(dim_raw)
            except ValueError:
                raise ConfigError(f"field 'dim': cannot parse integer {dim_raw!r}")
            extent = _parse_float(extent_raw, "extent")

    kernel_width = None
    kw_raw = get("analysis", "kernel_width")
    if kw_raw is not None and kw_raw.strip().lower() != "auto":
        kernel_width = _parse_float(kw_raw, "kernel_width")

    def tol(key, default):
        raw = get("analysis", key)
        return _parse_float(raw, key) if raw is not None else default

    directory = get("output", "directory", "out")
    formats_raw = get("output", "formats", "csv, json")
    formats = tuple(tok.strip() for tok in formats_raw.split(",") if tok.strip())
    for fmt in formats:
        if fmt not in ("csv", "json"):
            raise ConfigError(f"field 'formats': unknown format {fmt!r}")

    return ExperimentConfig(
        experiment=name, sigma=sigma, lam=lam, theta=theta, scale=scale,
        n_values=n_values, theta_values=theta_values, dw_min=dw_min,
        seed_width=seed_width, dim=dim, extent=extent,
        kernel_width=kernel_width,
        position_tol=tol("position_tol", 0.05),
        variance_tol=tol("variance_tol", 0.20),
        match_min=tol("match_min", 0.90),
        fidelity_min=tol("fidelity_min", 0.999),
        lobe_fidelity_min=tol("lobe_fidelity_min", 0.95),
        amp_tol=tol("amp_tol", 1e-8),
        scan_low=tol("scan_low", 0.8),
        scan_high=tol("scan_high", 1.2),
        directory=directory, formats=formats)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _digest(experiment: str, rows: list[dict]) -> str:
    payload = experiment + "\n" + "\n".join(
        ",".join(_fmt(row[c]) for c in SUMMARY_COLUMNS) for row in rows)
    return hashlib.sha256(payload.encode()).hexdigest()


def _output_dir(cfg: ExperimentConfig) -> Path:
    root = os.environ.get("QVPLAB_OUTPUT_ROOT", "")
    out = Path(root) / cfg.directory if root else Path(cfg.directory)
    if out.exists() and any(out.iterdir()):
        raise ConfigError(f"output directory {out} exists and is not empty")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_artifacts(cfg: ExperimentConfig, outcome: ExperimentOutcome,
                     out: Path) -> str:
    digest = _digest(cfg.experiment, outcome.rows)
    if "csv" in cfg.formats:
        with open(out / "summary.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_COLUMNS)
            for row in outcome.rows:
                writer.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])
    if "json" in cfg.formats:
        report = {
            "engine_version": __version__,
            "experiment": cfg.experiment,
            "config": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in vars(cfg).items()},
            "rows": outcome.rows,
            "passed": outcome.passed,
            "failures": outcome.failures,
            "timings_s": outcome.timings,
            "digest": digest,
        }
        with open(out / "report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return digest


def cmd_run(config_path: str) -> int:
    try:
        cfg = parse_config(config_path)
        out = _output_dir(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        outcome = run_experiment(cfg)
    except hilbert.BoundaryError as exc:
        print(f"numerical guard breach: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    digest = _write_artifacts(cfg, outcome, out)
    status = "PASS" if outcome.passed else "FAIL"
    print(f"{cfg.experiment}: {status} ({len(outcome.rows)} rows, digest {digest[:12]})")
    for failure in outcome.failures:
        print(f"  tolerance failure: {failure}", file=sys.stderr)
    return EXIT_OK if outcome.passed else EXIT_TOLERANCE


def cmd_selftest() -> int:
    t0 = time.time()
    results = acceptance.run_all()
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} criteria passed "
          f"in {time.time() - t0:.1f}s")
    return EXIT_OK if not failed else EXIT_TOLERANCE


def cmd_emit_density(config_path: str, n: int) -> int:
    try:
        cfg = parse_config(config_path)
        out = _output_dir(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if cfg.experiment == "commuting-limit":
            dim = cfg.dim if cfg.dim is not None else 4096
            extent = cfg.extent if cfg.extent is not None else 64.0
            space = hilbert.make_grid(dim, extent)
            pair = generators.build_commuting(space, cfg.scale or 1.0)
            params = qvp.qvp_params(pair, n, cfg.sigma)
            seed = qvp.default_seed(pair, params)
            cond = qvp.build_qvp(pair, params, seed)
            axis, label = space.coordinates, "w"
        else:
            if cfg.dim is not None and cfg.extent is not None:
                space = hilbert.make_grid(cfg.dim, cfg.extent)
            else:
                space = qvp.suggest_weyl_grid(n, cfg.theta, cfg.sigma)
            pair = generators.build_weyl_pair(space, cfg.lam)
            params = qvp.qvp_params(pair, n, cfg.sigma)
            seed = (hilbert.gaussian_state(space, 0.0, cfg.seed_width)
                    if cfg.seed_width else qvp.default_seed(pair, params))
            cond = qvp.build_qvp(pair, params, seed)
            axis, label = space.coordinates / pair.scale, "t"
    except hilbert.BoundaryError as exc:
        print(f"numerical guard breach: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    path = out / f"density_N{n}.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([label, "probability"])
        for x, rho in zip(axis, cond.state.density()):
            writer.writerow([_fmt(float(x)), _fmt(float(rho))])
    print(f"wrote {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="qvplab",
                                     description="virtual-path state laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one configured experiment")
    p_run.add_argument("config")
    sub.add_parser("selftest", help="run the acceptance suite")
    p_den = sub.add_parser("emit-density", help="export one density as CSV")
    p_den.add_argument("config")
    p_den.add_argument("--n", type=int, required=True)
    sub.add_parser("version", help="print the engine version")
    args = parser.parse_args(argv)

    if args.command == "run":
        return cmd_run(args.config)
    if args.command == "selftest":
        return cmd_selftest()
    if args.command == "emit-density":
        return cmd_emit_density(args.config, args.n)
    print(__version__)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
