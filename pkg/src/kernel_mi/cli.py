"""
kernel_mi command line

Subcommands:
    estimate    MI/SMI between two columns of a CSV file
    test        one seeded scenario -> verdict JSON
    experiment  flat key/value experiment file -> reports
    sweep       grid given directly as comma-separated flags -> reports
"""
import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from .config import GRID_KEYS, SCALAR_KEYS, ConfigManager, ExperimentConfig, load_flat_config
from .datagen import DistributionSpec, ModelSpec, describe_scenario, generate_scenario
from .estimators import estimate
from .exceptions import (CapacityError, ConditioningError, ConfigurationError, KernelMIError,
                         ParameterError, ReportWriteError, ShapeError, TrialError)
from .experiment import run_sweep
from .independence import scores, verdict
from .kernels import gram
from .report import FORMATS, emit_report, summary_frame
from .utils import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

FLAT_KEYS = GRID_KEYS + SCALAR_KEYS


def _kernel_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("kernel")
    group.add_argument("--kernel", help="gaussian | quantum (comma list in sweeps)")
    group.add_argument("--sigma", type=float, help="Gaussian kernel width")
    group.add_argument("--qubits", type=int, help="Qubits of the IQP encoding circuit")
    group.add_argument("--depth", type=int, help="Number of diagonal layers D")
    group.add_argument("--angle-scale", dest="angle_scale", type=float, help="Angle multiplier")
    group.add_argument("--activation", help="tanh-shrink | none (comma list in sweeps)")
    group.add_argument("--angle-policy", dest="angle_policy", help="uniform | layer-scaled")


def _estimator_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("estimator")
    group.add_argument("--criterion", help="mi | smi (comma list in sweeps)")
    group.add_argument("--kappa", type=float, help="MI regularizer")
    group.add_argument("--epsilon", type=float, help="SMI regularizer (value or decay scale)")
    group.add_argument("--epsilon-policy", dest="epsilon_policy", help="constant | decay")


def _scenario_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("scenario")
    group.add_argument("--distribution", help="gaussian | poisson | laplace")
    group.add_argument("--variance", help="Variance v of P(v)")
    group.add_argument("--model", help="linear | poly | periodic")
    group.add_argument("--coef", help="Model coefficient c")
    group.add_argument("--samples", help="Sample size N")
    group.add_argument("--seed", type=int, help="Base seed")
    group.add_argument("--noise-gaussian", dest="noise_gaussian", action="store_const", const=True,
                       default=None, help="Draw the noise e from N(0, 1) instead of P(v)")
    group.add_argument("--target", type=int, help="Variable expected to be independent (1-3)")


def _run_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("run")
    group.add_argument("--trials", type=int, help="Trials T per cell")
    group.add_argument("--workers", type=int, help="Parallel trial workers")
    group.add_argument("--out", help="Output directory")
    group.add_argument("--name", help="Report file prefix")
    group.add_argument("--only", action="append", default=[], metavar="KEY=VALUE",
                       help="Keep only cells whose coordinate matches (repeatable)")
    group.add_argument("--format", nargs="+", choices=FORMATS, default=list(FORMATS),
                       help="Report formats to write")
    group.add_argument("--progress", action="store_true", help="Show per-cell progress bars")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kernel_mi",
        description="Mutual information estimation and independence tests with classical and quantum kernels.",
    )
    parser.add_argument("--config", help="Defaults YAML (default: config/experiment_config.yaml)")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ...")
    parser.add_argument("--log-dir", dest="log_dir", help="Also log to a file in this folder")
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="Estimate MI/SMI between two CSV columns")
    p_est.add_argument("input", help="CSV file with a header row")
    p_est.add_argument("--columns", nargs=2, metavar=("X", "Y"), help="Columns to use (default: first two)")
    _kernel_flags(p_est)
    _estimator_flags(p_est)

    p_test = sub.add_parser("test", help="Run the independence test on one scenario")
    _kernel_flags(p_test)
    _estimator_flags(p_test)
    _scenario_flags(p_test)
    p_test.add_argument("--out", dest="verdict_path", help="Also write the verdict JSON to this file")
    p_test.add_argument("--dump-sample", dest="dump_sample", help="Write the scenario to this CSV file")

    p_exp = sub.add_parser("experiment", help="Run an experiment file")
    p_exp.add_argument("config_file", help="Flat key/value experiment file")
    _kernel_flags(p_exp)
    _estimator_flags(p_exp)
    _scenario_flags(p_exp)
    _run_flags(p_exp)

    p_sweep = sub.add_parser("sweep", help="Run a grid given by flags")
    _kernel_flags(p_sweep)
    _estimator_flags(p_sweep)
    _scenario_flags(p_sweep)
    _run_flags(p_sweep)

    return parser


def _flat_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: getattr(args, k) for k in FLAT_KEYS if getattr(args, k, None) is not None}


def _parse_where(items: List[str]) -> Optional[Dict[str, str]]:
    where = {}
    for item in items:
        if "=" not in item:
            raise ConfigurationError(f"--only expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        where[key.strip()] = value.strip()
    return where or None


def _single_cell(base: ExperimentConfig, args: argparse.Namespace):
    """The one cell described by flags for `estimate` and `test`; default grids collapse to their first value"""
    grids = ("distributions", "variances", "models", "coefs", "samples", "kernels", "activations", "criteria")
    base = replace(base, **{name: getattr(base, name)[:1] for name in grids})
    config = base.with_overrides(_flat_overrides(args))
    for name in grids:
        if len(getattr(config, name)) != 1:
            raise ConfigurationError(f"'{name}' takes a single value for this command")
    return config.cells()[0]


def _read_columns(path: str, columns: Optional[List[str]]):
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigurationError(f"Could not read {path}: {e}") from e

    if columns is None:
        if frame.shape[1] < 2:
            raise ConfigurationError(f"{path} needs at least two columns")
        columns = list(frame.columns[:2])
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ConfigurationError(f"Columns not found in {path}: {missing}")

    values = frame[columns].apply(pd.to_numeric, errors="coerce")
    if values.isna().any().any():
        raise ConfigurationError(f"Columns {columns} in {path} contain missing or non-numeric values")
    return values[columns[0]].to_numpy(dtype=float), values[columns[1]].to_numpy(dtype=float), columns


def cmd_estimate(args, base: ExperimentConfig) -> int:
    cell = _single_cell(base, args)
    x, y, columns = _read_columns(args.input, args.columns)
    kernel = cell.kernel.to_spec()
    value = estimate(gram(kernel, x), gram(kernel, y), cell.estimator.to_estimator_config())
    print(json.dumps({
        "columns": columns,
        "n": len(x),
        "criterion": cell.estimator.criterion,
        "kernel": kernel.describe(),
        "value": value,
    }, indent=2))
    return EXIT_OK


def cmd_test(args, base: ExperimentConfig) -> int:
    cell = _single_cell(base, args)
    sample = generate_scenario(
        DistributionSpec(cell.distribution, cell.variance),
        ModelSpec(cell.model, cell.coef),
        cell.samples,
        cell.seed,
        noise_gaussian=cell.noise_gaussian,
    )
    kernel = cell.kernel.to_spec()
    result = verdict(scores(sample, kernel, cell.estimator.to_estimator_config()), target=cell.target)

    body = {
        "scenario": describe_scenario(sample.meta),
        "samples": sample.n,
        "seed": cell.seed,
        "kernel": kernel.describe(),
        "estimator": vars(cell.estimator),
        "target": result.target,
        "success": result.success,
        "slack": result.slack,
        "scores": result.scores.as_dict(),
    }
    text = json.dumps(body, indent=2)
    print(text)

    if args.verdict_path:
        path = Path(args.verdict_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text + "\n")
        except OSError as e:
            raise ReportWriteError(path, e) from e
    if args.dump_sample:
        try:
            sample.to_frame().to_csv(args.dump_sample, index=False)
        except OSError as e:
            raise ReportWriteError(args.dump_sample, e) from e
    return EXIT_OK


def _run_and_emit(config: ExperimentConfig, args) -> int:
    report = run_sweep(config, where=_parse_where(args.only), progress=args.progress)
    written = emit_report(report, config.output_dir, formats=args.format)

    print("=" * 60)
    print(f"EXPERIMENT '{report.name}' - {len(report.cells)} cells, {config.trials} trials each")
    print("=" * 60)
    with pd.option_context("display.width", 160, "display.max_columns", None):
        print(summary_frame(report).drop(columns=["mean_s1", "mean_s2", "mean_s3"]).to_string(index=False))
    for fmt, path in written.items():
        print(f"  {fmt}: {path}")
    return EXIT_OK


def cmd_experiment(args, base: ExperimentConfig) -> int:
    flat = load_flat_config(args.config_file)
    if "name" not in flat:
        flat["name"] = Path(args.config_file).stem
    config = base.with_overrides(flat).with_overrides(_flat_overrides(args))
    return _run_and_emit(config, args)


def cmd_sweep(args, base: ExperimentConfig) -> int:
    config = base.with_overrides(_flat_overrides(args))
    if args.name is None:
        config = config.with_overrides({"name": "sweep"})
    return _run_and_emit(config, args)


COMMANDS = {
    "estimate": cmd_estimate,
    "test": cmd_test,
    "experiment": cmd_experiment,
    "sweep": cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        manager = ConfigManager(args.config)
        setup_logging(args.log_level or manager.logging_level, args.log_dir)
        return COMMANDS[args.command](args, manager.experiment)

    except ConditioningError as e:
        logger.error(f"Numerical error: {e}")
        return EXIT_NUMERICAL
    except TrialError as e:
        logger.error(str(e))
        if isinstance(e.cause, (ConditioningError, np.linalg.LinAlgError)):
            return EXIT_NUMERICAL
        return EXIT_CONFIG
    except (ConfigurationError, ParameterError, ShapeError, CapacityError, ReportWriteError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_CONFIG
    except KernelMIError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
