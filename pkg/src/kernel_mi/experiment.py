"""
Experiment Orchestrator

Runs seeded independence-test trials per grid cell and aggregates them into
correct ratios and slack statistics.
"""
import logging
import time
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from .config import CellConfig, ExperimentConfig
from .datagen import DistributionSpec, ModelSpec, derive_seed, generate_scenario
from .estimators import clamp_for_report
from .exceptions import KernelMIError, TrialError
from .independence import ScoreSet, Verdict, scores, verdict

logger = logging.getLogger(__name__)


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    scores: ScoreSet
    verdict: Verdict
    wall_time: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        record = {
            "trial_index": self.trial_index,
            "seed": self.seed,
            "success": self.verdict.success,
            "slack": self.verdict.slack,
            "wall_time": self.wall_time,
        }
        record.update(self.scores.as_dict())
        for k, value in enumerate(self.scores.gram_offdiag, start=1):
            record[f"gram_offdiag_x{k}"] = value
        return record


@dataclass
class CellResult:
    cell: CellConfig
    correct_ratio: float
    slack_mean: float
    slack_std: float
    records: List[TrialRecord] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.records)

    def mean_scores(self) -> Dict[str, float]:
        """Mean S-scores with tiny negative pairwise values clamped to zero"""
        sums = {"mean_s1": 0.0, "mean_s2": 0.0, "mean_s3": 0.0}
        for rec in self.records:
            pw = {k: clamp_for_report(v) for k, v in rec.scores.pairwise.items()}
            sums["mean_s1"] += pw[(1, 2)] + pw[(1, 3)]
            sums["mean_s2"] += pw[(1, 2)] + pw[(2, 3)]
            sums["mean_s3"] += pw[(1, 3)] + pw[(2, 3)]
        return {k: v / max(len(self.records), 1) for k, v in sums.items()}


@dataclass
class ExperimentReport:
    name: str
    config: Dict[str, Any]
    cells: List[CellResult]
    started_at: Optional[datetime] = None
    duration_seconds: float = 0.0


def trial_seed(cell: CellConfig, trial_index: int) -> int:
    """
    Seed of one trial from the base seed, the scenario coordinates and the index.

    Kernel and criterion are left out so every kernel variant of a sweep sees
    the same scenarios.
    """
    return derive_seed(
        cell.seed, cell.distribution, cell.variance, cell.model, cell.coef,
        cell.samples, int(cell.noise_gaussian), trial_index,
    )


def run_trial(cell: CellConfig, trial_index: int) -> TrialRecord:
    """One seeded scenario, its scores and verdict"""
    seed = trial_seed(cell, trial_index)
    start = time.perf_counter()
    try:
        sample = generate_scenario(
            DistributionSpec(cell.distribution, cell.variance),
            ModelSpec(cell.model, cell.coef),
            cell.samples,
            seed,
            noise_gaussian=cell.noise_gaussian,
        )
        score_set = scores(sample, cell.kernel.to_spec(), cell.estimator.to_estimator_config())
        result = verdict(score_set, target=cell.target)
    except KernelMIError as e:
        raise TrialError(trial_index, cell.coordinates(), e) from e

    return TrialRecord(
        trial_index=trial_index,
        seed=seed,
        scores=score_set,
        verdict=result,
        wall_time=time.perf_counter() - start,
    )


def aggregate(cell: CellConfig, records: List[TrialRecord]) -> CellResult:
    """Correct ratio (%) and slack mean / population std over all trials"""
    records = sorted(records, key=lambda r: r.trial_index)
    slacks = np.array([r.verdict.slack for r in records], dtype=float)
    successes = sum(1 for r in records if r.verdict.success)
    return CellResult(
        cell=cell,
        correct_ratio=100.0 * successes / len(records),
        slack_mean=float(np.mean(slacks)),
        slack_std=float(np.std(slacks)),
        records=records,
    )


def run_cell(cell: CellConfig, workers: int = 1, progress: bool = False) -> CellResult:
    """
    Run all trials of a cell

    Args:
        cell: Grid point with trial count and base seed
        workers: joblib n_jobs; results do not depend on it
        progress: Show a tqdm bar over trials

    Raises:
        TrialError: first failing trial, with its index and the cell coordinates
    """
    indices = range(cell.trials)
    if progress:
        indices = tqdm(indices, desc=_cell_label(cell), leave=False)

    if workers == 1:
        records = [run_trial(cell, i) for i in indices]
    else:
        records = Parallel(n_jobs=workers)(delayed(run_trial)(cell, i) for i in indices)

    result = aggregate(cell, records)
    logger.info(
        f"{_cell_label(cell)}: correct {result.correct_ratio:.0f}% "
        f"slack {result.slack_mean:.4g} +/- {result.slack_std:.4g}"
    )
    return result


def run_sweep(config: ExperimentConfig, where: Optional[Dict[str, Any]] = None,
              progress: bool = False) -> ExperimentReport:
    """
    Run every cell of the configured grid

    Returns:
        ExperimentReport with the config echo and one CellResult per cell
    """
    started_at = datetime.now()
    cells = config.cells(where)
    logger.info(f"Starting sweep '{config.name}': {len(cells)} cells x {config.trials} trials")

    results = []
    for i, cell in enumerate(cells, start=1):
        logger.debug(f"Cell {i}/{len(cells)}: {cell.coordinates()}")
        results.append(run_cell(cell, workers=config.workers, progress=progress))

    duration = (datetime.now() - started_at).total_seconds()
    logger.info(f"Sweep '{config.name}' finished in {duration:.2f} seconds")
    return ExperimentReport(
        name=config.name,
        config=config.echo(),
        cells=results,
        started_at=started_at,
        duration_seconds=duration,
    )


def _cell_label(cell: CellConfig) -> str:
    return (
        f"{cell.distribution} v={cell.variance:g} {cell.model} c={cell.coef:g} "
        f"N={cell.samples} {cell.kernel_label} {cell.estimator.criterion}"
    )
