"""
Three-variable independence test

S(x_i) is the sum of pairwise estimates between x_i and the other two
variables; the test succeeds when the target has the strictly lowest score.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Tuple, Union

from . import estimators
from . import kernels
from .datagen import ScenarioSample
from .estimators import MIConfig, SMIConfig
from .exceptions import ParameterError

logger = logging.getLogger(__name__)

PAIRS = ((1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class ScoreSet:
    s1: float
    s2: float
    s3: float
    pairwise: Dict[Tuple[int, int], float] = field(default_factory=dict)
    # mean off-diagonal Gram entry per variable, when computed from data
    gram_offdiag: Tuple[float, ...] = ()

    def score(self, index: int) -> float:
        return (self.s1, self.s2, self.s3)[index - 1]

    def as_dict(self) -> Dict[str, float]:
        out = {"s1": self.s1, "s2": self.s2, "s3": self.s3}
        for (i, j), value in sorted(self.pairwise.items()):
            out[f"i{i}{j}"] = value
        return out


@dataclass(frozen=True)
class Verdict:
    success: bool
    slack: float
    scores: ScoreSet
    target: int = 3


def scores_from_pairwise(i12: float, i13: float, i23: float) -> ScoreSet:
    return ScoreSet(
        s1=i12 + i13,
        s2=i12 + i23,
        s3=i13 + i23,
        pairwise={(1, 2): i12, (1, 3): i13, (2, 3): i23},
    )


def scores(sample: ScenarioSample, kernel: kernels.KernelSpec,
           cfg: Union[MIConfig, SMIConfig]) -> ScoreSet:
    """
    Pairwise estimates and S-scores for one scenario

    One Gram per variable and one estimator call per unordered pair; the
    criterion (MI or SMI) follows the type of cfg.
    """
    grams = [kernels.gram(kernel, x) for x in sample.variables()]
    pairwise = {}
    for i, j in PAIRS:
        pairwise[(i, j)] = estimators.estimate(grams[i - 1], grams[j - 1], cfg)
    result = scores_from_pairwise(pairwise[(1, 2)], pairwise[(1, 3)], pairwise[(2, 3)])
    return replace(result, gram_offdiag=tuple(kernels.offdiag_mean(g) for g in grams))


def verdict(score_set: ScoreSet, target: int = 3) -> Verdict:
    """slack = min of the other two scores - S(target); ties fail"""
    if target not in (1, 2, 3):
        raise ParameterError(f"Target must be 1, 2 or 3, got {target}")
    others = [score_set.score(i) for i in (1, 2, 3) if i != target]
    slack = min(others) - score_set.score(target)
    return Verdict(success=slack > 0, slack=slack, scores=score_set, target=target)
