"""
kernel_mi - kernel mutual information estimators and a three-variable independence test
"""
from .estimators import MIConfig, SMIConfig, estimate, estimate_mi, estimate_smi
from .independence import ScoreSet, Verdict, scores, verdict
from .kernels import GaussianKernel, QuantumKernel, gram

__version__ = "0.1.0"

__all__ = [
    "GaussianKernel",
    "QuantumKernel",
    "gram",
    "MIConfig",
    "SMIConfig",
    "estimate",
    "estimate_mi",
    "estimate_smi",
    "ScoreSet",
    "Verdict",
    "scores",
    "verdict",
]
