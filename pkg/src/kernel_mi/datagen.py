"""
Synthetic scenario generation

Three-variable causal scenarios: x1 and x3 are drawn independently from P(v),
x2 = phi(x1; e) with exogenous noise e.
"""
import hashlib
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

import numpy as np
import pandas as pd

from .exceptions import ParameterError

logger = logging.getLogger(__name__)


class DistributionFamily(str, Enum):
    GAUSSIAN = "gaussian"
    POISSON = "poisson"
    LAPLACE = "laplace"


class ModelForm(str, Enum):
    LINEAR = "linear"
    POLY = "poly"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class DistributionSpec:
    family: DistributionFamily
    variance: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", DistributionFamily(self.family))
        if not np.isfinite(self.variance) or self.variance <= 0:
            raise ParameterError(f"Variance must be positive, got {self.variance}")


@dataclass(frozen=True)
class ModelSpec:
    form: ModelForm
    coef: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "form", ModelForm(self.form))


@dataclass(frozen=True)
class ScenarioMeta:
    distribution: DistributionSpec
    model: ModelSpec
    seed: int
    noise_gaussian: bool = False


@dataclass(frozen=True, eq=False)
class ScenarioSample:
    x1: np.ndarray
    x2: np.ndarray
    x3: np.ndarray
    e: np.ndarray
    meta: ScenarioMeta

    @property
    def n(self) -> int:
        return len(self.x1)

    def variables(self):
        return self.x1, self.x2, self.x3

    def to_frame(self) -> pd.DataFrame:
        """Sample as a DataFrame with columns x1, x2, x3, e"""
        return pd.DataFrame({"x1": self.x1, "x2": self.x2, "x3": self.x3, "e": self.e})


def derive_seed(base_seed: int, *parts) -> int:
    """
    Stable 64-bit seed derived from a base seed and any number of tags.

    The same inputs give the same seed on every platform and process, so
    per-trial and per-variable streams never depend on execution order.
    """
    key = "_".join(str(p) for p in (base_seed,) + parts)
    digest = hashlib.md5(key.encode()).digest()
    return int.from_bytes(digest[:8], "little")


def sample_distribution(spec: DistributionSpec, n: int, seed: int) -> np.ndarray:
    """
    Draw n i.i.d. values from P(v)

    Args:
        spec: Distribution family and variance v
        n: Number of draws
        seed: Seed for a fresh numpy Generator

    Returns:
        Float vector; Poisson draws are non-negative integers stored as floats
    """
    if n < 1:
        raise ParameterError(f"Sample count must be at least 1, got {n}")
    if spec.variance <= 0:
        raise ParameterError(f"Variance must be positive, got {spec.variance}")

    rng = np.random.default_rng(seed)
    v = float(spec.variance)

    if spec.family is DistributionFamily.GAUSSIAN:
        return np.sqrt(v) * rng.normal(size=n)
    if spec.family is DistributionFamily.POISSON:
        return rng.poisson(lam=v, size=n).astype(float)
    if spec.family is DistributionFamily.LAPLACE:
        # Var = 2 b^2
        return np.sqrt(v / 2.0) * rng.laplace(size=n)

    raise ParameterError(f"Unknown distribution family: {spec.family}")


def apply_model(model: ModelSpec, x1, e):
    """phi(x1; e) for scalars or arrays"""
    c = model.coef
    if model.form is ModelForm.LINEAR:
        return c * x1 + e
    if model.form is ModelForm.POLY:
        return c * x1 ** 2 + c * x1 + e
    if model.form is ModelForm.PERIODIC:
        return np.sin(c * x1 + e)
    raise ParameterError(f"Unknown model form: {model.form}")


def generate_scenario(dist: DistributionSpec, model: ModelSpec, n: int, seed: int,
                      noise_gaussian: bool = False) -> ScenarioSample:
    """
    Generate one seeded three-variable scenario

    x1, e and x3 come from independent substreams derived from the seed.
    With noise_gaussian the noise e is standard normal instead of P(v).
    """
    if n < 2:
        raise ParameterError(f"A scenario needs at least 2 samples, got {n}")

    x1 = sample_distribution(dist, n, derive_seed(seed, "x1"))
    x3 = sample_distribution(dist, n, derive_seed(seed, "x3"))
    if noise_gaussian:
        noise_spec = DistributionSpec(DistributionFamily.GAUSSIAN, 1.0)
    else:
        noise_spec = dist
    e = sample_distribution(noise_spec, n, derive_seed(seed, "e"))

    x2 = apply_model(model, x1, e)

    for arr in (x1, x2, x3, e):
        arr.setflags(write=False)

    meta = ScenarioMeta(distribution=dist, model=model, seed=seed, noise_gaussian=noise_gaussian)
    logger.debug(f"Generated scenario n={n} seed={seed} {dist.family.value}/{model.form.value}")
    return ScenarioSample(x1=x1, x2=x2, x3=x3, e=e, meta=meta)


def describe_scenario(meta: ScenarioMeta) -> Dict[str, Optional[float]]:
    return {
        "distribution": meta.distribution.family.value,
        "variance": meta.distribution.variance,
        "model": meta.model.form.value,
        "coef": meta.model.coef,
        "seed": meta.seed,
        "noise_gaussian": meta.noise_gaussian,
    }
