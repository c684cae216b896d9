"""
Classical and quantum kernels, and Gram matrix assembly
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Union

import numpy as np

from .circuit_sim import (AnglePolicy, CircuitConfig, encode_batch, encode_state, fidelity,
                          overlap_squared)
from .exceptions import ParameterError, ShapeError

logger = logging.getLogger(__name__)


class Activation(str, Enum):
    NONE = "none"
    TANH_SHRINK = "tanh-shrink"


def activation_apply(activation: Activation, x):
    """Identity, or tanh-shrink x - tanh(x)"""
    if Activation(activation) is Activation.TANH_SHRINK:
        return x - np.tanh(x)
    return x


@dataclass(frozen=True)
class GaussianKernel:
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ParameterError(f"Gaussian kernel width must be positive, got {self.sigma}")

    @property
    def label(self) -> str:
        return "gaussian"

    def describe(self) -> Dict[str, Any]:
        return {"kernel": "gaussian", "sigma": self.sigma}


@dataclass(frozen=True)
class QuantumKernel:
    circuit: CircuitConfig = field(default_factory=CircuitConfig)
    activation: Activation = Activation.TANH_SHRINK
    angle_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "activation", Activation(self.activation))

    @property
    def label(self) -> str:
        return f"quantum+{self.activation.value}"

    def angles(self, data) -> np.ndarray:
        """theta(z) = angle_scale * activation(z)"""
        return self.angle_scale * activation_apply(self.activation, np.asarray(data, dtype=float))

    def describe(self) -> Dict[str, Any]:
        return {
            "kernel": "quantum",
            "n_qubits": self.circuit.n_qubits,
            "depth": self.circuit.depth,
            "angle_policy": self.circuit.angle_policy.value,
            "activation": self.activation.value,
            "angle_scale": self.angle_scale,
        }


KernelSpec = Union[GaussianKernel, QuantumKernel]


def kernel_from_config(kernel_config) -> KernelSpec:
    """Build a KernelSpec from a config.KernelConfig"""
    if kernel_config.kernel == "gaussian":
        return GaussianKernel(sigma=kernel_config.sigma)
    circuit = CircuitConfig(
        n_qubits=kernel_config.qubits,
        depth=kernel_config.depth,
        angle_policy=AnglePolicy(kernel_config.angle_policy),
    )
    return QuantumKernel(
        circuit=circuit,
        activation=Activation(kernel_config.activation),
        angle_scale=kernel_config.angle_scale,
    )


def kernel_eval(spec: KernelSpec, x: float, y: float) -> float:
    """Single kernel value k(x, y) in [0, 1]"""
    if isinstance(spec, GaussianKernel):
        return float(np.exp(-((x - y) ** 2) / (2.0 * spec.sigma ** 2)))

    theta_x, theta_y = spec.angles([x, y])
    state_x = encode_state(spec.circuit, theta_x)
    state_y = encode_state(spec.circuit, theta_y)
    return fidelity(state_x, state_y)


def gram(spec: KernelSpec, data) -> np.ndarray:
    """
    N x N Gram matrix of a scalar dataset

    The quantum path encodes each point once and fills the upper triangle
    from the N(N+1)/2 overlaps, mirroring it to keep exact symmetry.

    Returns:
        Read-only symmetric matrix with unit diagonal
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 1 or len(data) < 2:
        raise ShapeError(f"Gram input must be a vector of length >= 2, got shape {data.shape}")

    if isinstance(spec, GaussianKernel):
        diff = np.subtract.outer(data, data)
        matrix = np.exp(-(diff ** 2) / (2.0 * spec.sigma ** 2))
    else:
        states = encode_batch(spec.circuit, spec.angles(data))
        n = len(data)
        matrix = np.zeros((n, n))
        for i in range(n):
            matrix[i, i:] = overlap_squared(states[i], states[i:])
        matrix = matrix + np.triu(matrix, 1).T

    matrix.setflags(write=False)
    return matrix


def offdiag_mean(matrix: np.ndarray) -> float:
    """Mean off-diagonal entry; tends to 0 when the Gram approaches identity"""
    n = matrix.shape[0]
    if n < 2:
        return 0.0
    return float((np.sum(matrix) - np.trace(matrix)) / (n * (n - 1)))
