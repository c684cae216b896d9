"""
Statevector simulation of the IQP data-encoding circuit

U(x) = H^n V_D(x) H^n ... V_1(x) H^n applied to |0...0>, where each V_i puts
U1(theta) on every qubit and controlled-U1(theta) on each neighbouring pair
(j, j+1). Qubit j is bit j of the basis index.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .exceptions import CapacityError, ParameterError, ShapeError

logger = logging.getLogger(__name__)

MAX_QUBITS = 20
NORM_TOLERANCE = 1e-12
_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class AnglePolicy(str, Enum):
    UNIFORM = "uniform"
    LAYER_SCALED = "layer-scaled"


@dataclass(frozen=True)
class CircuitConfig:
    n_qubits: int = 4
    depth: int = 2
    angle_policy: AnglePolicy = AnglePolicy.UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "angle_policy", AnglePolicy(self.angle_policy))
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise CapacityError(
                f"n_qubits must be between 1 and {MAX_QUBITS}, got {self.n_qubits}"
            )
        if self.depth < 1:
            raise ParameterError(f"Circuit depth must be at least 1, got {self.depth}")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def layer_angles(self, theta):
        """Angle used by every gate of layer i, for i = 1..D"""
        theta = np.asarray(theta, dtype=float)
        if self.angle_policy is AnglePolicy.LAYER_SCALED:
            return [theta * (i + 1) for i in range(self.depth)]
        return [theta] * self.depth


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return int(np.log2(len(self.amplitudes)))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@lru_cache(maxsize=None)
def phase_weights(n_qubits: int) -> np.ndarray:
    """
    Exponent multiplier of one V layer per basis index.

    U1 on every qubit contributes one phase per set bit, CU1 on (j, j+1) one
    phase per adjacent set-bit pair.
    """
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    pairs = idx & (idx >> 1)
    weights = _popcount(idx) + _popcount(pairs)
    weights.setflags(write=False)
    return weights


def _popcount(values: np.ndarray) -> np.ndarray:
    counts = np.zeros_like(values)
    v = values.copy()
    while np.any(v):
        counts += v & 1
        v >>= 1
    return counts


def _hadamard_layer(states: np.ndarray, n_qubits: int) -> np.ndarray:
    """H on every qubit, as one butterfly pass per qubit over a batch of states"""
    batch = states.shape[0]
    for q in range(n_qubits):
        view = states.reshape(batch, 1 << (n_qubits - 1 - q), 2, 1 << q)
        a0 = view[:, :, 0, :]
        a1 = view[:, :, 1, :]
        states = np.stack(((a0 + a1) * _INV_SQRT2, (a0 - a1) * _INV_SQRT2), axis=2)
        states = states.reshape(batch, -1)
    return states


def encode_batch(config: CircuitConfig, angles) -> np.ndarray:
    """
    Encode many angles at once

    Args:
        config: Circuit size and layer angle policy
        angles: Real vector of length N

    Returns:
        Complex array (N, 2^n); row k is the encoded state of angles[k]
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if not np.all(np.isfinite(angles)):
        raise ParameterError("Encoding angles must be finite")

    weights = phase_weights(config.n_qubits).astype(float)
    states = np.zeros((len(angles), config.dim), dtype=complex)
    states[:, 0] = 1.0

    states = _hadamard_layer(states, config.n_qubits)
    for layer_theta in config.layer_angles(angles):
        states = states * np.exp(1j * np.outer(layer_theta, weights))
        states = _hadamard_layer(states, config.n_qubits)
    return states


def encode_state(config: CircuitConfig, angle: float) -> StateVector:
    """U_IQP(angle)|0...0> as an immutable StateVector"""
    amplitudes = encode_batch(config, [angle])[0]
    return StateVector(amplitudes)


def overlap_squared(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    |<b|a>|^2 over the last axis, broadcasting leading axes

    Real and imaginary parts are accumulated separately: swapping a and b
    leaves the real part unchanged and negates the imaginary part exactly.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    re = np.sum(a.real * b.real + a.imag * b.imag, axis=-1)
    im = np.sum(a.real * b.imag - a.imag * b.real, axis=-1)
    return np.clip(re * re + im * im, 0.0, 1.0)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<b|a>|^2 clamped to [0, 1]"""
    amps_a = a.amplitudes if isinstance(a, StateVector) else np.asarray(a)
    amps_b = b.amplitudes if isinstance(b, StateVector) else np.asarray(b)
    if amps_a.shape != amps_b.shape:
        raise ShapeError(f"State dimensions differ: {amps_a.shape} vs {amps_b.shape}")
    return float(overlap_squared(amps_a, amps_b))
