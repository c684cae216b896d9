"""
Tests for kernels and Gram assembly
"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kernel_mi import circuit_sim, kernels
from kernel_mi.circuit_sim import CircuitConfig
from kernel_mi.config import KernelConfig
from kernel_mi.exceptions import ParameterError, ShapeError
from kernel_mi.kernels import (Activation, GaussianKernel, QuantumKernel, activation_apply, gram,
                               kernel_eval, kernel_from_config, offdiag_mean)

ONE_QUBIT = QuantumKernel(circuit=CircuitConfig(n_qubits=1, depth=1), activation=Activation.NONE)


class TestActivation:

    def test_origin(self):
        assert activation_apply(Activation.TANH_SHRINK, 0.0) == 0.0

    def test_value_at_one(self):
        assert activation_apply(Activation.TANH_SHRINK, 1.0) == pytest.approx(0.23840584, abs=1e-8)

    def test_identity(self):
        assert activation_apply(Activation.NONE, 3.5) == 3.5

    @given(st.floats(min_value=-100, max_value=100, allow_nan=False))
    def test_odd(self, x):
        assert activation_apply("tanh-shrink", -x) == pytest.approx(-activation_apply("tanh-shrink", x), abs=1e-12)


class TestKernelEval:

    def test_gaussian_zero_distance(self):
        assert kernel_eval(GaussianKernel(1.0), 0.0, 0.0) == 1.0

    def test_gaussian_closed_form(self):
        assert kernel_eval(GaussianKernel(1.0), 0.0, np.sqrt(2.0)) == pytest.approx(0.36787944, abs=1e-8)

    def test_gaussian_monotone_in_distance(self):
        spec = GaussianKernel(1.5)
        values = [kernel_eval(spec, 0.0, d) for d in np.linspace(0.0, 6.0, 25)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_gaussian_width_must_be_positive(self):
        with pytest.raises(ParameterError):
            GaussianKernel(0.0)

    def test_single_qubit_quantum_closed_form(self):
        for x, y in [(0.0, 0.0), (0.3, -1.2), (2.0, 2.5), (-4.0, 1.0)]:
            assert kernel_eval(ONE_QUBIT, x, y) == pytest.approx(np.cos((x - y) / 2) ** 2, abs=1e-12)

    def test_single_qubit_quantum_is_stationary(self):
        a = kernel_eval(ONE_QUBIT, 0.1, 0.9)
        b = kernel_eval(ONE_QUBIT, 5.1, 5.9)
        assert a == pytest.approx(b, abs=1e-12)

    def test_quantum_depends_only_on_angles(self):
        spec = QuantumKernel(circuit=CircuitConfig(n_qubits=3, depth=2), angle_scale=0.5)
        direct = kernel_eval(spec, 1.0, 2.0)
        via_angles = kernel_eval(
            QuantumKernel(circuit=spec.circuit, activation=Activation.NONE),
            *spec.angles([1.0, 2.0]),
        )
        assert direct == pytest.approx(via_angles, abs=1e-14)

    def test_quantum_self_value(self):
        spec = QuantumKernel()
        assert kernel_eval(spec, 3.3, 3.3) == pytest.approx(1.0, abs=1e-12)


class TestGram:

    def test_gaussian_three_points(self):
        K = gram(GaussianKernel(1.0), [0.0, 1.0, 2.0])
        assert K[0, 1] == pytest.approx(np.exp(-0.5))
        assert K[0, 2] == pytest.approx(np.exp(-2.0))
        assert K[1, 2] == pytest.approx(np.exp(-0.5))
        assert np.all(np.diag(K) == 1.0)

    @pytest.mark.parametrize("spec", [GaussianKernel(1.0), QuantumKernel()])
    def test_constant_data_gives_all_ones(self, spec):
        K = gram(spec, np.full(6, 2.5))
        assert np.allclose(K, 1.0, atol=1e-12)

    def test_entries_match_kernel_eval(self):
        spec = QuantumKernel(circuit=CircuitConfig(n_qubits=3, depth=2))
        data = np.array([-1.5, 0.2, 0.9, 4.0])
        K = gram(spec, data)
        for i in range(4):
            for j in range(4):
                assert K[i, j] == pytest.approx(kernel_eval(spec, data[i], data[j]), abs=1e-12)

    def test_quantum_gram_computes_upper_triangle_only(self, monkeypatch):
        computed = []

        def counting(a, b):
            values = circuit_sim.overlap_squared(a, b)
            computed.append(np.size(values))
            return values

        monkeypatch.setattr(kernels, "overlap_squared", counting)
        K = gram(QuantumKernel(circuit=CircuitConfig(n_qubits=2, depth=1)), np.linspace(-2.0, 2.0, 7))
        assert sum(computed) == 7 * 8 // 2
        assert np.array_equal(K, K.T)

    @pytest.mark.parametrize("spec", [GaussianKernel(1.0), QuantumKernel()])
    def test_psd_symmetric_unit_diagonal(self, spec, rng):
        for _ in range(200):
            n = int(rng.integers(2, 31))
            scale = float(rng.choice([0.1, 1.0, 10.0]))
            K = gram(spec, scale * rng.normal(size=n))
            assert np.array_equal(K, K.T)
            assert np.allclose(np.diag(K), 1.0, atol=1e-10)
            assert np.linalg.eigvalsh(K).min() >= -1e-8
            assert K.min() >= 0.0 and K.max() <= 1.0

    def test_read_only(self):
        K = gram(GaussianKernel(1.0), [0.0, 1.0])
        with pytest.raises(ValueError):
            K[0, 0] = 2.0

    @pytest.mark.parametrize("data", [[1.0], np.zeros((2, 2))])
    def test_shape_errors(self, data):
        with pytest.raises(ShapeError):
            gram(GaussianKernel(1.0), data)

    def test_offdiag_mean(self):
        K = np.array([[1.0, 0.2, 0.4], [0.2, 1.0, 0.6], [0.4, 0.6, 1.0]])
        assert offdiag_mean(K) == pytest.approx(0.4)
        assert offdiag_mean(np.eye(5)) == 0.0


class TestKernelFromConfig:

    def test_gaussian(self):
        spec = kernel_from_config(KernelConfig(kernel="gaussian", sigma=2.0))
        assert spec == GaussianKernel(2.0)
        assert spec.label == "gaussian"

    def test_quantum(self):
        spec = kernel_from_config(KernelConfig(kernel="quantum", qubits=3, depth=1,
                                               activation="none", angle_scale=2.0))
        assert isinstance(spec, QuantumKernel)
        assert spec.circuit.n_qubits == 3
        assert spec.label == "quantum+none"
        assert spec.describe() == {
            "kernel": "quantum",
            "n_qubits": 3,
            "depth": 1,
            "angle_policy": "uniform",
            "activation": "none",
            "angle_scale": 2.0,
        }
