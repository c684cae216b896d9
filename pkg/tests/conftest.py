"""
Shared fixtures for the kernel_mi test suite
"""
import numpy as np
import pytest

from kernel_mi.config import CellConfig, EstimatorConfig, ExperimentConfig, KernelConfig
from kernel_mi.kernels import QuantumKernel, gram


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run full-size acceptance sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


@pytest.fixture
def random_spd(rng):
    """Factory for random symmetric positive definite matrices"""
    def make(n, ridge=0.1):
        A = rng.normal(size=(n, n))
        return A @ A.T + ridge * np.eye(n)
    return make


@pytest.fixture
def gaussian_gram(rng):
    """Factory for Gaussian-kernel Grams of random data (sigma = 1)"""
    def make(n, scale=1.0):
        x = scale * rng.normal(size=n)
        return np.exp(-np.subtract.outer(x, x) ** 2 / 2.0)
    return make


@pytest.fixture
def quantum_gram(rng):
    """Factory for quantum-kernel Grams of random data (4 qubits, depth 2, tanh-shrink)"""
    spec = QuantumKernel()

    def make(n, scale=1.0):
        return gram(spec, scale * rng.normal(size=n))
    return make


@pytest.fixture
def small_cell():
    """A cheap single cell: Gaussian kernel, MI, N=10, T=4"""
    return CellConfig(
        distribution="gaussian", variance=1.0, model="linear", coef=100.0, samples=10,
        kernel=KernelConfig(kernel="gaussian", activation="none"),
        estimator=EstimatorConfig(criterion="mi"),
        trials=4, seed=7,
    )


@pytest.fixture
def small_experiment(tmp_path):
    return ExperimentConfig(
        name="unit", samples=[10], trials=4, seed=3, output_dir=tmp_path / "out",
    )


def cofactor_det(M):
    """Determinant by Laplace expansion along the first row (small matrices only)"""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if n == 1:
        return M[0, 0]
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += (-1) ** j * M[0, j] * cofactor_det(minor)
    return total

