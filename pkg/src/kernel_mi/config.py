"""
Experiment Configuration Management
"""
import logging
import os
from dataclasses import asdict, dataclass, field, fields, replace
from itertools import product
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import yaml
from dotenv import load_dotenv

from .circuit_sim import AnglePolicy, MAX_QUBITS
from .datagen import DistributionFamily, ModelForm
from .estimators import Criterion, EpsilonPolicy, MIConfig, SMIConfig
from .exceptions import ConfigurationError
from .kernels import Activation, KernelSpec, kernel_from_config

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / "config" / "experiment_config.yaml"

KERNEL_FAMILIES = ("gaussian", "quantum")


def _as_list(value: Any, cast: Callable) -> List:
    """Scalar, YAML list or comma-separated string -> list of cast values"""
    if value is None:
        return []
    if isinstance(value, str):
        items = [v.strip() for v in value.split(",") if v.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    try:
        return [cast(v) for v in items]
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid value in {value!r}: {e}") from e


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        lowered = value.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off", ""):
            return False
    if isinstance(value, (int, float)):
        return bool(value)
    raise ConfigurationError(f"Expected a boolean, got {value!r}")


def _check_choice(name: str, value: str, choices) -> str:
    if value not in choices:
        raise ConfigurationError(f"{name} must be one of {list(choices)}, got {value!r}")
    return value


@dataclass
class KernelConfig:
    kernel: str = "gaussian"
    sigma: float = 1.0
    qubits: int = 4
    depth: int = 2
    angle_scale: float = 1.0
    activation: str = Activation.TANH_SHRINK.value
    angle_policy: str = AnglePolicy.UNIFORM.value

    def __post_init__(self):
        _check_choice("kernel", self.kernel, KERNEL_FAMILIES)
        _check_choice("activation", self.activation, [a.value for a in Activation])
        _check_choice("angle_policy", self.angle_policy, [p.value for p in AnglePolicy])
        self.sigma = float(self.sigma)
        self.qubits = int(self.qubits)
        self.depth = int(self.depth)
        self.angle_scale = float(self.angle_scale)
        if self.sigma <= 0:
            raise ConfigurationError(f"sigma must be positive, got {self.sigma}")
        if not 1 <= self.qubits <= MAX_QUBITS:
            raise ConfigurationError(f"qubits must be between 1 and {MAX_QUBITS}, got {self.qubits}")
        if self.depth < 1:
            raise ConfigurationError(f"depth must be at least 1, got {self.depth}")

    def to_spec(self) -> KernelSpec:
        return kernel_from_config(self)


@dataclass
class EstimatorConfig:
    criterion: str = Criterion.MI.value
    kappa: float = 0.02
    epsilon: float = 0.01
    epsilon_policy: str = EpsilonPolicy.CONSTANT.value

    def __post_init__(self):
        _check_choice("criterion", self.criterion, [c.value for c in Criterion])
        _check_choice("epsilon_policy", self.epsilon_policy, [p.value for p in EpsilonPolicy])
        self.kappa = float(self.kappa)
        self.epsilon = float(self.epsilon)
        if self.kappa <= 0:
            raise ConfigurationError(f"kappa must be positive, got {self.kappa}")
        if self.epsilon <= 0:
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")

    def to_estimator_config(self) -> Union[MIConfig, SMIConfig]:
        if self.criterion == Criterion.SMI.value:
            return SMIConfig(epsilon=self.epsilon, policy=EpsilonPolicy(self.epsilon_policy))
        return MIConfig(kappa=self.kappa)


@dataclass(frozen=True)
class CellConfig:
    """One point of a sweep grid"""
    distribution: str
    variance: float
    model: str
    coef: float
    samples: int
    kernel: KernelConfig
    estimator: EstimatorConfig
    trials: int
    seed: int
    noise_gaussian: bool = False
    target: int = 3

    @property
    def kernel_label(self) -> str:
        return self.kernel.to_spec().label

    def coordinates(self) -> Dict[str, Any]:
        """Values that identify the cell; trial seeds are derived from these"""
        return {
            "distribution": self.distribution,
            "variance": self.variance,
            "model": self.model,
            "coef": self.coef,
            "samples": self.samples,
            "kernel": self.kernel_label,
            "criterion": self.estimator.criterion,
            "noise_gaussian": self.noise_gaussian,
        }


# flat keys accepted in experiment files and mirrored by CLI flags
GRID_KEYS = ("distribution", "variance", "model", "coef", "samples", "kernel", "activation", "criterion")
SCALAR_KEYS = (
    "sigma", "qubits", "depth", "angle_scale", "angle_policy", "kappa", "epsilon",
    "epsilon_policy", "trials", "seed", "noise_gaussian", "target", "workers", "out", "name",
)


@dataclass
class ExperimentConfig:
    name: str = "experiment"
    distributions: List[str] = field(default_factory=lambda: [DistributionFamily.GAUSSIAN.value])
    variances: List[float] = field(default_factory=lambda: [1.0])
    models: List[str] = field(default_factory=lambda: [ModelForm.LINEAR.value])
    coefs: List[float] = field(default_factory=lambda: [100.0])
    samples: List[int] = field(default_factory=lambda: [10, 30, 50])
    kernels: List[str] = field(default_factory=lambda: ["gaussian"])
    activations: List[str] = field(default_factory=lambda: [Activation.TANH_SHRINK.value])
    criteria: List[str] = field(default_factory=lambda: [Criterion.MI.value])
    kernel: KernelConfig = field(default_factory=KernelConfig)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    trials: int = 100
    seed: int = 0
    noise_gaussian: bool = False
    target: int = 3
    workers: int = 1
    output_dir: Path = Path("outputs")

    def __post_init__(self):
        if isinstance(self.output_dir, str):
            self.output_dir = Path(self.output_dir)

        self.distributions = _as_list(self.distributions, str)
        self.variances = _as_list(self.variances, float)
        self.models = _as_list(self.models, str)
        self.coefs = _as_list(self.coefs, float)
        self.samples = _as_list(self.samples, int)
        self.kernels = _as_list(self.kernels, str)
        self.activations = _as_list(self.activations, str)
        self.criteria = _as_list(self.criteria, str)

        for name in ("distributions", "variances", "models", "coefs", "samples",
                     "kernels", "activations", "criteria"):
            if not getattr(self, name):
                raise ConfigurationError(f"Grid '{name}' must not be empty")

        for d in self.distributions:
            _check_choice("distribution", d, [f.value for f in DistributionFamily])
        for m in self.models:
            _check_choice("model", m, [f.value for f in ModelForm])
        for k in self.kernels:
            _check_choice("kernel", k, KERNEL_FAMILIES)
        for a in self.activations:
            _check_choice("activation", a, [f.value for f in Activation])
        for c in self.criteria:
            _check_choice("criterion", c, [f.value for f in Criterion])
        if any(v <= 0 for v in self.variances):
            raise ConfigurationError(f"Variances must be positive, got {self.variances}")
        if any(n < 2 for n in self.samples):
            raise ConfigurationError(f"Sample sizes must be at least 2, got {self.samples}")

        self.trials = int(self.trials)
        self.seed = int(self.seed)
        self.target = int(self.target)
        self.workers = int(self.workers)
        self.noise_gaussian = _as_bool(self.noise_gaussian)
        if self.trials < 1:
            raise ConfigurationError(f"trials must be at least 1, got {self.trials}")
        if self.target not in (1, 2, 3):
            raise ConfigurationError(f"target must be 1, 2 or 3, got {self.target}")
        if self.workers == 0:
            raise ConfigurationError("workers must be non-zero (-1 uses every CPU)")

    def kernel_variants(self) -> List[KernelConfig]:
        """Kernel configs of the sweep; activation only varies for the quantum kernel"""
        variants = []
        for family in self.kernels:
            if family == "gaussian":
                variants.append(replace(self.kernel, kernel="gaussian", activation=Activation.NONE.value))
            else:
                for activation in self.activations:
                    variants.append(replace(self.kernel, kernel="quantum", activation=activation))
        unique = []
        for v in variants:
            if v not in unique:
                unique.append(v)
        return unique

    def cells(self, where: Optional[Dict[str, Any]] = None) -> List[CellConfig]:
        """
        Cartesian product of the grids, optionally filtered on cell coordinates

        Raises:
            ConfigurationError: if no cell survives the filter
        """
        result = []
        for dist, var, model, coef, n, kern, crit in product(
            self.distributions, self.variances, self.models, self.coefs,
            self.samples, self.kernel_variants(), self.criteria,
        ):
            cell = CellConfig(
                distribution=dist, variance=var, model=model, coef=coef, samples=n,
                kernel=kern, estimator=replace(self.estimator, criterion=crit),
                trials=self.trials, seed=self.seed,
                noise_gaussian=self.noise_gaussian, target=self.target,
            )
            if where and not _matches(cell.coordinates(), where):
                continue
            result.append(cell)

        if not result:
            raise ConfigurationError(f"No experiment cells left after filter {where}")
        return result

    def echo(self) -> Dict[str, Any]:
        """Every tunable that affects the numbers, for the report header"""
        out = asdict(self)
        out["output_dir"] = str(self.output_dir)
        return out

    def with_overrides(self, flat: Dict[str, Any]) -> "ExperimentConfig":
        """Apply flat key/value overrides (experiment file or CLI flags)"""
        unknown = set(flat) - set(GRID_KEYS) - set(SCALAR_KEYS)
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")

        kernel_fields = {f.name for f in fields(KernelConfig)}
        estimator_fields = {f.name for f in fields(EstimatorConfig)}
        grid_attr = {
            "distribution": "distributions", "variance": "variances", "model": "models",
            "coef": "coefs", "samples": "samples", "kernel": "kernels",
            "activation": "activations", "criterion": "criteria",
        }

        top: Dict[str, Any] = {}
        kernel_updates: Dict[str, Any] = {}
        estimator_updates: Dict[str, Any] = {}
        for key, value in flat.items():
            if value is None:
                continue
            if key in grid_attr:
                top[grid_attr[key]] = value
            elif key == "out":
                top["output_dir"] = Path(value)
            elif key in kernel_fields:
                kernel_updates[key] = value
            elif key in estimator_fields:
                estimator_updates[key] = value
            else:
                top[key] = value

        try:
            kernel = replace(self.kernel, **kernel_updates)
            estimator = replace(self.estimator, **estimator_updates)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(str(e)) from e
        return replace(self, kernel=kernel, estimator=estimator, **top)


def _matches(coords: Dict[str, Any], where: Dict[str, Any]) -> bool:
    for key, wanted in where.items():
        if key not in coords:
            raise ConfigurationError(f"Cannot filter on unknown coordinate '{key}'")
        actual = coords[key]
        try:
            if float(actual) != float(wanted):
                return False
        except (TypeError, ValueError):
            if str(actual) != str(wanted):
                return False
    return True


def load_flat_config(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a flat key/value experiment file (one `key: value` per line)"""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Experiment file not found: {path}")
    with open(path, "r") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Could not parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must contain key/value pairs")
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ConfigurationError(f"{path} must be flat; nested keys: {nested}")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


class ConfigManager:
    """Loads library defaults from YAML, then environment overrides"""

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        load_dotenv()
        self.config_path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
        self._config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        if not self.config_path.exists():
            logger.debug(f"No config file at {self.config_path}, using built-in defaults")
            config = self._create_default_config()
        else:
            with open(self.config_path, "r") as f:
                config_data = yaml.safe_load(f) or {}
            config = self._from_yaml(config_data)

        # Environment overrides
        if os.getenv("KERNEL_MI_LOG_LEVEL"):
            config["logging_level"] = os.getenv("KERNEL_MI_LOG_LEVEL")
        if os.getenv("KERNEL_MI_WORKERS"):
            try:
                workers = int(os.getenv("KERNEL_MI_WORKERS"))
            except ValueError as e:
                raise ConfigurationError(f"KERNEL_MI_WORKERS must be an integer: {e}") from e
            config["experiment"] = replace(config["experiment"], workers=workers)
        if os.getenv("KERNEL_MI_OUTPUT_DIR"):
            config["experiment"] = replace(config["experiment"], output_dir=Path(os.getenv("KERNEL_MI_OUTPUT_DIR")))
        return config

    def _from_yaml(self, data: Dict[str, Any]) -> Dict[str, Any]:
        try:
            kernel = KernelConfig(**data.get("kernel", {}))
            estimator = EstimatorConfig(**data.get("estimator", {}))
            paths = data.get("paths", {})
            experiment = ExperimentConfig(
                kernel=kernel,
                estimator=estimator,
                output_dir=Path(paths.get("output_dir", "outputs")),
                **data.get("experiment", {}),
            )
        except TypeError as e:
            raise ConfigurationError(f"Invalid key in {self.config_path}: {e}") from e

        project = data.get("project", {})
        return {
            "name": project.get("name", "kernel_mi"),
            "logging_level": project.get("logging_level", "INFO"),
            "experiment": experiment,
        }

    def _create_default_config(self) -> Dict[str, Any]:
        return {
            "name": "kernel_mi",
            "logging_level": "INFO",
            "experiment": ExperimentConfig(),
        }

    @property
    def config(self) -> Dict[str, Any]:
        return self._config

    @property
    def experiment(self) -> ExperimentConfig:
        return self._config["experiment"]

    @property
    def logging_level(self) -> str:
        return self._config["logging_level"]
