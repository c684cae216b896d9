"""
Exception hierarchy for kernel_mi
"""
from typing import Any, Dict, Optional

import numpy as np


class KernelMIError(Exception):
    """Base class for every error raised by this package"""


class ConfigurationError(KernelMIError, ValueError):
    """Invalid configuration file, flag combination or empty grid"""


class ParameterError(KernelMIError, ValueError):
    """A distribution or model parameter outside its domain"""


class CapacityError(KernelMIError):
    """Requested statevector would exceed the qubit guard"""


class ShapeError(KernelMIError, ValueError):
    """Operands with mismatched dimensions"""


class ConditioningError(KernelMIError, np.linalg.LinAlgError):
    """Matrix is not numerically positive definite"""

    def __init__(self, message: str, pivot_index: Optional[int] = None):
        super().__init__(message)
        self.pivot_index = pivot_index

    def __reduce__(self):
        return (self.__class__, (str(self), self.pivot_index))


class TrialError(KernelMIError):
    """A single trial failed; carries its index and cell coordinates"""

    def __init__(self, trial_index: int, cell: Optional[Dict[str, Any]] = None,
                 cause: Optional[BaseException] = None):
        self.trial_index = trial_index
        self.cell = cell or {}
        self.cause = cause
        super().__init__(f"Trial {trial_index} failed in cell {self.cell}: {cause}")

    def __reduce__(self):
        return (self.__class__, (self.trial_index, self.cell, self.cause))


class ReportWriteError(KernelMIError, OSError):
    """Report file could not be written"""

    def __init__(self, path, cause: Optional[BaseException] = None):
        self.path = path
        super().__init__(f"Could not write report file {path}: {cause}")
