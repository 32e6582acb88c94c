"""Exception and warning types shared across the package."""


class ZenoCavityError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(ZenoCavityError, ValueError):
    """Fock-space truncation dimension is too small or not an integer."""


class DegenerateStateError(ZenoCavityError, ValueError):
    """Operation on a zero-norm (fully leaked or annihilated) state."""


class LeakageError(ZenoCavityError, RuntimeError):
    """Truncation leakage exceeded the tolerated budget during a run."""


class UnderdeterminedError(ZenoCavityError, ValueError):
    """Tomography input does not constrain the quantity being estimated."""


class EmptyBatchError(ZenoCavityError, ValueError):
    """Detection batch contains no detected atoms."""


class ConfigError(ZenoCavityError, ValueError):
    """Invalid run configuration (file, CLI override, or field value)."""


class RecordFormatError(ConfigError):
    """Malformed atom-record file; carries the offending line number."""

    def __init__(self, message, lineno=None):
        super().__init__(message)
        self.lineno = lineno


class IllConditionedFitWarning(UserWarning):
    """Mixture design matrix is close to singular; weights unreliable."""


class LowStatisticsWarning(UserWarning):
    """Estimate derived from too few detected atoms to be trustworthy."""
