"""Exception and warning types shared across the package."""


class SimulationError(Exception):
    """Base class for physics-level failures."""


class GridMismatchError(SimulationError):
    """Fields that must share one sampling grid do not."""


class SingularTransformError(SimulationError):
    """The probe superposition transform is undefined (total pump strength vanishes)."""


class MatchingError(SimulationError):
    """Doublet pump-ratio matching condition violated beyond tolerance."""


class IndeterminateMatchingError(SimulationError):
    """Matching condition cannot be evaluated (a denominator beam is identically zero)."""


class StationarySolveError(SimulationError):
    """Stationary atomic-amplitude system is singular or left a large residual."""


class UnsupportedConfigurationError(SimulationError):
    """Operation not defined for this beam configuration."""


class ConfigError(ValueError):
    """Invalid run configuration (syntax, unknown key, or invariant violation)."""


class AdiabaticityWarning(UserWarning):
    """One-photon detuning is not large against the pump strengths; the
    eliminated closed forms are a rough approximation here."""


class ConvergenceWarning(UserWarning):
    """Integrator output changed appreciably under step halving."""
