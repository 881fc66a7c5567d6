"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, CapacityError -> 3,
I/O errors (OSError) -> 4, ConditioningStarvedError -> 5.
"""


class ConfigError(ValueError):
    """Invalid user-supplied configuration (bad flag value, bad range)."""


class CapacityError(RuntimeError):
    """A request would exceed a configured memory/iteration cap."""


class SamplerError(RuntimeError):
    """Rejection sampler failed to terminate within its iteration bound."""


class SingularLatticeError(ValueError):
    """Lattice basis is numerically singular (|det| below tolerance)."""


class ConditioningStarvedError(RuntimeError):
    """A conditional Monte Carlo estimate received no conditioning events."""
