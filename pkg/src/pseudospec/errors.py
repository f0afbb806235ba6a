"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration problems exit 2,
solver failures (instability, oracle breakdown, time-step stagnation) exit 3,
and data-integrity problems (corrupt checkpoints, checksum drift,
non-conjugate-symmetric spectra) exit 4.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""


class IntegrityError(RuntimeError):
    """Stored or in-memory data violates a structural guarantee."""


class SolverError(RuntimeError):
    """Base class for failures during time integration or root finding."""


class InstabilityError(SolverError):
    """The solution left the representable range (NaN/Inf detected).

    Attributes:
        t: simulation time at which the blow-up was detected.
        step_count: number of completed steps before detection.
    """

    def __init__(self, message: str, t: float, step_count: int):
        super().__init__(message)
        self.t = t
        self.step_count = step_count


class OracleError(SolverError):
    """Newton iteration for the exact solution failed to converge.

    Attributes:
        x: grid coordinate at which the iteration diverged.
    """

    def __init__(self, message: str, x: float):
        super().__init__(message)
        self.x = x


class NoShockError(SolverError):
    """The initial profile never steepens, so no shock time exists."""


class StagnationError(SolverError):
    """The adaptive time step fell below the configured floor."""
