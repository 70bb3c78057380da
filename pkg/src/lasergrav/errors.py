"""Exception hierarchy: usage errors are plain ValueError, numerical failures
get their own classes so the CLI can map them to a distinct exit code."""


class LaserGravError(Exception):
    """Base class for package-specific failures."""


class NumericsError(LaserGravError):
    """A numerical procedure failed (non-convergence, quadrature breakdown)."""


class ConvergenceError(NumericsError):
    """Imaginary-time relaxation did not reach the requested tolerance."""


class CollapseError(NumericsError):
    """The relaxing cloud shrank below the grid resolution."""


class UnboundError(LaserGravError):
    """No self-bound solution exists at the requested parameters."""


class SpeciesFileError(LaserGravError):
    """A species file could not be parsed; the message names the line."""
