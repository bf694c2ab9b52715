"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: configuration problems exit 2, data/shape
problems exit 3, numerical failures exit 4.
"""


class AnomographyError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(AnomographyError, ValueError):
    """A configuration value or function argument is out of its legal range."""


class DimensionError(AnomographyError, ValueError):
    """Array shapes or indices do not line up."""


class DataError(AnomographyError):
    """An input file cannot be parsed or is inconsistent."""


class SequencingError(AnomographyError):
    """Slices were fed to the tracker out of order."""


class DegeneracyError(AnomographyError):
    """Geometric input is degenerate (e.g. collinear points for triangulation)."""


class SolverError(AnomographyError, ArithmeticError):
    """A linear solve failed (singular system)."""


class NumericalError(AnomographyError, ArithmeticError):
    """An iterate became non-finite."""
