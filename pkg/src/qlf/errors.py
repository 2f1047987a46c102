"""Exception hierarchy.

Errors are grouped so the command-line layer can map them onto exit codes:
``DataFormatError`` covers malformed input files, ``NumericalError`` covers
preconditions and numerical failures raised by the algorithms.
"""


class QlfError(Exception):
    """Base class for all library errors."""


class DataFormatError(QlfError):
    """Malformed or inconsistent input data (files, grids, dimensions)."""


class ParseError(DataFormatError):
    """Unreadable dataset or model file."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc += f"{path}"
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


class DimensionMismatch(DataFormatError):
    """Declared and actual dimensions disagree."""


class NumericalError(QlfError):
    """Numerical precondition violated or computation failed."""


class SingularShift(NumericalError):
    """Evaluation point coincides with a system pole."""


class NegativeTime(NumericalError):
    """Impulse response requested at t < 0."""


class RepeatedPoles(NumericalError):
    """Eigenvalues coincide within tolerance; pole-residue form undefined."""


class UnstableModel(NumericalError):
    """Operation requires a stable model."""


class SingularMatrix(NumericalError):
    """Dense solve on a (numerically) singular matrix."""


class EigFailure(NumericalError):
    """Eigendecomposition did not converge."""


class CoincidentPoints(NumericalError):
    """A right point collides with a left point outside Hermite mode."""


class SingularLoewner(NumericalError):
    """Loewner matrix numerically singular; interpolation data is redundant."""


class NotConjugateClosed(NumericalError):
    """Data or realization is not closed under complex conjugation."""


class NonPositiveRealPart(NumericalError):
    """Continuous-domain sampling point with Re(s) <= 0."""


class PointInsideUnitDisk(NumericalError):
    """Discrete-domain sampling point with |z| <= 1."""


class EmptyGrid(NumericalError):
    """Measurement grid has too few points."""


class MissingDeltaS(QlfError):
    """Hermite samples from measured data require a finite-difference step."""


class NotObservable(NumericalError):
    """Closed-form observability Gramian is not positive definite."""


class NotControllable(NumericalError):
    """Closed-form controllability Gramian is not positive definite."""


class DegenerateROM(NumericalError):
    """Reduced model has a pole too close to the stability boundary."""


class UnstableROM(NumericalError):
    """Operation requires a stable reduced-order model."""
