"""Exception hierarchy shared across the package."""


class CStatesError(Exception):
    """Base class for all package errors."""


class SpectrumError(CStatesError):
    """Invalid spectrum definition, document, or validation failure."""


class LevelRangeError(SpectrumError):
    """A level index beyond an explicit level list was requested."""


class LabelRangeError(CStatesError):
    """A label (J, gamma) or parameter is outside its admissible range."""


class SpectrumMismatchError(CStatesError):
    """Two objects built over different spectra were combined."""


class TruncationError(CStatesError):
    """A certified truncation target could not be met within the term budget.

    Carries the partial sum and the best tail bound reached so callers can
    report progress instead of discarding it.
    """

    def __init__(self, message, value=None, tail_bound=None, terms_used=None):
        super().__init__(message)
        self.value = value
        self.tail_bound = tail_bound
        self.terms_used = terms_used


class CertificationError(CStatesError):
    """No rigorous tail bound is available for the requested quantity."""


class QuadratureError(CStatesError):
    """Node-doubling quadrature failed to converge."""


class CrossCheckError(CStatesError):
    """Two independent computation routes disagreed beyond tolerance."""
