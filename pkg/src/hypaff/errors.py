"""Exception hierarchy shared by all hypaff modules.

The CLI maps these onto exit codes: ValidationError -> 2,
ResourceError -> 3, CertificationError -> 4.
"""


class HypaffError(Exception):
    """Base class for all package errors."""


class ValidationError(HypaffError):
    """Bad input: violated precondition, malformed map spec, invalid flag."""


class ParameterError(ValidationError):
    """A numeric parameter is outside its admissible range."""


class DegeneracyError(ValidationError):
    """A geometric object fell below the degeneracy tolerance."""


class BoundaryError(HypaffError):
    """A point is on (or too close to) the discontinuity set, where the map
    is undefined."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class InsufficientPastError(ValidationError):
    """A symbol word is too short for the requested series truncation."""


class UndersamplingError(ValidationError):
    """Orbit data too short for the requested estimator resolution."""


class EmptySlabError(ValidationError):
    """A conditional slab contains no histogram mass."""


class ResourceError(HypaffError):
    """A configured resource cap (cell count, memory) was exceeded."""


class CertificationError(HypaffError):
    """A numerical certificate could not be established."""


class EmptyRegionError(CertificationError):
    """The transversality region is empty for the requested constants."""


class DegenerateFitError(CertificationError):
    """Too few usable data points above the noise floor for a fit."""


class ExcessiveBoundaryEventsError(CertificationError):
    """Perturbation events exceeded the budget; the measure-zero boundary
    assumption looks violated for this run."""
