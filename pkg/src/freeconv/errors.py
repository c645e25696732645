"""Exception and warning hierarchy for the freeconv package.

Everything raised on purpose derives from :class:`FreeConvError`, so callers
can catch one base class.  Parameter-validation errors also derive from
``ValueError`` to stay friendly to generic callers.
"""


class FreeConvError(Exception):
    """Base class for all errors raised by freeconv."""


class InvalidParameterError(FreeConvError, ValueError):
    """A scalar argument is outside its admissible range."""


class InvalidMeasureError(FreeConvError, ValueError):
    """A measure definition is inconsistent (negative density, wrong mass, ...)."""


class InvalidSupportError(FreeConvError, ValueError):
    """A support interval violates a requirement (e.g. positivity for products)."""


class PoleError(FreeConvError, ZeroDivisionError):
    """Evaluation requested exactly at a pole (e.g. the Joukowski map at 0)."""


class BranchCutError(FreeConvError):
    """Evaluation on (or numerically indistinguishable from) the support cut,
    where inverse-branch selection is ambiguous."""


class OutOfDiskError(FreeConvError):
    """A disk-coordinate argument lies on or outside the unit circle."""


class OutsideContourError(FreeConvError):
    """The evaluation point is outside the region where a Cauchy-integral
    representation is valid, or too close to the discretized contour."""


class DegenerateDerivativeError(FreeConvError):
    """A transform derivative vanished where the algorithm needs to divide by it."""


class ContourTooSmallError(FreeConvError):
    """The radius search could not find any circle satisfying the image criterion."""


class InvalidContourError(FreeConvError):
    """A discretized contour failed an orientation or winding-number sanity check."""


class FreeConvWarning(UserWarning):
    """Non-fatal algorithmic warnings (support-search fallback, clamping, ...)."""


def emit_warning(sink, message: str) -> None:
    """Record ``message`` in ``sink`` (a list) or raise it as a Python warning."""
    if sink is None:
        import warnings

        warnings.warn(message, FreeConvWarning, stacklevel=3)
    else:
        sink.append(message)
