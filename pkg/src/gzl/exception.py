"""Error hierarchy shared by every gzl module.

Every failure the library can signal is a :class:`GzlError`, so callers
(the report layer in particular) can catch one base class and record the
check as failed instead of crashing.
"""
import logging
import sys
import traceback

logger = logging.getLogger(__name__)

__all__ = [
    'GzlError',
    'DivisionByApparentZero',
    'PrecisionExhausted',
    'RamificationOverflow',
    'NotOneUnit',
    'PointNotOnCurve',
    'PoleAtPoint',
    'UniformizerUnavailable',
    'SingularLinearSystem',
    'DivisorIncomplete',
    'ZeroIdeal',
    'CutoffExceeded',
    'FactorizationIncomplete',
    'UnsupportedField',
    'NewtonDivergence',
    'RecognitionFailure',
    'NotRecognized',
    'FormalGroupDivergence',
    'NonInvertibleLeadingCoefficient',
    'AmbiguousFrobenius',
    'SylvesterSingular',
    'ResidueMismatch',
    'FunctionalEquationResidual',
    'TruncationTooSmall',
    'ExpansionDivergence',
    'OutsideConvergenceRegion',
    'IdentityResidual',
    'PoleAtTheta',
    'ModuleTooLarge',
    'StabilizationNotReached',
    'ConfigInvalid',
    'IoError',
    'print_exception',
    'try_else',
]


class GzlError(Exception):
    """Base class. `residual` optionally carries the valuation reached."""

    def __init__(self, message='', residual=None):
        super().__init__(message)
        self.residual = residual


# == scalar tower

class DivisionByApparentZero(GzlError, ZeroDivisionError):
    """Divisor is zero, or zero to its working precision."""


class PrecisionExhausted(GzlError):
    """Leading data requested from a value with no significant digits."""


class RamificationOverflow(GzlError):
    """Ramification index would leave the configured tower."""


class NotOneUnit(GzlError):
    pass


# == curve

class PointNotOnCurve(GzlError):
    pass


class PoleAtPoint(GzlError):
    pass


class UniformizerUnavailable(GzlError):
    pass


class SingularLinearSystem(GzlError):
    """Rank cannot be decided at the working precision."""


class DivisorIncomplete(GzlError):
    """Known zeros and poles of a function do not add up to degree zero."""


# == ideals

class ZeroIdeal(GzlError):
    pass


class CutoffExceeded(GzlError):
    pass


class FactorizationIncomplete(GzlError):
    pass


class UnsupportedField(GzlError):
    pass


# == drinfeld

class NewtonDivergence(GzlError):
    pass


class RecognitionFailure(GzlError):
    pass


class NotRecognized(RecognitionFailure):
    """Honest failure of an algebraic recognition attempt."""


class FormalGroupDivergence(GzlError):
    pass


class NonInvertibleLeadingCoefficient(GzlError):
    pass


class AmbiguousFrobenius(GzlError):
    pass


# == tensor powers and motives

class SylvesterSingular(GzlError):
    pass


class ResidueMismatch(GzlError):
    pass


class FunctionalEquationResidual(GzlError):
    pass


class TruncationTooSmall(GzlError):
    pass


class ExpansionDivergence(GzlError):
    pass


class OutsideConvergenceRegion(GzlError):
    pass


class IdentityResidual(GzlError):
    pass


class PoleAtTheta(GzlError):
    pass


# == zeta

class ModuleTooLarge(GzlError):
    pass


class StabilizationNotReached(GzlError):
    pass


# == runs

class ConfigInvalid(GzlError):
    pass


class IoError(GzlError, OSError):
    pass


def print_exception(e, short=True):
    """Print the active traceback to stderr.

    With `short` only the frames below the handler are shown, otherwise the
    stack above the handler is prepended as if the error was never caught.
    """
    etype, value, tb = sys.exc_info()
    if value is None:
        etype, value, tb = type(e), e, e.__traceback__
    if short:
        print(''.join(traceback.format_exception(etype, value, tb)), file=sys.stderr)
        return
    frames = traceback.format_stack()[:-2]
    frames.extend(traceback.format_tb(tb))
    frames.extend(traceback.format_exception_only(etype, value))
    print('Traceback (most recent call last):\n' + ''.join(frames).rstrip('\n'),
          file=sys.stderr)


def try_else(func, default=None, catch=GzlError):
    """Default value if function fails with `catch`

    >>> from gzl.exception import NotRecognized
    >>> def strict(x):
    ...     if x < 0:
    ...         raise NotRecognized('negative')
    ...     return x
    >>> try_else(strict, 0)(3)
    3
    >>> try_else(strict, 0)(-3)
    0
    >>> try_else(strict, lambda x: -x)(-3)
    3
    """

    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except catch:
            if callable(default):
                return default(*args, **kwargs)
            return default

    return wrapper


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
