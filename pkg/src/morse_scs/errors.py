"""Exception and warning types raised by morse_scs."""


class MorseError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MorseError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(MorseError, ArithmeticError):
    """A Pochhammer symbol in a denominator vanishes before the series terminates."""


class NumericalOverflow(MorseError, OverflowError):
    """A value cannot be represented in double precision."""


class DimensionError(MorseError, ValueError):
    """A requested truncation dimension exceeds the bound-state space."""


class DegenerateState(MorseError):
    """All expansion coefficients vanish, so the state cannot be normalized."""


class TailError(MorseError):
    """The integrand does not decay inside the quadrature window."""


class CancellationWarning(RuntimeWarning):
    """A floating-point sum lost most of its significant digits."""


class SqueezingWarning(UserWarning):
    """|gamma| >= 1: the finite sum is normalizable but has no oscillator analogue."""
