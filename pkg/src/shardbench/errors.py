"""Exception types shared across the package."""

from __future__ import annotations


class ShardbenchError(Exception):
    """Base class for all errors raised by this package."""


class EmptyName(ShardbenchError):
    """Raised when a raw name trims down to nothing."""


class InvalidCharacter(ShardbenchError):
    """Raised for a character outside the 37-character alphabet.

    Carries the offending character and its zero-based position.
    """

    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"invalid character {char!r} at position {position}")


class TooLong(ShardbenchError):
    """Raised when a name exceeds the maximum supported length."""


class NothingToSum(ShardbenchError):
    """Raised when a character drop leaves nothing to sum."""


class LevelOutOfRange(ShardbenchError):
    """Raised when a requested level exceeds a strategy's depth."""


class EmptyHistogram(ShardbenchError):
    """Raised when statistics are requested for a histogram with total 0."""


class ShapeMismatch(ShardbenchError):
    """Raised when merging histograms over different bucket spaces."""


class TooManyBuckets(ShardbenchError):
    """Raised when a joint bucket space exceeds the dense-array cap."""


class SpaceExhausted(ShardbenchError):
    """Raised when a corpus spec asks for more distinct names than exist."""
