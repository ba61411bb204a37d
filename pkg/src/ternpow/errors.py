"""Exception types shared across the package."""

from __future__ import annotations


class TernpowError(Exception):
    """Base class for package-specific failures."""


class PrecisionError(TernpowError):
    """A certified decision could not be made below the precision cap."""


class SizeGuardError(TernpowError):
    """A computation would exceed a configured size guard (states, bits)."""


class InsufficientDigits(TernpowError, ValueError):
    """An operand does not carry enough digits for the requested operation."""


class InsufficientDepth(TernpowError, ValueError):
    """A continued fraction expansion is too shallow for the requested N."""
