"""Tate resolutions on projective space and the Weyman complexes derived from them."""

from weylith.errors import (
    CorruptedSegmentError,
    ExcludedCaseError,
    InvalidInputError,
    InvariantViolation,
    RegularityError,
    WeylithError,
    WindowTooNarrowError,
)

__version__ = "0.1.0"

__all__ = [
    "CorruptedSegmentError",
    "ExcludedCaseError",
    "InvalidInputError",
    "InvariantViolation",
    "RegularityError",
    "WeylithError",
    "WindowTooNarrowError",
]
