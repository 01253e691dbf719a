"""Exception types raised across the package."""

from __future__ import annotations


class HodgegenError(Exception):
    """Base class for all package-specific errors."""


class ScFormatError(HodgegenError):
    """A .sc file is malformed (bad record, out of order, duplicate, range)."""


class ClosureViolation(HodgegenError):
    """A triangle references an edge that is not present in the edge list."""


class Disconnected(HodgegenError):
    """The 1-skeleton is not connected."""


class NotACycle(HodgegenError):
    """A 1-chain handed to a cycle-only operation has nonzero boundary."""


class ZeroMatrix(HodgegenError):
    """An operator norm is zero, so no step size can be derived from it."""


class MaxIterationsExceeded(HodgegenError):
    """Relaxation hit the iteration cap before meeting the update threshold.

    Carries the partial state so callers can inspect how far it got.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class ScaleExceeded(HodgegenError):
    """A dense reference routine was asked to run above its size cap."""


class EdgeInTree(HodgegenError):
    """A tree edge was passed where a non-tree edge is required."""


class RankDeficientHarmonics(HodgegenError):
    """The sampled harmonics span fewer dimensions than the candidate set."""


class NonQuiescent(HodgegenError):
    """A simulated protocol phase failed to drain its event queue."""


class TooSparse(HodgegenError):
    """Generated geometry has no usable component (fewer than two vertices)."""
