"""Exception types shared across the package."""


class VcspError(Exception):
    """Base class for all library errors."""


class CapExceeded(VcspError):
    """An enumeration or LP would exceed a configured size cap."""


class VerificationError(VcspError):
    """A certificate or witness failed its exact re-verification.

    Raised when an internally produced object (LP certificate, fractional
    polymorphism, hardness gadget) does not satisfy the property it is
    supposed to witness.  This always indicates a bug upstream, never a
    property of the input.
    """


class InternalInconsistency(VcspError):
    """The classifier reached a state the dichotomy rules out."""


class InconclusiveUnderCap(VcspError):
    """Classification could not be completed under the configured caps.

    The pinned closure used for gadget extraction is truncated by the arity
    cap; if no gadget is found while the tractability LP also failed, the
    honest answer is "inconclusive", not a verdict.
    """
