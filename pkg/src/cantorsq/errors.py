"""Exception types shared across the package."""


class CantorsqError(Exception):
    """Base class for all package-specific failures."""


class CapExceeded(CantorsqError):
    """An enumeration would exceed the configured resource cap."""


class ThinRegimeError(CantorsqError):
    """An operation requiring contraction ratio >= 1/3 was called below it.

    The subdivision conditions and the decomposition cover are only sound
    for alpha >= 3.  Running them on a thinner set would quietly produce
    wrong answers, so we refuse loudly instead.
    """


class InternalInconsistencyError(CantorsqError):
    """An exact computation contradicted an identity the code guarantees.

    This never indicates bad input: it means a bug in this package (or a
    precondition the caller bypassed), so it gets its own type to keep it
    separate from usage errors.
    """


class SearchExhausted(CantorsqError):
    """An adaptive search hit its hard budget; diagnostics in the message."""
