"""Exception types and size caps shared across the package."""

import os


class OrderError(Exception):
    """Base class for all errors raised by nefree."""


class CycleError(OrderError, ValueError):
    """The transitive closure of a relation produced x < x."""


class SizeError(OrderError, ValueError):
    """An exhaustive routine was asked to run beyond its size cap."""


class ArityError(OrderError, ValueError):
    """Number of blocks does not match the context size."""


class NotStrongError(OrderError, ValueError):
    pass


class NotNFreeError(OrderError, ValueError):
    pass


class NotCographError(OrderError, ValueError):
    pass


class StructureError(OrderError, AssertionError):
    """An internal structural invariant failed; indicates a bug."""


class CCGCError(OrderError, ValueError):
    """A linear-sum summand lacks a connected co-comparability graph."""


class AnchorError(OrderError, ValueError):
    pass


class RegimeError(OrderError, ValueError):
    pass


class ParseError(OrderError, ValueError):
    pass


MODULE_CAP = 20
EMBED_CAP = 12
ENUM_LABELED_CAP = 6
ENUM_ISO_CAP = 7


def embed_cap():
    """Default target-size cap for the embedding oracle (env ``NEFREE_EMBED_CAP``)."""
    raw = os.environ.get("NEFREE_EMBED_CAP")
    if raw is None:
        return EMBED_CAP
    if raw.lower() in ("none", "off", "0"):
        return None
    return int(raw)
