"""Exception types shared across the package."""


class InterleaveKitError(Exception):
    """Base class for errors raised by this package."""


class FieldMismatchError(InterleaveKitError, ValueError):
    pass


class DimensionMismatchError(InterleaveKitError, ValueError):
    pass


class PosetMismatchError(InterleaveKitError, ValueError):
    pass


class InvalidModuleError(InterleaveKitError, ValueError):
    pass


class InvalidIntervalError(InterleaveKitError, ValueError):
    pass


class OrderError(InterleaveKitError, ValueError):
    """Raised when a transition is requested for an incomparable pair."""


class EnumerationCapError(InterleaveKitError, RuntimeError):
    """An exhaustive search would exceed the configured candidate budget.

    This is never a "no" answer: the caller has to raise the cap (see
    ``INTERLEAVEKIT_ENUM_CAP``) or shrink the instance.
    """

    def __init__(self, what: str, candidates: int, cap: int):
        self.what = what
        self.candidates = candidates
        self.cap = cap
        super().__init__(
            f"{what}: {candidates} candidates exceed the enumeration cap {cap}; "
            f"raise INTERLEAVEKIT_ENUM_CAP or pass a larger cap"
        )


class FormatError(InterleaveKitError, ValueError):
    """A file does not follow the expected document format."""
