import os


class ArmError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(ArmError, ValueError):
    """Malformed or unsupported graph input."""


class IllegalMove(ArmError, ValueError):
    """A move was applied to a configuration outside its support."""


class InvalidInput(ArmError, ValueError):
    """A configuration, tableau or lower set that violates its invariants."""


class GuardExceeded(ArmError):
    """An exhaustive computation would exceed its configured size limit."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds limit {limit} (raise with --limit or ARM_LIMIT)")
        self.what = what
        self.size = size
        self.limit = limit


def guard_limit(default: int) -> int:
    """Return ``default`` unless the ``ARM_LIMIT`` environment variable overrides it."""
    raw = os.environ.get("ARM_LIMIT")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ArmError(f"ARM_LIMIT must be an integer, got {raw!r}") from None
        if value <= 0:
            raise ArmError("ARM_LIMIT must be positive")
        return value
    return default
