"""Exception types raised across the package."""


class DomainError(ValueError):
    """Input is well formed but the operation is undefined for it (e.g. zero norm)."""


class CorruptHistogramError(ValueError):
    """Measurement counts that no valid encoding state could have produced."""


class ParseError(ValueError):
    """Malformed file content. ``offset`` is the byte position where parsing failed."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.reason = message
        self.offset = offset


class ResourceError(MemoryError):
    """Requested register is too large to simulate densely."""
