"""Shared exception types."""


class InputError(ValueError):
    """Raised when an input violates a documented precondition.

    ``details`` optionally carries a machine-readable witness (for example the
    relation-property report that disqualified an alleged equivalence).
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details
