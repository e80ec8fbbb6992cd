"""Exception types shared across the package."""


class EthicsTriageError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(EthicsTriageError):
    """A referenced input file is missing or unreadable."""


class ManifestParseError(EthicsTriageError):
    """The corpus manifest is not well-formed JSON; message carries line context."""


class ValidationError(EthicsTriageError):
    """An input violates a domain invariant (duplicate ids, bad topic ids, ...)."""


class FingerprintMismatch(EthicsTriageError):
    """A bag-of-words document was built against a different vocabulary than the model."""
