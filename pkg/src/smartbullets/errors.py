"""Exception types shared across the pipeline."""


class SmartBulletsError(Exception):
    """Base class for everything this package raises on purpose."""


class MalformedInput(SmartBulletsError):
    """Input file/body is not in the expected format at the top level."""


class BadRecord(MalformedInput):
    """A single record inside an otherwise well-formed input is broken."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"record {index}: {reason}")
        self.index = index
        self.reason = reason


class InvalidFraction(SmartBulletsError, ValueError):
    """Split fraction outside (0, 1)."""


class EmptyDataset(SmartBulletsError, ValueError):
    """An operation that needs at least one example got none."""


class IndexOutOfRange(SmartBulletsError, IndexError):
    """Embedding index outside [0, vocab_size)."""


class WindowTooWide(SmartBulletsError, ValueError):
    """Convolution width exceeds the sequence length."""


class ShapeMismatch(SmartBulletsError, ValueError):
    """Parameter / gradient / state shapes disagree."""


class FormatError(SmartBulletsError):
    """Model file is missing, truncated, or has wrong magic/version/shapes."""


class ModelLoadError(SmartBulletsError):
    """Server could not load its model at startup."""


class BindError(SmartBulletsError):
    """Server could not bind its listen address."""
