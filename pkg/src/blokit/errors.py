"""Exception types shared across the package."""


class BlokitError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(BlokitError, ValueError):
    """Text or bytes do not conform to the expected encoding."""


class DimensionError(BlokitError, ValueError):
    """Operands have incompatible lengths."""


class InvalidArgumentError(BlokitError, ValueError):
    """A parameter is outside its documented domain."""


class IncomparableTemplatesError(BlokitError, ValueError):
    """Templates differ in parameters or length and cannot be compared."""


class CapacityError(BlokitError):
    """The request exceeds the exhaustive-enumeration bound."""


class RecordNotFoundError(BlokitError, LookupError):
    """No enrollment record exists for the requested (device, user) pair."""


class StorageError(BlokitError):
    """An enrollment store could not be read or written."""


class ManifestError(BlokitError, ValueError):
    """A store manifest line could not be parsed."""

    def __init__(self, line_no: int, reason: str) -> None:
        super().__init__(f"manifest line {line_no}: {reason}")
        self.line_no = line_no
