"""Exception hierarchy shared by every module.

Each class maps to one failure family so the command-line layer can turn it
into a stable exit code.
"""


class MdtError(Exception):
    """Base class for all library errors."""


class InvalidArgument(MdtError, ValueError):
    pass


class BoundsError(MdtError, IndexError):
    pass


class NotFound(MdtError, LookupError):
    pass


class EncodingError(MdtError, ValueError):
    pass


class DecodingError(MdtError, ValueError):
    pass


class ContractViolation(MdtError):
    """Raised when a caller breaks a documented pre-condition (e.g. deleting
    something that was never inserted)."""


class CapacityError(MdtError):
    """A fixed-capacity structure is full."""


class CorruptArtifact(MdtError, ValueError):
    """Serialized bytes failed magic/version/structure validation."""
