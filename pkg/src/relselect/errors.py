"""Exception types shared across the package."""


class RelSelectError(Exception):
    """Base class for every error raised by relselect."""


class RangeError(RelSelectError, IndexError):
    """A position or prefix length lies outside the structure."""


class NotFoundError(RelSelectError, LookupError):
    """A select asked for an occurrence that does not exist."""


class InvalidInputError(RelSelectError, ValueError):
    """Malformed input: bad lengths, inconsistent masks, reserved bytes."""


class UnsupportedAlphabetError(InvalidInputError):
    pass


class ResourceError(RelSelectError, RuntimeError):
    """A computation would exceed its configured budget."""


class UnsupportedQueryError(RelSelectError):
    """The index was built without the structures this query needs."""


class FormatError(InvalidInputError):
    """Serialized bytes are truncated or carry an unknown tag."""
