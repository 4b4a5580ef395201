"""Exception types shared across the package."""


class EntscanError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(EntscanError):
    """Bad arguments, failed validation, or a size limit was exceeded."""


class NumericalError(EntscanError):
    """A dense linear-algebra routine failed to converge."""
