class ParameterError(ValueError):
    """An argument is outside the documented domain of an operation."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed an enumeration cap or memory budget."""
