"""Exception hierarchy shared by all modules.

Validation-type problems (bad arguments, bad configs) derive from
``ValueError`` so callers can treat them uniformly; numerical failures
derive from ``RuntimeError``.  The CLI maps the two families to exit
codes 1 and 2.
"""


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class ValidationError(ValueError):
    """Invalid specification or configuration.

    ``fields`` names every offending field so a config error can be fixed
    in one pass.
    """

    def __init__(self, message, fields=()):
        self.fields = tuple(fields)
        if self.fields:
            message = f"{message} (fields: {', '.join(self.fields)})"
        super().__init__(message)


class NumericError(RuntimeError):
    """A numerical procedure failed to deliver its accuracy contract."""

    def __init__(self, message, **diagnostics):
        self.diagnostics = diagnostics
        if diagnostics:
            detail = ", ".join(f"{k}={v!r}" for k, v in diagnostics.items())
            message = f"{message} [{detail}]"
        super().__init__(message)


class ResolutionError(NumericError):
    """Grid too coarse for the requested number of states."""


class ConvergenceError(NumericError):
    """Iteration cap reached without meeting the tolerance."""
