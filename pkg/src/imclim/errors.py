"""Exception hierarchy shared across the package."""


class ImclimError(Exception):
    """Base class for every error raised by this package."""


class ModelValidationError(ImclimError, ValueError):
    """A model file or in-memory model violates the input contract."""


class DimensionMismatchError(ImclimError, ValueError):
    """A function vector does not match the operator's state space."""


class PreconditionError(ImclimError, ValueError):
    """A documented precondition of an operation was violated by the caller."""


class NotWellDefinedError(PreconditionError):
    """Restriction to a class left some retained state without any pmf."""

    def __init__(self, state_label: str, class_labels: tuple[str, ...]):
        self.state_label = state_label
        self.class_labels = class_labels
        super().__init__(
            "restriction to {{{}}} is not well defined: no candidate pmf at "
            "state '{}' is supported inside the class".format(
                ", ".join(class_labels), state_label
            )
        )


class UnsupportedOperatorError(ImclimError, TypeError):
    """The operator lacks a required capability (exact predicates, restriction rules).

    When raised while decomposing, ``partial`` carries the levels completed
    before the failure.
    """

    def __init__(self, message: str, partial: tuple = ()):
        super().__init__(message)
        self.partial = partial


class InternalInvariantError(ImclimError, RuntimeError):
    """A guaranteed internal invariant failed; this signals a bug, not bad input."""
