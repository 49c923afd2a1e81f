"""Exception types shared across the package."""


class TeleopError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TeleopError, ValueError):
    """A record could not be parsed; names the offending field when known."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        if field is not None:
            message = f"{message} (field: {field})"
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(TeleopError, ValueError):
    """Data has the wrong shape or cardinality (e.g. not 21 landmarks)."""


class ValidationError(TeleopError, ValueError):
    """A value violates a type invariant (e.g. non-positive depth)."""


class DomainError(TeleopError, ValueError):
    """An argument is outside an operation's domain (e.g. depth <= 0)."""


class DegenerateInputError(TeleopError, ValueError):
    """Input geometry carries no usable extent (coincident landmarks)."""


class DegeneratePlaneError(TeleopError, ArithmeticError):
    """Plane fit is singular: collinear footprint or a near-vertical plane."""


class DegenerateAxisError(TeleopError, ValueError):
    """Reference axis is parallel to the plane normal; no in-plane twist."""


class AlignmentError(TeleopError, ValueError):
    """Two trajectories share no usable time overlap."""


class CheckpointError(TeleopError, ValueError):
    """A model checkpoint is unreadable or its shapes do not match."""


class ModeError(TeleopError, ValueError):
    """An operation was invoked in a control mode that forbids it."""


class ProtocolError(TeleopError, ValueError):
    """A wire message is malformed or has an unsupported version."""


class TrainingError(TeleopError, ValueError):
    """Training preconditions are not met (empty dataset or class)."""
