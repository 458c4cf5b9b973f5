"""Exception types shared across the package."""


class ArgDebateError(Exception):
    """Base class for all package errors."""


class FrameworkError(ArgDebateError, ValueError):
    """Invalid framework construction or an unknown argument."""


class ApxParseError(FrameworkError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormulaSyntaxError(ArgDebateError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"at position {position}: {message}"
        super().__init__(message)


class ResourceExceeded(ArgDebateError):
    """A configured size or count budget was exhausted before an answer was reached."""


class CheckTimeout(ArgDebateError):
    """The wall-clock deadline passed before an answer was reached."""


class IncompleteAssignment(ArgDebateError):
    """A temporal operator was evaluated while some agent had no bound strategy."""
