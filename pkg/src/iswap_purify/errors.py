"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class UnsupportedSize(ValueError):
    """Raised when a dense simulation would exceed the supported qubit count."""


class PreconditionError(ValueError):
    pass


class SingularDetuning(ZeroDivisionError):
    pass


class CutoffTooSmall(RuntimeError):
    """Fock-space truncation leaks population above the tolerated level."""


class ParseError(InvalidArgument):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
