"""Exception hierarchy shared by the algebra and the CLI.

Every error carries the process exit code the CLI reports for it.
"""


class ArtinLabError(Exception):
    exit_code = 1


class PreconditionError(ArtinLabError, ValueError):
    """An operation was called outside its documented domain."""

    exit_code = 2


class IncompatibleRingsError(PreconditionError):
    def __init__(self, message: str = "incompatible rings"):
        super().__init__(message)


class ParseError(PreconditionError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class MissingParameterError(PreconditionError):
    def __init__(self, parameter: str, context: str = ""):
        where = f" for {context}" if context else ""
        super().__init__(f"missing parameter '{parameter}'{where}")
        self.parameter = parameter


class ApproximationLevelError(PreconditionError):
    def __init__(self, detail: str = ""):
        message = "approximation level insufficient"
        super().__init__(f"{message}: {detail}" if detail else message)


class NonRegularError(PreconditionError):
    def __init__(self, detail: str = ""):
        message = "non-regular initial forms detected"
        super().__init__(f"{message}: {detail}" if detail else message)


class TruncationError(PreconditionError):
    def __init__(self, detail: str = ""):
        message = "truncation too small"
        super().__init__(f"{message}: {detail}" if detail else message)


class CertifiedRangeError(PreconditionError):
    pass


class BudgetExceededError(ArtinLabError):
    exit_code = 3

    def __init__(self, state_space_size: int, budget: int, what: str = "search"):
        super().__init__(
            f"{what} exceeds budget: state space size {state_space_size}, budget {budget}"
        )
        self.state_space_size = state_space_size
        self.budget = budget
