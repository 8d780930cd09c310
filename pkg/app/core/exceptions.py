"""Exception hierarchy; each class carries a stable code for error reports"""


class FirefighterError(Exception):
    code = "error"
    exit_status = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def to_dict(self) -> dict:
        return {"code": self.code, "type": type(self).__name__, "message": self.message}


class GraphError(FirefighterError):
    code = "graph_invalid"


class GraphFormatError(GraphError):
    code = "graph_format"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PreconditionError(FirefighterError):
    code = "precondition"


class DensityPreconditionError(PreconditionError):
    code = "density_precondition"


class DomainError(PreconditionError):
    code = "rate_domain"


class IllegalProtectionError(FirefighterError):
    code = "illegal_protection"


class ClassMembershipError(FirefighterError):
    code = "class_membership"


class RejectionCapError(FirefighterError):
    code = "rejection_cap"


class InvariantViolation(FirefighterError):
    """A proof inequality or closed-form identity did not hold."""

    code = "invariant"


class ConfigError(FirefighterError):
    code = "config"
    exit_status = 2
