"""Exception hierarchy shared by the library and the CLI."""


class ThermflowError(Exception):
    """Base class for every error raised by thermflow."""


class ValidationError(ThermflowError):
    """A configuration violates one or more object invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class RoleMismatchError(ThermflowError):
    """An id exists but names an object of a different role."""


class SceneError(ThermflowError):
    """Syntax or resolution error in a scene, predicate or formula text."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        super().__init__(where + message)


class EngineError(ThermflowError):
    """Base class for violations of the hybrid semantics."""


class UrgencyViolation(EngineError):
    """Time was asked to advance while an instantaneous rule is enabled."""


class RuleNotEnabled(EngineError):
    """A rule instance was applied whose guard does not hold."""


class LivelockError(EngineError):
    """Discrete normalization did not reach a quiescent configuration."""


class InconclusiveError(EngineError):
    """An unbounded search hit its step cap without finding a solution."""
