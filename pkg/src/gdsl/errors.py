"""Exception hierarchy shared across the package."""


class GdslError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(GdslError):
    """An argument violates an operation's precondition."""


class DegenerateGeometry(GdslError):
    """Geometry too small or malformed to operate on (e.g. zero-length edge)."""


class ValidationFailed(GdslError):
    """An object failed a validation the operation requires to proceed."""

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class ParseError(GdslError):
    """A document could not be parsed. Carries field and/or line context."""

    def __init__(self, message: str, *, field: str | None = None,
                 line: int | None = None, code: str = "BAD_DOCUMENT"):
        ctx = []
        if field is not None:
            ctx.append(f"field={field}")
        if line is not None:
            ctx.append(f"line={line}")
        suffix = f" ({', '.join(ctx)})" if ctx else ""
        super().__init__(f"{code}: {message}{suffix}")
        self.field = field
        self.line = line
        self.code = code


class SchemaError(GdslError):
    """A design schema document violates the schema contract."""


class TokenDomainError(GdslError):
    """A token lies outside its parameter's admissible domain."""

    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (token index {index})")
        self.index = index


class ProjectionError(GdslError):
    """A descriptive answer label could not be mapped to a parameter value."""

    def __init__(self, path: str, label):
        super().__init__(f"cannot project label {label!r} for parameter {path!r}")
        self.path = path
        self.label = label


class DraftError(GdslError):
    """A component cannot be drafted from the given configuration/body."""


class AssemblyError(GdslError):
    """Components cannot be joined into a pattern (dangling or mismatched interfaces)."""


class AgentError(GdslError):
    """The design agent transport failed."""


class EditError(GdslError):
    """An edit command cannot be applied to the configuration."""
