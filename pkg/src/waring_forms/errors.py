"""Exception hierarchy. Every error carries a machine-readable ``kind``."""


class WaringError(Exception):
    kind = "internal"


class ParseError(WaringError):
    kind = "parse"

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DegreeError(WaringError):
    kind = "degree"


class FieldError(WaringError):
    kind = "field"


class ConstraintError(WaringError):
    kind = "constraint"


class SearchExhausted(WaringError):
    kind = "search-exhausted"


class InternalError(WaringError):
    kind = "internal"
