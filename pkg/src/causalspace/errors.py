"""Exception hierarchy shared by the engine, the DSL and the CLI."""


class CausalSpaceError(Exception):
    """Base class for every error raised by this package."""


class UniverseMismatch(CausalSpaceError):
    """Operands live in different outcome universes."""


class UniverseTooLarge(CausalSpaceError):
    pass


class EmptyCondition(CausalSpaceError):
    """Conditioning on the impossible event."""


# -- causal space construction ---------------------------------------------


class NoveltyViolation(CausalSpaceError):
    """A primitive event is already expressible by its predecessors."""

    def __init__(self, level, message=None):
        self.level = level
        super().__init__(
            message
            or f"event {level} lies in the algebra generated by the events before it"
        )


class TooManyEvents(CausalSpaceError):
    pass


class MissingEntry(CausalSpaceError):
    def __init__(self, level, atom, message=None):
        self.level = level
        self.atom = atom
        super().__init__(message or f"no cause value for level {level} given atom {atom}")


class DuplicateEntry(CausalSpaceError):
    def __init__(self, level, atom, message=None):
        self.level = level
        self.atom = atom
        super().__init__(message or f"cause value for level {level} given atom {atom} supplied twice")


class OutOfRange(CausalSpaceError):
    def __init__(self, value, message=None):
        self.value = value
        super().__init__(message or f"cause value {value} is outside [0, 1]")


class ContradictsTruth(CausalSpaceError):
    """A supplied value disagrees with the value forced by the truth function."""

    def __init__(self, level, atom, forced, message=None):
        self.level = level
        self.atom = atom
        self.forced = forced
        super().__init__(
            message
            or f"level {level} given atom {atom} is resolved; its cause value must be {forced}"
        )


class NotAnAtom(CausalSpaceError):
    """An event was expected to be a block of a given level's partition."""


class LevelOutOfRange(CausalSpaceError):
    pass


class RepeatedLevel(CausalSpaceError):
    """A composite intervention names the same level twice."""


# -- belief queries ---------------------------------------------------------


class EventNotMeasurable(CausalSpaceError):
    """The event is not a union of finest atoms."""


class UndeterminedConditional(CausalSpaceError):
    """Conditioning on a zero-mass event that is not a path event."""


class ZeroEvidence(CausalSpaceError):
    pass


class InvalidPartition(CausalSpaceError):
    pass


class ZeroMassCondition(CausalSpaceError):
    """Raised by the reference oracle, which refuses zero-mass conditioning."""


# -- surface syntax ---------------------------------------------------------


class SourceError(CausalSpaceError):
    """An error located in model or query text.

    ``kind`` is one of ``lex``, ``parse``, ``resolve`` or ``validate``.
    Line and column are 1-based.
    """

    def __init__(self, kind, message, line=1, column=1, error=None):
        self.kind = kind
        self.message = message
        self.line = line
        self.column = column
        self.error = error
        super().__init__(f"line {line}, col {column}: {kind} error: {message}")


class AmbiguousCondition(SourceError):
    def __init__(self, message, line=1, column=1):
        super().__init__("validate", f"AmbiguousCondition: {message}", line, column)


class StaleCondition(SourceError):
    def __init__(self, message, line=1, column=1):
        super().__init__("validate", f"StaleCondition: {message}", line, column)


class QueryError(CausalSpaceError):
    """An engine error raised while evaluating a query, with the query text attached."""

    def __init__(self, query, error):
        self.query = query
        self.error = error
        super().__init__(f"{type(error).__name__}: {error} (in query {query!r})")
