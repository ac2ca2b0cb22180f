"""Exception hierarchy shared by all modules."""


class SoftCompError(Exception):
    """Base class for every error raised by softcomp."""


class DomainError(SoftCompError, ValueError):
    """A value lies outside the carrier, alphabet or state set it must belong to."""


class IncomposableError(SoftCompError):
    """Composition requested for two actions that are not composable."""

    def __init__(self, a, b):
        super().__init__(f"actions {a!r} and {b!r} are not composable")
        self.pair = (a, b)


class UnderspecifiedError(SoftCompError):
    """The composability closure produced pairs without a composition result."""

    def __init__(self, pairs):
        listed = ", ".join(f"({a}, {b})" for a, b in pairs)
        super().__init__(f"no composition result given for forced pairs: {listed}")
        self.pairs = list(pairs)


class CompositionError(SoftCompError):
    """Two automata cannot be composed (different CAS or semiring)."""


class CapacityError(SoftCompError):
    """An automaton construction exceeded the configured state ceiling."""

    def __init__(self, stage, limit):
        super().__init__(f"construction {stage!r} exceeded the limit of {limit} states")
        self.stage = stage
        self.limit = limit


class FormulaSyntaxError(SoftCompError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnsupportedConnectiveError(SoftCompError):
    """The direct evaluator was handed a formula using captures/composable."""


class PreconditionError(SoftCompError):
    pass


class SchemaError(SoftCompError):
    """A system file does not follow the expected layout."""


class DanglingReferenceError(SchemaError):
    pass


class CasAxiomError(SchemaError):
    """The CAS of a system file violates the axioms; ``report`` lists the violations."""

    def __init__(self, report):
        super().__init__(f"CAS violates its axioms:\n{report}")
        self.report = report
