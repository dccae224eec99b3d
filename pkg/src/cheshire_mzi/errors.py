"""Exception hierarchy for cheshire_mzi."""


class CheshireError(Exception):
    """Base class for all errors raised by this package."""


class LabelError(CheshireError, ValueError):
    """Subsystem labels are inconsistent with the requested operation."""


class DuplicateLabel(LabelError):
    pass


class LabelNotInTarget(LabelError):
    pass


class LabelNotInState(LabelError):
    pass


class LabelMismatch(LabelError):
    pass


class NonHermitianObservable(CheshireError, ValueError):
    pass


class VanishingOverlap(CheshireError, ArithmeticError):
    """The pre/post overlap is numerically zero, so the weak value diverges."""


class ZeroProbability(CheshireError, ArithmeticError):
    """Postselection succeeds with (numerically) zero probability."""


class NoPostselectedEvents(CheshireError, ArithmeticError):
    """No sampled trial survived postselection."""


class CircuitError(CheshireError, ValueError):
    """Problem with a circuit program; carries the offending source line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class CircuitSyntaxError(CircuitError):
    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        self.column = column
        self.expected = expected
        self.found = found
        msg = f"column {column}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg, line)


class UnknownObservable(CircuitError):
    pass


class DuplicateSelection(CircuitError):
    """A second preselect or postselect statement."""


class MissingSelection(CircuitError):
    """The program lacks a preselect or postselect statement."""


class CircuitRuntimeError(CircuitError):
    """A scenario error raised while running a compiled program."""

    def __init__(self, line: int, cause: Exception):
        self.cause = cause
        super().__init__(f"{type(cause).__name__}: {cause}", line)


class DuplicatePreselect(DuplicateSelection):
    pass


class DuplicatePostselect(DuplicateSelection):
    pass


class MissingPreselect(MissingSelection):
    pass


class MissingPostselect(MissingSelection):
    pass
