"""Exception hierarchy.

``exit_code`` is what the command line front end returns when the error
escapes: 1 for a verification failure, 2 for bad input, 3 for a broken
internal invariant (a result that would contradict the underlying theorem).
"""


class FanoForgeError(Exception):
    exit_code = 3


class InputError(FanoForgeError):
    exit_code = 2


class ConstructionError(InputError):
    """Bad field parameters (reducible or wrong-degree modulus, bad k)."""


class TableFormatError(InputError):
    pass


class VerificationError(FanoForgeError):
    exit_code = 1


class AxiomViolation(VerificationError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class VerificationFailed(VerificationError):
    pass


class DegenerateSlope(FanoForgeError, ValueError):
    exit_code = 2


class DegeneratePair(FanoForgeError, ValueError):
    exit_code = 2


class NotAnEdge(FanoForgeError, ValueError):
    exit_code = 2


class AbsoluteEndpoint(FanoForgeError, ValueError):
    exit_code = 2


class BadTriangle(FanoForgeError, ValueError):
    exit_code = 2


class OutOfScope(FanoForgeError, ValueError):
    exit_code = 2


class InvariantBreach(FanoForgeError):
    exit_code = 3


class NotOrthogonal(InvariantBreach):
    def __init__(self, count, expected):
        super().__init__(f"polarity has {count} absolute points, expected {expected}")
        self.count = count
        self.expected = expected


class AbsolutesNotCollinear(InvariantBreach):
    pass


class PartitionDefect(InvariantBreach):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FormulaMismatch(InvariantBreach):
    def __init__(self, what, actual, expected):
        super().__init__(f"{what}: got {actual}, formula gives {expected}")
        self.actual = actual
        self.expected = expected


class BoundViolated(InvariantBreach):
    pass


class CapViolated(InvariantBreach):
    pass


class NoFanoFound(InvariantBreach):
    pass
