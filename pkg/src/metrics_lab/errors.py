"""Exception hierarchy.

Every validation failure derives from :class:`ValidationError` (also a
``ValueError``); numerical non-convergence is :class:`ConvergenceFailure`.
The CLI maps the first family to exit code 3 and the second to 4.
"""


class MetricsLabError(Exception):
    pass


class ValidationError(MetricsLabError, ValueError):
    pass


class InvalidParameter(ValidationError):
    pass


class DomainMembership(ValidationError):
    pass


class NonConvexDomain(ValidationError):
    pass


class InvalidWindow(ValidationError):
    pass


class UnsupportedCombination(ValidationError):
    pass


class UnsupportedDimension(ValidationError):
    pass


class PoleAtInput(ValidationError):
    pass


class DegenerateMap(ValidationError):
    pass


class ConvergenceFailure(MetricsLabError, ArithmeticError):
    pass
