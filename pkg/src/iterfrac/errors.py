"""Exception hierarchy.

Every domain failure derives from :class:`IterfracError`; the CLI reports
``type(err).__name__`` on stderr and exits with status 1.
"""


class IterfracError(ArithmeticError):
    pass


class ModeMismatch(IterfracError, TypeError):
    """Exact and numeric values were mixed."""


class ExactInfeasible(IterfracError):
    """An irrational power was requested in exact mode."""


class ZeroBase(IterfracError, ZeroDivisionError):
    pass


class ConstantTermNonzero(IterfracError):
    pass


class NotInvertible(IterfracError):
    pass


class NotFixedPoint(IterfracError):
    pass


class DerivativeZero(IterfracError):
    pass


class BadRange(IterfracError, ValueError):
    pass


class QDegenerate(IterfracError):
    """q is a root of unity small enough to kill a q-factorial."""


class SizeMismatch(IterfracError, ValueError):
    pass


class NegativeExponent(IterfracError, ValueError):
    pass


class UnitaryRequired(IterfracError):
    """The formula only holds when f'(0) = 1."""


class NonunitaryRequired(IterfracError):
    pass


class ExtractedPole(IterfracError, ZeroDivisionError):
    pass


class OrderTooLarge(IterfracError, ValueError):
    pass


class MethodDisagreement(IterfracError):
    """Two formulas that must agree produced different triangles."""


class BasicSequenceViolation(IterfracError):
    """A computed basic sequence failed one of its defining conditions."""
