"""Exception hierarchy shared by every module.

Each class carries an ``exit_code`` used by the command line front end.
"""


class IdealOrbitError(Exception):
    exit_code = 2


class ValidationError(IdealOrbitError):
    """Bad user input (job file field, polynomial text, arity...)."""

    def __init__(self, message, field=None, offset=None):
        self.field = field
        self.offset = offset
        parts = []
        if field is not None:
            parts.append(f"[{field}]")
        parts.append(message)
        if offset is not None:
            parts.append(f"(at byte {offset})")
        super().__init__(" ".join(parts))


class UnknownVariable(ValidationError):
    pass


class MalformedExpression(ValidationError):
    pass


class ExponentOutOfRange(ValidationError):
    pass


class RingMismatch(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class NotAField(ValidationError):
    pass


class NotZeroDimensional(ValidationError):
    pass


class NoInverse(ValidationError):
    pass


class SmallPrime(ValidationError):
    """A prime below 5 where arcs are unavailable; reported like a bad prime."""

    exit_code = 3


class PreconditionFailed(ValidationError):
    pass


class EnumerationTooLarge(ValidationError):
    pass


class NotAnAutomorphism(ValidationError):
    """Claimed inverse images fail to compose to the identity.

    ``witness`` names the first variable where a composition differs from it.
    """

    def __init__(self, message, witness=None, field="sigma_inv"):
        self.witness = witness
        super().__init__(message, field=field)


class BadPrime(IdealOrbitError):
    exit_code = 3


class DegreeOverflow(IdealOrbitError):
    exit_code = 4


class Indeterminate(IdealOrbitError):
    exit_code = 5


class PrecisionExhausted(Indeterminate):
    pass


class InternalDefect(IdealOrbitError):
    """A proven invariant failed numerically; never silently truncated."""

    exit_code = 6


class SingularJacobian(InternalDefect):
    pass
