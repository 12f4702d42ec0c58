"""Exception hierarchy for hullsmith.

Three families, each mapped to a CLI exit code by ``hullman.py``:

- ``PreconditionError`` (exit 2): the caller asked for something the
  construction does not admit.
- ``GuaranteeViolation`` (exit 3): a proven statement failed on a concrete
  instance. These are defects, never expected at runtime.
- ``VerificationFailed`` (exit 1): a verification suite found a mismatch.
"""


class HullsmithError(Exception):
    """Base class for all hullsmith errors."""

    exit_code = 1


class PreconditionError(HullsmithError, ValueError):
    exit_code = 2


class GuaranteeViolation(HullsmithError, RuntimeError):
    exit_code = 3


class VerificationFailed(HullsmithError):
    exit_code = 1


# finite-field
class NonPrime(PreconditionError):
    pass


class DegreeTooLarge(PreconditionError):
    pass


class NotInSubfield(PreconditionError):
    pass


class ZeroElement(PreconditionError):
    pass


# ff-linalg
class NotQuadraticTower(PreconditionError):
    pass


class BadExponent(PreconditionError):
    pass


# grs-core
class NegativePowerWithZeroPoint(PreconditionError):
    pass


class ModeInfeasible(PreconditionError):
    pass


class ZeroScale(PreconditionError):
    pass


class BadPosition(PreconditionError):
    pass


class InnerProductMismatch(PreconditionError):
    pass


# hull-rules
class LambdaNotInSubfield(PreconditionError):
    pass


class FieldFull(PreconditionError):
    pass


class DimensionFull(PreconditionError):
    pass


class CornerNotCancellable(PreconditionError):
    pass


class TargetAboveCurrent(PreconditionError):
    pass


class HullShapeMismatch(PreconditionError):
    pass


class NotFullField(PreconditionError):
    pass


class OutOfRange(PreconditionError):
    pass


class SearchExhausted(GuaranteeViolation):
    pass


class PredictionMismatch(GuaranteeViolation):
    pass


# families
class BadParameters(PreconditionError):
    pass


class NoAllNonzeroSolution(PreconditionError):
    pass


# eaqecc
class BadFamilyParams(PreconditionError):
    pass


class RangeViolation(PreconditionError):
    pass


class UnknownDistance(PreconditionError):
    pass


class BoundViolation(GuaranteeViolation):
    pass
