"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):
``ValidationError`` means the input is outside an operation's domain,
``NumericalError`` means the input was acceptable but the computation could
not be carried out to the requested tolerance.
"""


class ChfnError(Exception):
    """Base class for all library errors."""


class ValidationError(ChfnError, ValueError):
    pass


class NumericalError(ChfnError, ArithmeticError):
    pass


# hermitian_core
class ZeroVector(ValidationError):
    pass


class NotInGroup(ValidationError):
    def __init__(self, form_residual, det_residual):
        self.form_residual = form_residual
        self.det_residual = det_residual
        super().__init__(
            f"matrix not in SU(3,1): form residual {form_residual:.3e}, "
            f"det residual {det_residual:.3e}"
        )


class NotInClosedDomain(ValidationError):
    pass


class NotNegative(ValidationError):
    pass


class DegenerateSpan(NumericalError):
    pass


class DegeneratePair(NumericalError):
    pass


# isometry
class NearBoundaryAmbiguous(NumericalError):
    pass


class OutOfRegion(ValidationError):
    pass


class NotLoxodromic(ValidationError):
    pass


class DegenerateUnitEigenvalues(NumericalError):
    pass


# invariants
class DegeneratePairing(NumericalError):
    pass


class RealCrossRatioCase(ValidationError):
    pass


class SharedFixedPoint(ValidationError):
    pass


class NoValidAlpha(ValidationError):
    pass


class NoValidBeta(ValidationError):
    pass


class NotNonSingular(ValidationError):
    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or f"pair is singular: condition ({condition}) fails")


class UndefinedInvariant(NumericalError):
    pass


class InconsistentRealCrossRatios(NumericalError):
    pass


# reconstruction
class OffVariety(ValidationError):
    pass


class RealCrossRatioLocus(ValidationError):
    pass


class NotNonSingularResult(NumericalError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message, best_residual=None):
        self.best_residual = best_residual
        super().__init__(message)


# gluing
class IncompatibleBoundary(ValidationError):
    def __init__(self, message, curve=None):
        self.curve = curve
        super().__init__(message)


class PeripheralNotLoxodromic(ValidationError):
    pass


class BudgetMismatch(ValidationError):
    pass


class ReconstructionFailure(NumericalError):
    pass


# sampling
class ResampleExhausted(NumericalError):
    pass
