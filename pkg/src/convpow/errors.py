"""Exception hierarchy.

Assumption violations (the symbol is not normalized, every point of the circle
is a tangency point, or the expansion at a tangency point is not parabolic)
subclass :class:`AssumptionViolation`; the CLI maps those to exit code 2.
"""


class ConvPowError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class AssumptionViolation(ConvPowError):
    code = "assumption_violation"


class NotNormalized(AssumptionViolation):
    """sup |F_a| on the unit circle differs from 1."""

    code = "NotNormalized"

    def __init__(self, sup_modulus, message=None):
        self.sup_modulus = float(sup_modulus)
        self.factor = 1.0 / self.sup_modulus if self.sup_modulus > 0 else float("inf")
        if message is None:
            message = (
                f"sup |F_a| = {self.sup_modulus!r} on the unit circle; "
                f"multiply the sequence by {self.factor!r} to normalize"
            )
        super().__init__(message)

    def to_dict(self):
        d = super().to_dict()
        d.update(sup_modulus=self.sup_modulus, factor=self.factor)
        return d


class AllModulusOne(AssumptionViolation):
    """|F_a| = 1 on the whole unit circle; no finite set of tangency points."""

    code = "ALL_MODULUS_ONE"


class DriftNotReal(AssumptionViolation):
    code = "DriftNotReal"


class DispersiveCase(AssumptionViolation):
    code = "DispersiveCase"


class DegenerateSymbol(AssumptionViolation):
    code = "DegenerateSymbol"


class ZeroConstantTerm(ConvPowError):
    code = "ZeroConstantTerm"


class InsufficientCumulants(ConvPowError):
    code = "InsufficientCumulants"


class PlanIncomplete(ConvPowError):
    code = "PlanIncomplete"


class DegenerateData(ConvPowError):
    code = "DegenerateData"


class ParamOutOfRange(ConvPowError, ValueError):
    code = "ParamOutOfRange"


class ParseError(ConvPowError, ValueError):
    code = "ParseError"
