"""Exception types shared across the package."""


class MsrLabError(Exception):
    """Base class for all library errors."""


class ShapeError(MsrLabError, ValueError):
    """Operands have incompatible dimensions."""


class FieldError(MsrLabError, ValueError):
    """Invalid field construction, or operands from different fields."""


class ParamError(MsrLabError, ValueError):
    """Invalid parameter combination."""


class RangeError(MsrLabError, ValueError):
    """Index argument outside its documented range."""


class DivisionByZero(MsrLabError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class SingularError(MsrLabError, ValueError):
    """Matrix inversion attempted on a singular matrix."""


class SingularSystem(MsrLabError, ValueError):
    """Erasure decoding hit a non-invertible survivor system."""


class NotInvariant(MsrLabError, ValueError):
    """Operator image is not contained in the subspace."""


class SchemeInvalid(MsrLabError, ValueError):
    """Repair scheme lacks a required alignment witness."""


class SingularStack(MsrLabError, RuntimeError):
    """Internal inconsistency: repair system singular although verification passed."""


class FamilyTooLarge(MsrLabError, ValueError):
    """Certificate family exceeds the configured size cap."""


class NonSpanningBlock(MsrLabError, ValueError):
    """Partition block flagged standard fails to span the full space."""


class TooLarge(MsrLabError, ValueError):
    """Exhaustive enumeration exceeds the candidate cap."""


class CodeFileError(MsrLabError, ValueError):
    """Malformed code file."""
