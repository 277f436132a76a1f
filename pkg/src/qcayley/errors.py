"""Exception hierarchy shared by every module of the package."""


class QuaternionicError(Exception):
    """Base class for all errors raised by qcayley."""


class ZeroQuaternion(QuaternionicError, ZeroDivisionError):
    """Inversion of a quaternion whose modulus is below tolerance."""


class DimensionMismatch(QuaternionicError, ValueError):
    pass


class RankDeficient(QuaternionicError, ValueError):
    """A set of vectors is right-linearly dependent within tolerance."""


class NotOrthonormal(QuaternionicError, ValueError):
    pass


class NotSymplectic(QuaternionicError, ValueError):
    """A complex matrix is not the image of a quaternionic matrix."""


class OddComplexRank(QuaternionicError, ArithmeticError):
    """The complex rank of an adjoint representation came out odd."""


class Singular(QuaternionicError, ArithmeticError):
    pass


class InternalSingular(Singular):
    """A shifted operator that theory says is invertible was not."""


class NotInDomain(QuaternionicError, ValueError):
    pass


class NotInClass(QuaternionicError, ValueError):
    pass


class NotInClassY(NotInClass):
    pass


class NotIsometric(QuaternionicError, ValueError):
    pass


class RangeNotDense(QuaternionicError, ValueError):
    """ran(I - U) falls short of the required dimension."""


class InvalidLambda(QuaternionicError, ValueError):
    pass


class InvalidOperator(QuaternionicError, ValueError):
    """A serialized operator failed validation on load."""
