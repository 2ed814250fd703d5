"""Exception types raised by the library."""


class ShapeError(Exception):
    """Base class for all library errors."""


class AmbiguousLog(ShapeError, ValueError):
    """The principal logarithm is not unique (a rotation angle equals pi)."""


class NotSPD(ShapeError, ValueError):
    """A matrix expected to be symmetric positive definite is not."""


class DimMismatch(ShapeError, ValueError):
    """Operands have incompatible shapes."""


class GroupMismatch(ShapeError, ValueError):
    """Operands live in different groups."""


class SubgroupMismatch(ShapeError, ValueError):
    """An element is not in the isotropy subgroup K."""


class NotInGroup(ShapeError, ValueError):
    """A matrix violates the membership constraints of its group."""


class AntipodalPoints(ShapeError, ValueError):
    """No unique shortest rotation exists between antipodal points."""


class InvalidGamma(ShapeError, ValueError):
    """A reparametrization is not a nondecreasing surjection of [0, 1]."""


class NotOneDimensional(ShapeError, ValueError):
    """An evaluation-based search over K was requested but dim K != 1."""


class SingularJacobian(ShapeError, ArithmeticError):
    """The differential used by the inverse exponential iteration is singular."""


class NoConvergence(ShapeError, ArithmeticError):
    """An iteration hit its cap before meeting its tolerance.

    ``best`` holds the best iterate found, when one is available.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
