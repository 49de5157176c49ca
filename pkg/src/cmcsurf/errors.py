"""Shared exception types.

Everything raised on purpose by this package derives from CmcError, so
callers can catch one base class at the CLI boundary.
"""


class CmcError(Exception):
    """Base class for errors raised by cmcsurf."""


class DomainError(CmcError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class RegimeError(DomainError):
    """Operation defined only for the standard modulus regime 0 <= k^2 <= 1."""


class PoleError(CmcError, ArithmeticError):
    """Evaluation lands on (or numerically inside a guard window of) a pole."""


class BranchError(PoleError):
    """Evaluation interval crosses a pole; shift by the period named in the message."""


class SingularIntegralError(CmcError, ArithmeticError):
    """Integration path hits a non-integrable singularity (characteristic pole)."""


class MinimalObstructionError(CmcError, ArithmeticError):
    """The one-form dn + n x (*dn) vanishes, so no nonzero mean curvature fits."""


class MeanCurvatureZeroError(DomainError):
    """H = 0 (or numerically indistinguishable from 0) where 1/H is needed."""


class BoundaryParameterError(DomainError):
    """Parameter sits on the degenerate boundary of the admissible region."""


class DegenerateError(CmcError, ArithmeticError):
    """Construction collapses (zero determinant, point orbit, identity map)."""


class EmptyMeshError(CmcError, ValueError):
    """Mesh operation received or produced no usable geometry."""
