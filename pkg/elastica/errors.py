"""
Exception hierarchy for curve, transform and matching failures.

Every error carries the process exit code the command line reports for it:
2 for bad input, 3 for violated geometric invariants and 4 for numerical
non-convergence.
"""

from typing import Any, Optional


class ElasticaError(Exception):
    """Base class for all library errors"""

    exit_code = 1


class InputError(ElasticaError, ValueError):
    """Malformed input: unreadable files, bad layouts or invalid parameters"""

    exit_code = 2


class CurveFileError(InputError):
    """A curve file could not be parsed into a valid curve"""


class DatasetLayoutError(InputError):
    """A dataset directory cannot support leave-one-out classification"""


class ParamRegime(InputError):
    """The requested operation is undefined for these elastic parameters"""


class OffSphere(InputError):
    """A transform that should lie on the sphere of radius 2b does not"""


class GeometryError(ElasticaError, ValueError):
    """A geometric invariant of the input is violated"""

    exit_code = 3


class ZeroEdge(GeometryError):
    """Two consecutive vertices coincide on a positive-length interval"""

    def __init__(self, index: int, message: Optional[str] = None):
        self.index = index
        super().__init__(message or f"zero-length edge at index {index}")


class NotClosed(GeometryError):
    """A closed curve was required but the endpoints do not meet"""

    def __init__(self, gap: float, tolerance: float):
        self.gap = gap
        self.tolerance = tolerance
        super().__init__(f"endpoint gap {gap:.3e} exceeds tolerance {tolerance:.3e}")


class SegmentMismatch(GeometryError):
    """Two curves were expected to have the same number of segments"""

    def __init__(self, first: int, second: int):
        self.first = first
        self.second = second
        super().__init__(f"segment counts differ: {first} != {second}")


class SingularTransform(GeometryError):
    """A transform sample is zero where a nonzero value is required"""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"transform vanishes on segment {index}")


class NumericalError(ElasticaError, ArithmeticError):
    """An iterative or numerical procedure failed"""

    exit_code = 4


class NoConvergence(NumericalError):
    """
    The closure projection did not reach its tolerance.

    The best iterate found is kept on the exception so callers can inspect
    or reuse it.
    """

    def __init__(self, residual: float, iterations: int, best: Any = None,
                 u: Optional[float] = None):
        self.residual = residual
        self.iterations = iterations
        self.best = best
        self.u = u
        where = f" at u={u:.4f}" if u is not None else ""
        super().__init__(
            f"projection stopped{where} after {iterations} iterations "
            f"with residual {residual:.3e}")


class SingularJacobian(NumericalError):
    """The 2x2 closure Gram matrix is rank-deficient"""

    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(f"closure Gram matrix condition number {condition:.3e}")


class Antipodal(NumericalError):
    """The sphere geodesic between two antipodal points is not unique"""

    def __init__(self, angle: float):
        self.angle = angle
        super().__init__(f"points are antipodal (angle {angle:.6f})")


class StraighteningFailed(NumericalError):
    """Path straightening stalled above its energy bound"""

    def __init__(self, energy: float, bound: float):
        self.energy = energy
        self.bound = bound
        super().__init__(f"path energy {energy:.6e} stalled above bound {bound:.6e}")


class DegenerateInner(UserWarning):
    """The inner product of two transforms vanishes; every rotation is optimal"""
