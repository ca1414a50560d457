"""
Domain models for elastic shape analysis of piecewise-linear plane curves.

Curves and transforms are immutable values: every array is copied on
construction and marked read-only, so operations can share them freely.
"""

from dataclasses import dataclass, field, replace
from enum import Enum, auto
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import InputError, NotClosed, ZeroEdge

# Raw closed input is accepted when the endpoint gap is below this
# fraction of the arclength.
CLOSURE_TOLERANCE = 1e-8


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def as_complex(points: Union[Sequence, np.ndarray]) -> np.ndarray:
    """Interpret a point list as complex numbers (accepts complex or (n, 2) real input)"""
    array = np.asarray(points)
    if np.iscomplexobj(array):
        return array.astype(complex).ravel()
    array = array.astype(float)
    if array.ndim == 2 and array.shape[1] == 2:
        return array[:, 0] + 1j * array[:, 1]
    if array.ndim == 1:
        return array.astype(complex)
    raise InputError(f"cannot interpret array of shape {array.shape} as plane points")


def _check_params(params: np.ndarray, size: int, what: str) -> np.ndarray:
    params = np.asarray(params, dtype=float).ravel()
    if params.size != size:
        raise InputError(f"{what}: expected {size} breakpoints, got {params.size}")
    if abs(params[0]) > 1e-12 or abs(params[-1] - 1.0) > 1e-12:
        raise InputError(f"{what}: breakpoints must start at 0 and end at 1")
    if np.any(np.diff(params) <= 0):
        raise InputError(f"{what}: breakpoints must be strictly increasing")
    params = params.copy()
    params[0], params[-1] = 0.0, 1.0
    return params


def uniform_params(segments: int) -> np.ndarray:
    """Uniform breakpoints for a curve with the given number of segments"""
    return np.linspace(0.0, 1.0, segments + 1)


class SpaceTag(Enum):
    """Transform-space geometry a geodesic was computed in"""
    FLAT = auto()
    SPHERE = auto()
    CLOSED = auto()


@dataclass(frozen=True, eq=False)
class PlaneCurve:
    """
    Piecewise-linear immersed plane curve.

    Vertices are stored as complex numbers; ``params`` holds the parameter
    breakpoints t_0 = 0 < ... < t_k = 1 of the k segments.
    """
    vertices: np.ndarray
    params: Optional[np.ndarray] = None
    closed: bool = False
    name: str = ""

    def __post_init__(self):
        vertices = as_complex(self.vertices)
        if vertices.size < 2:
            raise InputError("a curve needs at least 2 vertices")
        if not np.all(np.isfinite(vertices)):
            raise InputError("curve vertices must be finite")
        if self.params is None:
            params = uniform_params(vertices.size - 1)
        else:
            params = _check_params(self.params, vertices.size, "curve")

        zero = np.flatnonzero(np.diff(vertices) == 0)
        if zero.size:
            raise ZeroEdge(int(zero[0]) + 1)

        if self.closed:
            length = float(np.sum(np.abs(np.diff(vertices))))
            gap = float(abs(vertices[-1] - vertices[0]))
            if gap > CLOSURE_TOLERANCE * length:
                raise NotClosed(gap, CLOSURE_TOLERANCE * length)

        object.__setattr__(self, "vertices", _frozen(vertices))
        object.__setattr__(self, "params", _frozen(params))

    @property
    def segment_count(self) -> int:
        return self.vertices.size - 1

    @property
    def arclength(self) -> float:
        return float(np.sum(np.abs(np.diff(self.vertices))))

    def translated(self, offset: complex) -> "PlaneCurve":
        return replace(self, vertices=self.vertices + offset)

    def scaled(self, factor: float) -> "PlaneCurve":
        return replace(self, vertices=self.vertices * factor)

    def with_params(self, params: np.ndarray) -> "PlaneCurve":
        return replace(self, params=params)


@dataclass(frozen=True, eq=False)
class PolarDerivative:
    """Piecewise-constant speed and unwrapped direction angle of a curve's derivative"""
    r: np.ndarray
    theta: np.ndarray
    params: np.ndarray

    def __post_init__(self):
        for name in ("r", "theta", "params"):
            object.__setattr__(self, name, _frozen(np.asarray(getattr(self, name), dtype=float)))


@dataclass(frozen=True)
class ElasticParams:
    """Weights of the elastic metric: a bends, b stretches"""
    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.a <= 0 or self.b <= 0:
            raise InputError(f"elastic parameters must be positive, got a={self.a}, b={self.b}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def rho(self) -> float:
        return self.a / (2.0 * self.b)

    @property
    def radius(self) -> float:
        """Sphere radius 2b of the unit-length transforms"""
        return 2.0 * self.b

    @classmethod
    def from_rho(cls, rho: float, a: float = 1.0) -> "ElasticParams":
        """Parameters with the given ratio a/2b, holding a fixed"""
        if rho <= 0:
            raise InputError(f"ratio a/2b must be positive, got {rho}")
        return cls(a=a, b=a / (2.0 * rho))

    @classmethod
    def srvf(cls) -> "ElasticParams":
        return cls(a=1.0, b=0.5)


@dataclass(frozen=True, eq=False)
class TransformedCurve:
    """
    Piecewise-constant complex function q on [0, 1], the image of a curve.

    ``initial_phase`` is the lifted argument of the first sample. When set,
    it fixes which branch of q/|q| raised to 1/rho the inverse uses.
    Samples may vanish (a flat warp produces zeros); operations that need
    q in the punctured plane check this themselves.
    """
    samples: np.ndarray
    params: np.ndarray
    elastic: ElasticParams
    initial_phase: Optional[float] = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex).ravel()
        params = _check_params(self.params, samples.size + 1, "transform")
        object.__setattr__(self, "samples", _frozen(samples))
        object.__setattr__(self, "params", _frozen(params))
        if self.initial_phase is not None:
            object.__setattr__(self, "initial_phase", float(self.initial_phase))

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.params)

    @property
    def segment_count(self) -> int:
        return self.samples.size

    def with_samples(self, samples: np.ndarray,
                     params: Optional[np.ndarray] = None) -> "TransformedCurve":
        """New transform whose phase lift continues nearest to this one's"""
        samples = np.asarray(samples, dtype=complex)
        phase = self.initial_phase
        if phase is not None and samples[0] != 0:
            phase = phase + float(np.angle(samples[0] * np.exp(-1j * phase)))
        return TransformedCurve(samples, self.params if params is None else params,
                                self.elastic, phase)


@dataclass(frozen=True, eq=False)
class BranchSet:
    """All images of a curve: canonical * multiplier**k"""
    canonical: TransformedCurve
    multiplier: complex
    count: Optional[int]
    unbounded: bool

    def image(self, k: int) -> TransformedCurve:
        factor = self.multiplier ** k
        phase = self.canonical.initial_phase
        if phase is not None:
            phase += k * 2.0 * np.pi * self.canonical.elastic.rho
        return TransformedCurve(self.canonical.samples * factor, self.canonical.params,
                                self.canonical.elastic, phase)

    def members(self) -> List[TransformedCurve]:
        if self.unbounded:
            raise ValueError("an irrational ratio has infinitely many images")
        return [self.image(k) for k in range(self.count)]


@dataclass(frozen=True, eq=False)
class ClosureDefect:
    """Closure defect f(q) with the L2 representers of its real and imaginary gradients"""
    value: complex
    grad_re: np.ndarray
    grad_im: np.ndarray


@dataclass(frozen=True, eq=False)
class Reparameterization:
    """Piecewise-linear nondecreasing warp of [0, 1] fixing both endpoints"""
    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        breakpoints = np.asarray(self.breakpoints, dtype=float).ravel()
        breakpoints = _check_params(breakpoints, breakpoints.size, "reparameterization")
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size != breakpoints.size:
            raise InputError("reparameterization needs one value per breakpoint")
        if abs(values[0]) > 1e-12 or abs(values[-1] - 1.0) > 1e-12:
            raise InputError("reparameterization must fix 0 and 1")
        if np.any(np.diff(values) < 0):
            raise InputError("reparameterization must be nondecreasing")
        values = values.copy()
        values[0], values[-1] = 0.0, 1.0
        object.__setattr__(self, "breakpoints", _frozen(breakpoints))
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def identity(cls) -> "Reparameterization":
        return cls(np.array([0.0, 1.0]), np.array([0.0, 1.0]))

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.breakpoints)

    def __call__(self, t: Union[float, np.ndarray]) -> np.ndarray:
        return np.interp(t, self.breakpoints, self.values)

    def deviation_from_identity(self) -> float:
        return float(np.max(np.abs(self.values - self.breakpoints)))


@dataclass(frozen=True, eq=False)
class MatchResult:
    """
    Optimal alignment of a second transform onto a reference.

    ``aligned`` is the rotated, reparameterized (and, for closed curves,
    reseeded) second transform, so ``distance`` is the L2 distance between
    ``reference`` and ``aligned``.
    """
    gamma: Reparameterization
    rotation: float
    seed: int
    distance: float
    reference: TransformedCurve
    aligned: TransformedCurve
    rounds: int = 0
    seed_distances: Optional[np.ndarray] = None


@dataclass(eq=False)
class GeodesicPath:
    """Discretized geodesic with distance and numerical diagnostics"""
    points: List[Union[PlaneCurve, TransformedCurve]]
    distance: float
    space: SpaceTag
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    transforms: List[TransformedCurve] = field(default_factory=list)
    match: Optional[MatchResult] = None

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, len(self.points))


class RotationAlignment(NamedTuple):
    angle: float
    aligned: TransformedCurve
    distance: float


@dataclass
class ShapeOptions:
    """Numerical options shared by matching, geodesics and classification"""
    closed: bool = False
    fixed_length: bool = False
    steps: int = 7
    grid_n: int = 128
    window: int = 4
    max_rounds: int = 10
    round_tol: float = 1e-8
    seed_stride: int = 1
    projection_tol: Optional[float] = None
    max_iter: int = 200

    def __post_init__(self):
        if self.steps < 2:
            raise InputError("a geodesic needs at least 2 steps")
        if self.grid_n < 2:
            raise InputError("the matching grid needs at least 2 cells")
        if self.window < 1 or self.seed_stride < 1 or self.max_rounds < 1:
            raise InputError("window, seed stride and rounds must be positive")

    def tolerance(self, params: ElasticParams) -> float:
        if self.projection_tol is not None:
            return self.projection_tol
        return 1e-6 * params.radius ** 2


@dataclass
class InjectivityReport:
    """Whether two curves can share a transform, and whether their angles rule it out"""
    radius_match: bool
    angle_multiples: np.ndarray
    relations_hold: bool
    transforms_coincide: bool
    max_exterior_angles: tuple
    angle_bound: float
    injective_regime: bool


@dataclass
class Dataset:
    """Labelled curves loaded from a class-per-directory layout"""
    curves: List[PlaneCurve]
    labels: List[str]
    names: List[str]

    @property
    def classes(self) -> List[str]:
        return sorted(set(self.labels))


@dataclass
class ClassificationReport:
    """Leave-one-out nearest-neighbour outcome"""
    method: str
    rate: float
    per_class: Dict[str, float]
    perfect: int
    predictions: List[str]
    labels: List[str]
    names: List[str] = field(default_factory=list)
