"""
Geodesics and distances in transform space.

Open curves use straight lines of L2 (or great circles of the sphere of
radius 2b for unit-length curves); closed curves project every interior
point back onto the closed transforms. shape_geodesic runs the whole
pipeline from two curves to a path of curves, falling back to path
straightening when rho > 1 and the straight path cannot be inverted
consistently.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from .closed import closure_defect, project_to_closed, rescale
from .curve_core import normalize
from .errors import Antipodal, NoConvergence, NotClosed, OffSphere, StraighteningFailed
from .matching import match_curves
from .models import (
    ElasticParams,
    GeodesicPath,
    MatchResult,
    PlaneCurve,
    ShapeOptions,
    SpaceTag,
    TransformedCurve,
)
from .transform import common_refinement, curve_from_polar, inverse, l2_distance, l2_norm, unwrapped_phase

logger = logging.getLogger(__name__)

ANTIPODAL_MARGIN = 1e-6
SINGULAR_FRACTION = 1e-6


def _times(m: int) -> np.ndarray:
    if m < 2:
        raise ValueError("a geodesic needs at least 2 points")
    return np.linspace(0.0, 1.0, m)


def _lift(value: complex, near: Optional[float]) -> Optional[float]:
    if near is None or value == 0:
        return near
    return near + float(np.angle(value * np.exp(-1j * near)))


def _interpolated_phase(q0: TransformedCurve, q1: TransformedCurve, u: float,
                        value: complex) -> Optional[float]:
    if q0.initial_phase is None or q1.initial_phase is None:
        return None
    return _lift(value, (1.0 - u) * q0.initial_phase + u * q1.initial_phase)


def path_length(points: List[TransformedCurve]) -> float:
    return float(sum(l2_norm(_difference(a, b)) for a, b in zip(points, points[1:])))


def path_energy(points: List[TransformedCurve]) -> float:
    return float(sum(l2_norm(_difference(a, b)) ** 2 for a, b in zip(points, points[1:])))


def _difference(a: TransformedCurve, b: TransformedCurve) -> TransformedCurve:
    a, b = common_refinement(a, b)
    return TransformedCurve(b.samples - a.samples, a.params, a.elastic)


def _segment_minimum(start: np.ndarray, end: np.ndarray) -> float:
    """Smallest modulus reached by (1 - u) start + u end over u in [0, 1]"""
    chord = end - start
    length = np.abs(chord) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(length > 0, -(np.conj(start) * chord).real / length, 0.0)
    u = np.clip(u, 0.0, 1.0)
    return float(np.min(np.abs(start + u * chord)))


def flat_geodesic(q0: TransformedCurve, q1: TransformedCurve, m: int = 7) -> GeodesicPath:
    """
    Straight line (1 - u) q0 + u q1 in L2.

    The path may leave the punctured plane; when some q_u(t) comes within
    1e-6 * 2b of zero the path is flagged singular and a warning is logged.
    """
    q0, q1 = common_refinement(q0, q1)
    points = []
    for u in _times(m):
        values = (1.0 - u) * q0.samples + u * q1.samples
        points.append(TransformedCurve(values, q0.params, q0.elastic,
                                       _interpolated_phase(q0, q1, u, values[0])))
    closest = _segment_minimum(q0.samples, q1.samples)
    singular = closest < SINGULAR_FRACTION * q0.elastic.radius
    if singular:
        logger.warning("flat geodesic passes within %.3e of zero", closest)
    distance = float(np.sqrt(np.sum(np.abs(q1.samples - q0.samples) ** 2 * q0.widths)))
    return GeodesicPath(points=points, distance=distance, space=SpaceTag.FLAT,
                        diagnostics={"min_modulus": closest, "singular": singular},
                        transforms=list(points))


def sphere_angle(q0: TransformedCurve, q1: TransformedCurve) -> float:
    """
    Angle D = arccos(<q0, q1> / 4b^2) between two points of the sphere.

    Evaluated as 2 arcsin(|q1 - q0| / 4b), which agrees on the sphere and
    stays accurate for nearby points.
    """
    chord = l2_distance(q0, q1)
    return float(2.0 * np.arcsin(min(1.0, chord / (2.0 * q0.elastic.radius))))


def _check_on_sphere(q: TransformedCurve) -> None:
    radius = q.elastic.radius
    norm = l2_norm(q)
    if abs(norm - radius) > 1e-8 * max(1.0, radius):
        raise OffSphere(f"transform norm {norm:.12f} differs from sphere radius {radius:.12f}")


def sphere_geodesic(q0: TransformedCurve, q1: TransformedCurve, m: int = 7) -> GeodesicPath:
    """
    Great circle between two points of the sphere of radius 2b.

    Raises:
        OffSphere: if either endpoint has norm other than 2b
        Antipodal: if the angle D is within 1e-6 of pi
    """
    _check_on_sphere(q0)
    _check_on_sphere(q1)
    q0, q1 = common_refinement(q0, q1)
    radius = q0.elastic.radius
    angle = sphere_angle(q0, q1)
    if angle >= np.pi - ANTIPODAL_MARGIN:
        raise Antipodal(angle)

    points, renormalized, drift = [], 0, 0.0
    for u in _times(m):
        if angle < 1e-12:
            values = (1.0 - u) * q0.samples + u * q1.samples
        else:
            values = (np.sin((1.0 - u) * angle) * q0.samples
                      + np.sin(u * angle) * q1.samples) / np.sin(angle)
        norm = float(np.sqrt(np.sum(np.abs(values) ** 2 * q0.widths)))
        drift = max(drift, abs(norm - radius))
        if abs(norm - radius) > 1e-12:
            values = values * (radius / norm)
            renormalized += 1
        points.append(TransformedCurve(values, q0.params, q0.elastic,
                                       _interpolated_phase(q0, q1, u, values[0])))
    return GeodesicPath(points=points, distance=radius * angle, space=SpaceTag.SPHERE,
                        diagnostics={"angle": angle, "max_drift": drift,
                                     "renormalized": renormalized},
                        transforms=list(points))


def closed_geodesic(q0: TransformedCurve, q1: TransformedCurve, m: int = 7,
                    tol: Optional[float] = None, sphere: bool = False,
                    max_iter: int = 200) -> GeodesicPath:
    """
    Projected geodesic between two closed transforms.

    Interior points of the flat (or sphere) geodesic are projected onto the
    closed transforms and, on the sphere, rescaled back to radius 2b. The
    distance is the discrete length of the projected path.

    Raises:
        NotClosed: if an endpoint violates the closure tolerance
        NoConvergence: if some interior projection fails; ``u`` names the point
    """
    if tol is None:
        tol = 1e-6 * q0.elastic.radius ** 2
    for endpoint in (q0, q1):
        residual = abs(closure_defect(endpoint))
        if residual > tol:
            raise NotClosed(residual, tol)

    base = sphere_geodesic(q0, q1, m) if sphere else flat_geodesic(q0, q1, m)
    times = _times(m)
    points, residuals = [base.points[0]], [abs(closure_defect(base.points[0]))]
    for u, point in zip(times[1:-1], base.points[1:-1]):
        projected = point
        try:
            # rescaling multiplies the defect by the squared scale factor
            for _ in range(5):
                projected = project_to_closed(projected, tol=tol / 4 if sphere else tol,
                                              max_iter=max_iter)
                if not sphere:
                    break
                projected = rescale(projected, q0.elastic.radius)
                if abs(closure_defect(projected)) <= tol:
                    break
        except NoConvergence as exc:
            raise NoConvergence(exc.residual, exc.iterations, best=exc.best, u=float(u)) from exc
        points.append(projected)
        residuals.append(abs(closure_defect(projected)))
    points.append(base.points[-1])
    residuals.append(abs(closure_defect(base.points[-1])))

    diagnostics = dict(base.diagnostics)
    diagnostics.update({"residuals": residuals, "ambient_distance": base.distance,
                        "ambient": base.space.name.lower()})
    return GeodesicPath(points=points, distance=path_length(points), space=SpaceTag.CLOSED,
                        diagnostics=diagnostics, transforms=list(points))


def _track_phases(points: List[TransformedCurve]) -> np.ndarray:
    """Follow each segment's argument continuously along the path, starting from q_0's lift"""
    tracked = np.empty((len(points), points[0].segment_count))
    tracked[0] = unwrapped_phase(points[0])
    for index in range(1, len(points)):
        values = points[index].samples
        previous = tracked[index - 1]
        tracked[index] = previous + np.angle(values * np.exp(-1j * previous))
    return tracked


def lifts_consistent(points: List[TransformedCurve]) -> bool:
    """
    Whether unwrapping along t agrees with continuation along u at every point.

    When they disagree somewhere, inverting each point separately would use a
    lift that jumps between neighbouring path points.
    """
    if any(np.any(point.samples == 0) for point in points):
        return False
    tracked = _track_phases(points)
    for index, point in enumerate(points):
        if np.max(np.abs(unwrapped_phase(point) - tracked[index])) > np.pi:
            return False
    return True


def straighten_path(radii: np.ndarray, start: np.ndarray, end: np.ndarray,
                    params: np.ndarray, p: ElasticParams, tol: float = 1e-8,
                    max_sweeps: int = 10000,
                    initial: Optional[np.ndarray] = None) -> Tuple[np.ndarray, float]:
    """
    Lifted phases of a path with fixed radii and reduced discrete energy.

    Phases start from ``initial`` when given (its end rows are replaced by
    the endpoint lifts), else from the linear interpolation of the endpoint
    lifts. Each sweep
    moves every interior point's phase to arg(p_{u-1} + p_{u+1}), taking the
    lift nearest the current one, until the energy changes by less than ``tol``.

    Returns:
        (phases, energy) with phases of shape (m, segments)
    """
    m = radii.shape[0]
    if initial is None:
        weights = np.linspace(0.0, 1.0, m)[:, None]
        phases = (1.0 - weights) * start[None, :] + weights * end[None, :]
    else:
        phases = np.array(initial, dtype=float)
        phases[0], phases[-1] = start, end
    widths = np.diff(params)

    def energy() -> float:
        values = radii * np.exp(1j * phases)
        return float(np.sum(np.abs(np.diff(values, axis=0)) ** 2 * widths[None, :]))

    current = energy()
    for sweep in range(1, max_sweeps + 1):
        for index in range(1, m - 1):
            pull = (radii[index - 1] * np.exp(1j * phases[index - 1])
                    + radii[index + 1] * np.exp(1j * phases[index + 1]))
            moved = pull != 0
            phases[index, moved] += np.angle(pull[moved] * np.exp(-1j * phases[index, moved]))
        updated = energy()
        change = current - updated
        current = updated
        if abs(change) < tol:
            logger.debug("path straightening converged after %d sweeps, energy %.8f",
                         sweep, current)
            break
    return phases, current


def straightening_seed(
        transforms: List[TransformedCurve]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Endpoint lifts and starting phases for straightening a transform-space path.

    The far endpoint may move by any multiple of 2 pi rho per segment without
    changing its curve; the multiple nearest the phase reached by following
    the path continuously is taken. The starting phases follow the path and
    spread the remaining mismatch linearly in u, so where none is left they
    reproduce the path exactly.
    """
    tracked = _track_phases(transforms)
    start = unwrapped_phase(transforms[0])
    end = unwrapped_phase(transforms[-1])
    period = 2.0 * np.pi * transforms[0].elastic.rho
    end = end + period * np.round((tracked[-1] - end) / period)
    weights = np.linspace(0.0, 1.0, len(transforms))[:, None]
    initial = tracked + weights * (end - tracked[-1])[None, :]
    return start, end, initial


def _invert_points(points: List[TransformedCurve], closed: bool) -> List[PlaneCurve]:
    return [inverse(point, closed=closed) for point in points]


def _geodesic_in_transform_space(q0: TransformedCurve, q1: TransformedCurve,
                                 options: ShapeOptions) -> GeodesicPath:
    m = options.steps
    if options.closed:
        return closed_geodesic(q0, q1, m, tol=options.tolerance(q0.elastic),
                               sphere=options.fixed_length, max_iter=options.max_iter)
    if options.fixed_length:
        return sphere_geodesic(q0, q1, m)
    return flat_geodesic(q0, q1, m)


def shape_geodesic(c1: PlaneCurve, c2: PlaneCurve, p: ElasticParams,
                   options: Optional[ShapeOptions] = None) -> GeodesicPath:
    """
    Geodesic between the shapes of two curves as a path of curves.

    Normalizes both curves, aligns c2 onto c1, builds the transform-space
    geodesic between the aligned endpoints and inverts every point. For
    rho > 1 a path whose lifts are inconsistent is replaced by path
    straightening in polar coordinates.

    Raises:
        StraighteningFailed: if straightening ends above twice the energy of
            the transform-space path
    """
    options = options or ShapeOptions()
    first = normalize(c1, translate=True, scale=options.fixed_length)
    second = normalize(c2, translate=True, scale=options.fixed_length)
    match = match_curves(first, second, p, options)
    path = _geodesic_in_transform_space(match.reference, match.aligned, options)
    path.match = match

    consistent = lifts_consistent(path.transforms)
    path.diagnostics["lifts_consistent"] = consistent
    path.diagnostics["straightened"] = False
    if consistent or p.rho <= 1.0:
        path.points = _invert_points(path.transforms, options.closed)
        return path

    logger.info("lifts inconsistent at rho=%.4f, straightening path", p.rho)
    transforms = path.transforms
    params = transforms[0].params
    radii = np.array([np.abs(point.samples) for point in transforms])
    bound = path_energy(transforms)
    start, end, initial = straightening_seed(transforms)
    phases, energy = straighten_path(radii, start, end, params, p, initial=initial)
    if energy > 2.0 * bound + 1e-12:
        raise StraighteningFailed(energy, 2.0 * bound)

    path.points = [curve_from_polar(radii[index], phases[index], params, p,
                                    closed=options.closed)
                   for index in range(len(transforms))]
    path.transforms = [TransformedCurve(radii[index] * np.exp(1j * phases[index]), params, p,
                                        float(phases[index, 0]))
                       for index in range(len(transforms))]
    path.diagnostics.update({"straightened": True, "energy": energy, "energy_bound": bound})
    return path


def shape_distance(c1: PlaneCurve, c2: PlaneCurve, p: ElasticParams,
                   options: Optional[ShapeOptions] = None) -> float:
    """
    Elastic shape distance without materializing the path.

    The L2 distance of the aligned transforms, or 2b times their sphere
    angle for unit-length curves.
    """
    options = options or ShapeOptions()
    first = normalize(c1, translate=True, scale=options.fixed_length)
    second = normalize(c2, translate=True, scale=options.fixed_length)
    match = match_curves(first, second, p, options)
    return distance_of_match(match, options)


def distance_of_match(match: MatchResult, options: ShapeOptions) -> float:
    if options.fixed_length:
        return match.reference.elastic.radius * sphere_angle(match.reference, match.aligned)
    return match.distance
