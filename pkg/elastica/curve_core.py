"""
Piecewise-linear plane curves: edge vectors, polar decomposition of the
derivative with angle unwrapping, rotation index, normalization and sampling.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import NotClosed, ZeroEdge
from .models import CLOSURE_TOLERANCE, PlaneCurve, PolarDerivative, uniform_params


@dataclass(frozen=True)
class CurveGenerator:
    """
    Closed-form parametric curve on [0, 1].

    ``point`` and ``velocity`` map parameter arrays to complex arrays.
    """
    name: str
    point: Callable[[np.ndarray], np.ndarray]
    velocity: Callable[[np.ndarray], np.ndarray]
    closed: bool = False

    def angle(self, t: np.ndarray, density: int = 4096) -> np.ndarray:
        """Continuous direction angle of the velocity, anchored in (-pi, pi] at t = 0"""
        t = np.asarray(t, dtype=float)
        dense = np.union1d(np.linspace(0.0, 1.0, density + 1), t)
        lifted = np.unwrap(np.angle(self.velocity(dense)))
        lifted += _principal(lifted[0]) - lifted[0]
        return np.interp(t, dense, lifted)


def _principal(angle: float) -> float:
    """Representative of an angle in (-pi, pi]"""
    wrapped = float(np.angle(np.exp(1j * angle)))
    return np.pi if wrapped <= -np.pi else wrapped


def circle(radius: float = 1.0, turns: int = 1) -> CurveGenerator:
    w = 2.0 * np.pi * turns
    return CurveGenerator(
        name="circle" if turns == 1 else f"circle_x{turns}",
        point=lambda t: radius * np.exp(1j * w * np.asarray(t)),
        velocity=lambda t: 1j * w * radius * np.exp(1j * w * np.asarray(t)),
        closed=True,
    )


def ellipse(major: float = 2.0, minor: float = 1.0) -> CurveGenerator:
    w = 2.0 * np.pi
    return CurveGenerator(
        name="ellipse",
        point=lambda t: major * np.cos(w * np.asarray(t)) + 1j * minor * np.sin(w * np.asarray(t)),
        velocity=lambda t: w * (-major * np.sin(w * np.asarray(t)) + 1j * minor * np.cos(w * np.asarray(t))),
        closed=True,
    )


def figure_eight(scale: float = 1.0) -> CurveGenerator:
    # lemniscate of Gerono; rotation index 0
    w = 2.0 * np.pi
    return CurveGenerator(
        name="figure_eight",
        point=lambda t: scale * (np.sin(w * np.asarray(t)) + 0.5j * np.sin(2 * w * np.asarray(t))),
        velocity=lambda t: scale * w * (np.cos(w * np.asarray(t)) + 1j * np.cos(2 * w * np.asarray(t))),
        closed=True,
    )


def horseshoe(opening: float = 0.6) -> CurveGenerator:
    """Open arc of a circle leaving a gap of ``opening`` radians at the bottom"""
    start = -np.pi / 2 + opening / 2
    sweep = 2.0 * np.pi - opening
    return CurveGenerator(
        name="horseshoe",
        point=lambda t: np.exp(1j * (start + sweep * np.asarray(t))),
        velocity=lambda t: 1j * sweep * np.exp(1j * (start + sweep * np.asarray(t))),
        closed=False,
    )


GENERATORS = {
    "circle": circle,
    "ellipse": ellipse,
    "figure_eight": figure_eight,
    "doubly_wound_circle": lambda: circle(turns=2),
    "horseshoe": horseshoe,
}


def edge_vectors(c: PlaneCurve) -> np.ndarray:
    """Derivative v_j = (z_j - z_{j-1}) / (t_j - t_{j-1}) on each segment"""
    steps = np.diff(c.vertices)
    zero = np.flatnonzero(steps == 0)
    if zero.size:
        raise ZeroEdge(int(zero[0]) + 1)
    return steps / np.diff(c.params)


def _turns(v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Exterior angles in [0, pi] and their orientation signs between consecutive vectors"""
    w = np.conj(v[:-1]) * v[1:]
    delta = np.arctan2(np.abs(w.imag), w.real)
    signs = np.where(w.imag > 0, 1.0, -1.0)
    return delta, signs


def polar_decompose(c: PlaneCurve) -> PolarDerivative:
    """
    Speed and unwrapped direction of the derivative.

    theta_1 is the principal angle of the first edge; every later angle adds
    the signed exterior angle, counterclockwise turns counting positive, so
    r_j * exp(i theta_j) reproduces v_j.

    Raises:
        ZeroEdge: if two consecutive vertices coincide
    """
    v = edge_vectors(c)
    delta, signs = _turns(v)
    theta = np.empty(v.size)
    theta[0] = _principal(float(np.angle(v[0])))
    theta[1:] = theta[0] + np.cumsum(signs * delta)
    return PolarDerivative(r=np.abs(v), theta=theta, params=c.params)


def exterior_angles(c: PlaneCurve) -> np.ndarray:
    """Unsigned turning angles between consecutive edges"""
    delta, _ = _turns(edge_vectors(c))
    return delta


def max_turning(c: PlaneCurve) -> float:
    angles = exterior_angles(c)
    return float(angles.max()) if angles.size else 0.0


def arclength(c: PlaneCurve) -> float:
    return c.arclength


def endpoint_gap(c: PlaneCurve) -> float:
    return float(abs(c.vertices[-1] - c.vertices[0]))


def rotation_index(c: PlaneCurve) -> int:
    """
    Whitney rotation index of a closed curve.

    The angle recursion is continued across the closing pair (v_k, v_1), so
    the total turning includes the corner at the base point.

    Raises:
        NotClosed: if the endpoints do not meet within tolerance
    """
    gap = endpoint_gap(c)
    tolerance = CLOSURE_TOLERANCE * c.arclength
    if gap > tolerance:
        raise NotClosed(gap, tolerance)
    polar = polar_decompose(c)
    v = edge_vectors(c)
    delta, signs = _turns(np.array([v[-1], v[0]]))
    wrapped = polar.theta[-1] + signs[0] * delta[0]
    return int(np.round((wrapped - polar.theta[0]) / (2.0 * np.pi)))


def normalize(c: PlaneCurve, translate: bool = True, scale: bool = True) -> PlaneCurve:
    """Base the curve at the origin and/or rescale it to unit arclength"""
    if translate:
        c = c.translated(-c.vertices[0])
    if scale:
        c = c.scaled(1.0 / c.arclength)
    return c


def resample_uniform(c: PlaneCurve, n: int) -> PlaneCurve:
    """Curve with n vertices at equally spaced parameters along the same trace"""
    if n < 2:
        raise ValueError("resampling needs at least 2 vertices")
    t = uniform_params(n - 1)
    vertices = np.interp(t, c.params, c.vertices)
    if c.closed:
        vertices[-1] = vertices[0]
    return PlaneCurve(vertices, t, closed=c.closed, name=c.name)


def arclength_parameterize(c: PlaneCurve) -> PlaneCurve:
    """Same vertices with breakpoints proportional to cumulative arclength"""
    lengths = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(c.vertices)))])
    return c.with_params(lengths / lengths[-1])


def resample_arclength(c: PlaneCurve, n: int) -> PlaneCurve:
    return resample_uniform(arclength_parameterize(c), n)


def cyclic_shift(c: PlaneCurve, seed: int) -> PlaneCurve:
    """Re-index a closed curve so that it starts at vertex ``seed``"""
    k = c.segment_count
    seed %= k
    if seed == 0:
        return c
    vertices = np.roll(c.vertices[:-1], -seed)
    vertices = np.append(vertices, vertices[0])
    widths = np.roll(np.diff(c.params), -seed)
    params = np.concatenate([[0.0], np.cumsum(widths)])
    params /= params[-1]
    return PlaneCurve(vertices, params, closed=c.closed, name=c.name)


def close_gap(vertices: np.ndarray, params: np.ndarray) -> np.ndarray:
    """Remove the endpoint gap by subtracting the drift t * (z_k - z_0)"""
    vertices = np.asarray(vertices, dtype=complex)
    closed = vertices - np.asarray(params) * (vertices[-1] - vertices[0])
    closed[-1] = closed[0]
    return closed


def secant_sample(generator: CurveGenerator, n: int,
                  params: Optional[np.ndarray] = None) -> PlaneCurve:
    """
    Polygon through generator(t_j) at n equally spaced parameters.

    Raises:
        ZeroEdge: if two consecutive samples coincide
    """
    if n < 2:
        raise ValueError("secant sampling needs at least 2 vertices")
    t = uniform_params(n - 1) if params is None else np.asarray(params, dtype=float)
    vertices = np.asarray(generator.point(t), dtype=complex)
    if generator.closed:
        vertices[-1] = vertices[0]
    return PlaneCurve(vertices, t, closed=generator.closed, name=generator.name)
