"""
The F_{a,b} transform of piecewise-linear curves and its inverse.

forward maps a curve c to q = 2b |c'|^(1/2) (c'/|c'|)^(a/2b), which carries the
elastic metric g^{a,b} to the flat L2 metric. The module also holds the group
actions the transform is equivariant under, the pullback metric, the cone
projection, branch bookkeeping and L2 helpers for piecewise-constant data on
arbitrary partitions.
"""

from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .curve_core import CurveGenerator, close_gap, edge_vectors, polar_decompose
from .errors import ParamRegime, SingularTransform
from .models import (
    BranchSet,
    ElasticParams,
    PlaneCurve,
    Reparameterization,
    TransformedCurve,
    as_complex,
)

# Breakpoints closer than this are merged when partitions are refined.
MERGE_TOLERANCE = 1e-13


def forward(c: PlaneCurve, p: ElasticParams) -> TransformedCurve:
    """
    Transform a curve: q_j = 2b sqrt(r_j) exp(i rho theta_j).

    The canonical branch is fixed by theta_1 in (-pi, pi].

    Raises:
        ZeroEdge: if two consecutive vertices coincide
    """
    polar = polar_decompose(c)
    samples = 2.0 * p.b * np.sqrt(polar.r) * np.exp(1j * p.rho * polar.theta)
    return TransformedCurve(samples, c.params, p, initial_phase=p.rho * polar.theta[0])


def require_nonvanishing(q: TransformedCurve) -> None:
    zero = np.flatnonzero(q.samples == 0)
    if zero.size:
        raise SingularTransform(int(zero[0]))


def unwrapped_phase(q: TransformedCurve) -> np.ndarray:
    """Lifted argument of q: consecutive differences taken in (-pi, pi]"""
    samples = q.samples
    steps = np.angle(samples[1:] * np.conj(samples[:-1]))
    steps = np.where(steps <= -np.pi, np.pi, steps)
    start = q.initial_phase if q.initial_phase is not None else float(np.angle(samples[0]))
    return start + np.concatenate([[0.0], np.cumsum(steps)])


def curve_from_polar(radius: np.ndarray, phase: np.ndarray, params: np.ndarray,
                     p: ElasticParams, closed: bool = False, name: str = "") -> PlaneCurve:
    """Integrate |q|^2 exp(i phase / rho) / 4b^2 from lifted polar data, based at the origin"""
    steps = radius ** 2 * np.exp(1j * phase / p.rho) * np.diff(params) / (4.0 * p.b ** 2)
    vertices = np.concatenate([[0.0], np.cumsum(steps)])
    if closed:
        vertices = close_gap(vertices, params)
    return PlaneCurve(vertices, params, closed=closed, name=name)


def inverse(q: TransformedCurve, closed: bool = False, name: str = "") -> PlaneCurve:
    """
    Reconstruct the curve based at the origin.

    With ``closed`` the residual endpoint gap is removed, which is how
    projected closed transforms become closed polygons.

    Raises:
        SingularTransform: if some sample is zero
    """
    require_nonvanishing(q)
    return curve_from_polar(np.abs(q.samples), unwrapped_phase(q), q.params,
                            q.elastic, closed=closed, name=name)


def rotate_curve(c: PlaneCurve, psi: float) -> PlaneCurve:
    return c.scaled(np.exp(1j * psi))


def rotate_transform(q: TransformedCurve, phi: float) -> TransformedCurve:
    phase = None if q.initial_phase is None else q.initial_phase + phi
    return TransformedCurve(q.samples * np.exp(1j * phi), q.params, q.elastic, phase)


def scale_equivariance_check(c: PlaneCurve, factor: float, p: ElasticParams,
                             tol: float = 1e-12) -> bool:
    """Check F(factor * c) = sqrt(factor) F(c) up to a relative tolerance"""
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    scaled = forward(c.scaled(factor), p).samples
    expected = np.sqrt(factor) * forward(c, p).samples
    return bool(np.max(np.abs(scaled - expected)) <= tol * max(1.0, np.max(np.abs(expected))))


def merge_breakpoints(*partitions: np.ndarray) -> np.ndarray:
    merged = np.unique(np.concatenate(partitions))
    keep = np.concatenate([[True], np.diff(merged) > MERGE_TOLERANCE])
    merged = merged[keep]
    merged[0], merged[-1] = 0.0, 1.0
    return merged


def refine(q: TransformedCurve, params: np.ndarray) -> TransformedCurve:
    """Express q on a finer partition containing its own breakpoints"""
    if params.size == q.params.size and np.array_equal(params, q.params):
        return q
    mids = 0.5 * (params[:-1] + params[1:])
    index = np.clip(np.searchsorted(q.params, mids, side="right") - 1, 0, q.segment_count - 1)
    return TransformedCurve(q.samples[index], params, q.elastic, q.initial_phase)


def common_refinement(q1: TransformedCurve,
                      q2: TransformedCurve) -> Tuple[TransformedCurve, TransformedCurve]:
    if q1.params.size == q2.params.size and np.array_equal(q1.params, q2.params):
        return q1, q2
    params = merge_breakpoints(q1.params, q2.params)
    return refine(q1, params), refine(q2, params)


def l2_inner(q1: TransformedCurve, q2: TransformedCurve) -> complex:
    """Complex inner product: integral of q1 * conj(q2)"""
    q1, q2 = common_refinement(q1, q2)
    return complex(np.sum(q1.samples * np.conj(q2.samples) * q1.widths))


def l2_norm(q: TransformedCurve) -> float:
    return float(np.sqrt(np.sum(np.abs(q.samples) ** 2 * q.widths)))


def l2_distance(q1: TransformedCurve, q2: TransformedCurve) -> float:
    q1, q2 = common_refinement(q1, q2)
    return float(np.sqrt(np.sum(np.abs(q1.samples - q2.samples) ** 2 * q1.widths)))


def reparam_action(gamma: Reparameterization, q: TransformedCurve) -> TransformedCurve:
    """
    Right action of a warp: (gamma * q)(t) = sqrt(gamma'(t)) q(gamma(t)).

    The result lives on the union of gamma's breakpoints and the preimages
    of q's breakpoints, so every piece maps linearly into a single segment of q.
    """
    tau, values = gamma.breakpoints, gamma.values
    cuts = [tau]
    for left in range(tau.size - 1):
        low, high = values[left], values[left + 1]
        if high <= low:
            continue
        inner = q.params[np.searchsorted(q.params, low, side="right"):
                         np.searchsorted(q.params, high, side="left")]
        if inner.size:
            slope = (tau[left + 1] - tau[left]) / (high - low)
            cuts.append(tau[left] + (inner - low) * slope)
    params = merge_breakpoints(*cuts)

    mids = 0.5 * (params[:-1] + params[1:])
    piece = np.clip(np.searchsorted(tau, mids, side="right") - 1, 0, tau.size - 2)
    slopes = gamma.slopes[piece]
    segment = np.clip(np.searchsorted(q.params, gamma(mids), side="right") - 1,
                      0, q.segment_count - 1)
    return q.with_samples(np.sqrt(slopes) * q.samples[segment], params)


def pullback_metric_eval(c: PlaneCurve, h: np.ndarray, k: np.ndarray, p: ElasticParams) -> float:
    """
    Elastic metric g^{a,b}_c(h, k) for vertexwise variations h, k.

    Uses the complex form |c'|^-3 (a^2 Im(c' conj h') Im(c' conj k')
    + b^2 Re(c' conj h') Re(c' conj k')) integrated over the segments.
    """
    v = edge_vectors(c)
    widths = np.diff(c.params)
    dh = np.diff(as_complex(h)) / widths
    dk = np.diff(as_complex(k)) / widths
    ph = v * np.conj(dh)
    pk = v * np.conj(dk)
    density = (p.a ** 2 * ph.imag * pk.imag + p.b ** 2 * ph.real * pk.real) / np.abs(v) ** 3
    return float(np.sum(density * widths))


def cone_projection(q: TransformedCurve) -> np.ndarray:
    """
    Lift q onto the cone (4b^2 - a^2)(x^2 + y^2) = a^2 z^2 in R^3.

    Returns an array of shape (k, 3), one point per segment of q.

    Raises:
        ParamRegime: if 2b < a
    """
    p = q.elastic
    if 2.0 * p.b < p.a:
        raise ParamRegime(f"cone projection needs 2b >= a, got a={p.a}, b={p.b}")
    radius = np.abs(q.samples)
    angle = unwrapped_phase(q) / p.rho
    rho = p.rho
    return np.column_stack([
        rho * radius * np.cos(angle),
        rho * radius * np.sin(angle),
        np.sqrt(max(1.0 - rho ** 2, 0.0)) * radius,
    ])


def r_transform(c: PlaneCurve, p: ElasticParams) -> np.ndarray:
    """Cone transform sqrt(|c'|) (a T, sqrt(4b^2 - a^2)) with T the unit tangent"""
    if 2.0 * p.b < p.a:
        raise ParamRegime(f"cone transform needs 2b >= a, got a={p.a}, b={p.b}")
    polar = polar_decompose(c)
    root = np.sqrt(polar.r)
    return np.column_stack([
        p.a * root * np.cos(polar.theta),
        p.a * root * np.sin(polar.theta),
        np.sqrt(4.0 * p.b ** 2 - p.a ** 2) * root,
    ])


def cone_l2_norm(points: np.ndarray, params: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.sum(points ** 2, axis=1) * np.diff(params))))


def rational_order(rho: float, max_denominator: int = 1000) -> Optional[int]:
    """Denominator of rho in lowest terms, or None when rho is not a small rational"""
    fraction = Fraction(rho).limit_denominator(max_denominator)
    if abs(float(fraction) - rho) > 1e-12:
        return None
    return fraction.denominator


def branch_images(q: TransformedCurve) -> BranchSet:
    """Canonical image plus the multiplier exp(i (a/b) pi) generating the others"""
    rho = q.elastic.rho
    multiplier = complex(np.exp(2j * np.pi * rho))
    count = rational_order(rho)
    return BranchSet(canonical=q, multiplier=multiplier, count=count, unbounded=count is None)


def analytic_transform(generator: CurveGenerator, p: ElasticParams, t: np.ndarray) -> np.ndarray:
    """Values of F_{a,b} of a smooth generator at parameters t"""
    t = np.asarray(t, dtype=float)
    speed = np.abs(generator.velocity(t))
    return 2.0 * p.b * np.sqrt(speed) * np.exp(1j * p.rho * generator.angle(t))


def sample_at(q: TransformedCurve, t: np.ndarray) -> np.ndarray:
    """Evaluate the piecewise-constant q at points t (right-continuous, last segment closed)"""
    index = np.clip(np.searchsorted(q.params, t, side="right") - 1, 0, q.segment_count - 1)
    return q.samples[index]
