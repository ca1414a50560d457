#!/usr/bin/env python3
"""
Tests for geodesics in transform space and between shapes.
"""

import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose

from elastica import samples
from elastica.closed import closure_defect, rescale
from elastica.curve_core import ellipse, normalize, secant_sample
from elastica.errors import Antipodal, NotClosed, OffSphere
from elastica.geodesics import (
    closed_geodesic,
    flat_geodesic,
    lifts_consistent,
    path_energy,
    path_length,
    shape_distance,
    shape_geodesic,
    sphere_geodesic,
    straighten_path,
    straightening_seed,
)
from elastica.models import ElasticParams, PlaneCurve, ShapeOptions, SpaceTag, TransformedCurve
from elastica.transform import curve_from_polar, forward, inverse, l2_distance, l2_norm, rotate_curve

FAST = ShapeOptions(grid_n=32)
FIGURE_RHOS = (2.0, 1.0, 0.5, 0.17)


def constant(value, p):
    return TransformedCurve([value], [0, 1], p)


def on_sphere(c, p):
    q = forward(c, p)
    return rescale(q, p.radius)


def closed_pair(p):
    first = normalize(samples.regular_polygon(32))
    second = normalize(secant_sample(ellipse(), 33))
    return forward(first, p), forward(second, p)


def test_flat_geodesic_of_a_point_is_constant():
    p = ElasticParams(1.0, 0.5)
    q = forward(samples.wave(), p)
    path = flat_geodesic(q, q, 5)
    assert path.distance == 0.0
    for point in path.points:
        assert_allclose(point.samples, q.samples)


def test_flat_geodesic_between_constants():
    p = ElasticParams(1.0, 0.4)
    path = flat_geodesic(constant(2 * p.b, p), constant(2j * p.b, p), 3)
    assert path.space is SpaceTag.FLAT
    assert path.distance == pytest.approx(2 * p.b * np.sqrt(2))
    assert_allclose(path.points[1].samples, [p.b * (1 + 1j)])
    assert not path.diagnostics["singular"]


def test_flat_geodesic_through_zero_is_flagged(caplog):
    p = ElasticParams(1.0, 0.5)
    with caplog.at_level(logging.WARNING, logger="elastica.geodesics"):
        path = flat_geodesic(constant(2 * p.b, p), constant(-2 * p.b, p), 3)
    assert path.diagnostics["singular"]
    assert path.points[1].samples[0] == 0
    assert "passes within" in caplog.text


def test_sphere_geodesic_of_a_point():
    p = ElasticParams(1.0, 0.5)
    q = on_sphere(samples.hook(), p)
    path = sphere_geodesic(q, q, 4)
    assert path.distance == pytest.approx(0.0, abs=1e-12)
    for point in path.points:
        assert_allclose(point.samples, q.samples)


def test_sphere_geodesic_between_orthogonal_points():
    p = ElasticParams(1.0, 0.3)
    path = sphere_geodesic(constant(2 * p.b, p), constant(2j * p.b, p), 5)
    assert path.space is SpaceTag.SPHERE
    assert path.distance == pytest.approx(np.pi * p.b)


def test_sphere_geodesic_has_constant_speed():
    p = ElasticParams.from_rho(0.5)
    q0 = on_sphere(samples.bump(), p)
    q1 = on_sphere(samples.s_curve(), p)
    path = sphere_geodesic(q0, q1, 50)
    for point in path.points:
        assert l2_norm(point) == pytest.approx(p.radius, abs=1e-9)
    steps = [l2_distance(a, b) for a, b in zip(path.points, path.points[1:])]
    assert np.ptp(steps) <= 1e-8
    assert path_length(path.points) == pytest.approx(path.distance, rel=1e-3)
    assert path.distance == pytest.approx(
        p.radius * np.arccos(np.sum((q0.samples * np.conj(q1.samples)).real * q0.widths)
                             / p.radius ** 2))


def test_sphere_geodesic_preconditions():
    p = ElasticParams(1.0, 0.5)
    q = on_sphere(samples.wave(), p)
    with pytest.raises(Antipodal):
        sphere_geodesic(q, q.with_samples(-q.samples), 5)
    with pytest.raises(OffSphere):
        sphere_geodesic(q, forward(samples.wave().scaled(3.0), p), 5)


def test_closed_geodesic_of_a_point():
    p = ElasticParams(1.0, 0.5)
    q, _ = closed_pair(p)
    path = closed_geodesic(q, q, 5)
    assert path.distance == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("rho", (0.5, 1.0))
def test_closed_geodesic_projects_interior_points(rho):
    p = ElasticParams.from_rho(rho)
    q0, q1 = closed_pair(p)
    tol = 1e-6 * p.radius ** 2
    path = closed_geodesic(q0, q1, 7, tol=tol)
    assert path.space is SpaceTag.CLOSED
    assert max(path.diagnostics["residuals"]) <= tol
    assert path.distance >= l2_distance(q0, q1) - 1e-12
    for point in path.points:
        inverse(point, closed=True)


def test_closed_geodesic_length_converges():
    p = ElasticParams(1.0, 0.5)
    q0, q1 = closed_pair(p)
    coarse = closed_geodesic(q0, q1, 25).distance
    fine = closed_geodesic(q0, q1, 50).distance
    assert coarse == pytest.approx(fine, rel=0.01)


def test_closed_geodesic_on_sphere_keeps_radius():
    p = ElasticParams(1.0, 0.5)
    q0, q1 = closed_pair(p)
    path = closed_geodesic(q0, q1, 7, sphere=True)
    for point in path.points:
        assert l2_norm(point) == pytest.approx(p.radius, abs=1e-9)
        assert abs(closure_defect(point)) <= 1e-6 * p.radius ** 2


def test_closed_geodesic_rejects_open_endpoint():
    p = ElasticParams(1.0, 0.5)
    q0, _ = closed_pair(p)
    with pytest.raises(NotClosed):
        closed_geodesic(q0, forward(normalize(samples.arc()), p), 5)


def test_straightening_keeps_endpoints_and_lowers_energy():
    p = ElasticParams.from_rho(2.0)
    m, k = 7, 5
    params = np.linspace(0, 1, k + 1)
    radii = np.ones((m, k))
    start = np.zeros(k)
    end = np.array([0.5, 0.5, 2 * np.pi + 0.3, 0.5, -0.4])
    weights = np.linspace(0, 1, m)[:, None]
    initial = (1 - weights) * start + weights * end
    initial_energy = float(np.sum(np.abs(np.diff(np.exp(1j * initial), axis=0)) ** 2
                                  * np.diff(params)))

    phases, energy = straighten_path(radii, start, end, params, p)
    assert_allclose(phases[0], start)
    assert_allclose(phases[-1], end)
    assert energy <= initial_energy + 1e-12


def test_straightening_of_a_straight_polar_path():
    p = ElasticParams.from_rho(2.0)
    params = np.linspace(0, 1, 4)
    radii = np.ones((5, 3))
    start, end = np.zeros(3), np.full(3, 0.5)
    phases, energy = straighten_path(radii, start, end, params, p)
    assert_allclose(phases, np.linspace(0, 0.5, 5)[:, None] * np.ones(3), atol=1e-12)
    flat = [TransformedCurve(np.full(3, np.exp(1j * u * 0.5)), params, p) for u in (0.0, 1.0)]
    assert energy <= 2 * path_energy(flat) / 4


def test_shape_geodesic_of_a_curve_with_itself():
    p = ElasticParams(1.0, 0.5)
    c = samples.wave()
    path = shape_geodesic(c, c, p, FAST)
    assert path.distance == pytest.approx(0.0, abs=1e-12)
    assert len(path.points) == FAST.steps
    for point in path.points:
        assert_allclose(point.vertices, path.points[0].vertices, atol=1e-12)


def trace(curve, t=np.linspace(0, 1, 257)):
    """Positions along a polygonal curve; refinement does not change them"""
    return np.interp(t, curve.params, curve.vertices.real) + 1j * np.interp(
        t, curve.params, curve.vertices.imag)


@pytest.mark.parametrize("rho", (1.0, 0.5))
def test_shape_geodesic_endpoints(rho):
    p = ElasticParams.from_rho(rho)
    path = shape_geodesic(samples.arc(), samples.wave(), p, FAST)
    assert path.points[0].vertices[0] == 0
    assert_allclose(trace(path.points[0]), trace(inverse(path.match.reference)), atol=1e-8)
    assert_allclose(trace(path.points[-1]), trace(inverse(path.match.aligned)), atol=1e-8)
    assert path.diagnostics["lifts_consistent"] in (True, False)


def assert_straightened_path(path, steps):
    assert len(path.points) == steps
    assert_allclose(trace(path.points[0]), trace(inverse(path.match.reference)), atol=1e-8)
    assert_allclose(trace(path.points[-1]), trace(inverse(path.match.aligned)), atol=1e-8)
    energy = path.diagnostics.get("energy", 0.0)
    assert energy <= 2 * path.diagnostics.get("energy_bound", 0.0) + 1e-12


@pytest.mark.parametrize("label, c1, c2", samples.open_pairs())
def test_shape_geodesic_of_every_open_pair_slightly_above_rho_one(label, c1, c2):
    path = shape_geodesic(c1, c2, ElasticParams.from_rho(1.25), FAST)
    assert_straightened_path(path, FAST.steps)


@pytest.mark.parametrize("rho, first, second", [
    (2.0, samples.arc(np.pi), samples.wave()),
    (2.0, samples.bump(), samples.bump(0.3)),
    (2.0, samples.s_curve(), samples.wave()),
    (4.0, samples.wave(), samples.wave(1.0, 0.12)),
])
def test_shape_geodesic_above_rho_one(rho, first, second):
    path = shape_geodesic(first, second, ElasticParams.from_rho(rho), FAST)
    assert_straightened_path(path, FAST.steps)


def test_straightening_seed_follows_a_path_with_shifted_lifts():
    # directions 170 and -170 degrees: t-lifts 340 and -340 degrees of q at rho = 2
    p = ElasticParams.from_rho(2.0)
    c2 = PlaneCurve([0, np.exp(-1j * np.deg2rad(170))])
    q0 = forward(PlaneCurve([0, np.exp(1j * np.deg2rad(170))]), p)
    points = flat_geodesic(q0, forward(c2, p), 7).transforms
    assert not lifts_consistent(points)

    start, end, initial = straightening_seed(points)
    radii = np.array([np.abs(point.samples) for point in points])
    phases, energy = straighten_path(radii, start, end, q0.params, p, initial=initial)
    assert_allclose(phases[0], np.deg2rad([340.0]))
    assert energy <= path_energy(points) + 1e-12
    back = curve_from_polar(radii[-1], phases[-1], q0.params, p)
    assert_allclose(back.vertices, c2.vertices, atol=1e-12)


@pytest.mark.parametrize("pair", [("half_arc", "wave"), ("bump", "double_wave")])
def test_distance_grows_as_rho_shrinks(pair):
    first, second = (samples.OPEN_SHAPES[name]() for name in pair)
    distances = [shape_distance(first, second, ElasticParams.from_rho(rho), FAST)
                 for rho in FIGURE_RHOS]
    assert np.all(np.diff(distances) > 0)


def test_shape_distance_invariances():
    p = ElasticParams(1.0, 0.5)
    c1, c2 = samples.hook(), samples.s_curve()
    base = shape_distance(c1, c2, p, FAST)
    assert shape_distance(c1, c1, p, FAST) == pytest.approx(0.0, abs=1e-12)
    assert shape_distance(c1.translated(2 - 5j), c2, p, FAST) == pytest.approx(base, abs=1e-8)
    assert shape_distance(c1, rotate_curve(c2, 1.1), p, FAST) == pytest.approx(base, abs=1e-8)

    fixed = ShapeOptions(grid_n=32, fixed_length=True)
    unit = shape_distance(c1, c2, p, fixed)
    assert shape_distance(c1.scaled(3.0), c2, p, fixed) == pytest.approx(unit, abs=1e-8)


def test_triangle_inequality():
    p = ElasticParams(1.0, 0.5)
    a, b, c = samples.arc(), samples.wave(), samples.bump()
    ab = shape_distance(a, b, p, FAST)
    bc = shape_distance(b, c, p, FAST)
    ac = shape_distance(a, c, p, FAST)
    assert ac <= 1.02 * (ab + bc)


def test_closed_shape_distance_uses_matched_endpoints():
    p = ElasticParams(1.0, 0.5)
    options = ShapeOptions(closed=True, grid_n=32, seed_stride=4)
    distance = shape_distance(samples.flower(5, n=65), samples.blob(n=65), p, options)
    path = shape_geodesic(samples.flower(5, n=65), samples.blob(n=65), p, options)
    assert distance == pytest.approx(path.match.distance)
    assert path.distance >= distance - 1e-12


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
