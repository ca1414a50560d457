#!/usr/bin/env python3
"""
Tests for the closure constraint: defect, gradients, projection and the
endpoint relation of closed transforms.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from elastica import samples
from elastica.closed import (
    check_membership_V,
    closure_defect,
    closure_gradients,
    evaluate_closure,
    project_to_closed,
    real_inner,
)
from elastica.curve_core import horseshoe, normalize, rotation_index, secant_sample
from elastica.errors import NoConvergence
from elastica.models import ElasticParams, PlaneCurve, TransformedCurve
from elastica.transform import forward, inverse, l2_distance

PROJECTION_RHOS = (1.25, 1.0, 0.5, 0.17)


def open_test_curves():
    return [
        secant_sample(horseshoe(0.4), 65),
        secant_sample(horseshoe(0.8), 65),
        secant_sample(horseshoe(1.2), 65),
        samples.arc(1.6 * np.pi),
        samples.arc(1.75 * np.pi),
    ]


def test_defect_of_closed_curve_vanishes():
    for rho in (0.5, 1.0, 1.5):
        q = forward(samples.regular_polygon(4), ElasticParams.from_rho(rho))
        assert abs(closure_defect(q)) <= 1e-12


def test_defect_is_endpoint_displacement():
    p = ElasticParams(1.0, 0.3)
    assert closure_defect(forward(PlaneCurve([0, 1 + 2j]), p)) == pytest.approx(1 + 2j)

    rng = np.random.default_rng(2)
    for _ in range(20):
        c = samples.random_curve(rng, 30, max_angle=0.9 * np.pi * min(1.0, p.rho, 1 / p.rho))
        displacement = c.vertices[-1] - c.vertices[0]
        assert abs(closure_defect(forward(c, p)) - displacement) <= 1e-10 * c.arclength


@pytest.mark.parametrize("rho", PROJECTION_RHOS)
def test_gradients_match_finite_differences(rho):
    p = ElasticParams.from_rho(rho)
    rng = np.random.default_rng(4)
    eps = 1e-6
    for c in open_test_curves():
        q = forward(normalize(c), p)
        grad_re, grad_im = closure_gradients(q)
        for _ in range(3):
            direction = rng.normal(size=q.segment_count) + 1j * rng.normal(size=q.segment_count)
            plus = closure_defect(q.with_samples(q.samples + eps * direction))
            minus = closure_defect(q.with_samples(q.samples - eps * direction))
            derivative = (plus - minus) / (2 * eps)
            assert derivative.real == pytest.approx(
                real_inner(grad_re, direction, q.widths), abs=1e-5)
            assert derivative.imag == pytest.approx(
                real_inner(grad_im, direction, q.widths), abs=1e-5)


def test_evaluate_closure_bundles_defect_and_gradients():
    q = forward(normalize(secant_sample(horseshoe(0.8), 33)), ElasticParams.from_rho(0.5))
    closure = evaluate_closure(q)
    grad_re, grad_im = closure_gradients(q)
    assert closure.value == closure_defect(q)
    assert_allclose(closure.grad_re, grad_re)
    assert_allclose(closure.grad_im, grad_im)


def test_gradients_of_constant_transform():
    p = ElasticParams(1.0, 0.5)
    q = TransformedCurve([2 * p.b, 2 * p.b], [0, 0.5, 1], p)
    grad_re, grad_im = closure_gradients(q)
    assert_allclose(grad_re, q.samples / (2 * p.b ** 2))
    assert_allclose(grad_im, 1j * (p.b / p.a) * q.samples / (2 * p.b ** 2))


def test_closure_at_equal_weights_is_coordinate_orthogonality():
    p = ElasticParams(1.0, 1.0)
    q = forward(samples.flower(5, n=97), p)
    x, y = q.samples.real, q.samples.imag
    assert np.sum(x * y * q.widths) == pytest.approx(0.0, abs=1e-12)
    assert np.sum(x ** 2 * q.widths) == pytest.approx(np.sum(y ** 2 * q.widths), abs=1e-12)


def test_closed_transform_is_returned_unchanged():
    q = forward(samples.blob(n=65), ElasticParams(1.0, 0.5))
    assert project_to_closed(q) is q


@pytest.mark.parametrize("rho", PROJECTION_RHOS)
def test_projection_of_open_curves(rho):
    p = ElasticParams.from_rho(rho)
    for c in open_test_curves():
        q = forward(normalize(c), p)
        closed = project_to_closed(q, tol=1e-6, max_iter=200)
        assert abs(closure_defect(closed)) <= 1e-6
        curve = inverse(closed)
        assert abs(curve.vertices[-1] - curve.vertices[0]) <= 1e-6


def test_projection_of_perturbed_closed_curve_stays_close():
    p = ElasticParams(1.0, 0.5)
    rng = np.random.default_rng(8)
    q = forward(normalize(samples.flower(5, n=65)), p)
    noise = 1e-3 * (rng.normal(size=q.segment_count) + 1j * rng.normal(size=q.segment_count))
    noisy = q.with_samples(q.samples + noise)
    closed = project_to_closed(noisy)
    assert abs(closure_defect(closed)) <= 1e-6 * p.radius ** 2
    assert l2_distance(closed, noisy) <= 2 * l2_distance(noisy, q)


def test_projection_reports_best_iterate():
    q = forward(normalize(secant_sample(horseshoe(1.2), 65)), ElasticParams(1.0, 0.5))
    with pytest.raises(NoConvergence) as info:
        project_to_closed(q, tol=1e-15, max_iter=1)
    assert info.value.iterations == 1
    assert info.value.best is not None
    assert info.value.residual < abs(closure_defect(q))
    assert info.value.exit_code == 4


@pytest.mark.parametrize("rho", (0.5, 1.0, 1.25))
def test_counterclockwise_polygon_lies_in_index_one(rho):
    q = forward(samples.regular_polygon(8), ElasticParams.from_rho(rho))
    assert check_membership_V(q, 1)


@pytest.mark.parametrize("sides, rho", [(3, 2.0), (3, 1.25), (4, 1.5), (5, 1.5), (5, 2.0)])
def test_sharp_polygons_lie_in_index_one(sides, rho):
    polygon = samples.regular_polygon(sides)
    assert rotation_index(polygon) == 1
    assert check_membership_V(forward(polygon, ElasticParams.from_rho(rho)), 1)


def test_membership_depends_on_index_through_the_multiplier():
    q = forward(samples.regular_polygon(8), ElasticParams.from_rho(0.5))
    assert not check_membership_V(q, 0)

    q = forward(samples.regular_polygon(8), ElasticParams(1.0, 0.5))
    for ell in range(-2, 3):
        assert check_membership_V(q, ell) == check_membership_V(q, ell + 2)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
