#!/usr/bin/env python3
"""
Tests for leave-one-out classification, dataset files and the rho table.
"""

import numpy as np
import pytest

from elastica import samples
from elastica.classifier import (
    PairDistance,
    arclength_distance,
    classify,
    distance_matrix,
    format_report,
    format_table,
    leave_one_out,
    load_dataset,
    method_label,
    rho_table,
    save_dataset,
    write_matrix_csv,
)
from elastica.errors import DatasetLayoutError
from elastica.models import Dataset, ElasticParams, ShapeOptions
from elastica.transform import rotate_curve

FAST = ShapeOptions(grid_n=32)


def test_leave_one_out_on_a_hand_matrix():
    matrix = np.array([
        [0.0, 1.0, 5.0, 5.0],
        [1.0, 0.0, 5.0, 0.5],
        [5.0, 5.0, 0.0, 1.0],
        [5.0, 5.0, 1.0, 0.0],
    ])
    report = leave_one_out(matrix, ["x", "x", "y", "y"], names=["a", "b", "c", "d"])
    assert report.predictions == ["x", "y", "y", "y"]
    assert report.rate == pytest.approx(0.75)
    assert report.per_class == {"x": 0.5, "y": 1.0}
    assert report.perfect == 1
    assert "misclassified b: x -> y" in format_report(report)


def test_arclength_distance_invariances():
    c1, c2 = samples.wave(), samples.bump()
    base = arclength_distance(c1, c2)
    assert arclength_distance(c1, c1) == pytest.approx(0.0, abs=1e-12)
    assert arclength_distance(c1.translated(3 + 1j), c2) == pytest.approx(base, abs=1e-10)
    assert arclength_distance(c1.scaled(2.5), c2) == pytest.approx(base, abs=1e-10)
    # no rotation alignment in the baseline
    assert arclength_distance(rotate_curve(c1, 1.0), c2) != pytest.approx(base, abs=1e-3)


def test_distance_matrix_with_workers_matches_serial():
    dataset = samples.separable_dataset(per_class=3, n=24)
    distance = PairDistance("arclength")
    serial = distance_matrix(dataset.curves, distance, jobs=1)
    pooled = distance_matrix(dataset.curves, distance, jobs=2)
    np.testing.assert_allclose(pooled, serial)
    assert np.all(np.diag(serial) == 0)


def test_elastic_distance_matrix_is_nearly_symmetric():
    curves = [samples.OPEN_SHAPES[name]() for name in ("half_arc", "wave", "bump", "s_curve")]
    distance = PairDistance("elastic", ElasticParams.srvf(), ShapeOptions(grid_n=64))
    matrix = distance_matrix(curves, distance, jobs=2)
    assert np.all(np.diag(matrix) == 0)
    upper = np.triu_indices(len(curves), k=1)
    forward_values, backward_values = matrix[upper], matrix.T[upper]
    assert np.all(forward_values > 0)
    assert np.all(np.abs(forward_values - backward_values)
                  <= 0.02 * np.maximum(forward_values, backward_values))


def test_distance_matrix_reports_pairs():
    dataset = samples.separable_dataset(per_class=2, n=24)
    events = []
    distance_matrix(dataset.curves, PairDistance("arclength"),
                    emit=lambda name, payload: events.append((name, payload)))
    assert len(events) == 4 * 3
    assert {name for name, _ in events} == {"classify.pair"}


def test_separable_dataset_is_classified():
    dataset = samples.separable_dataset(per_class=10)
    distance = PairDistance("elastic", ElasticParams.from_rho(1.0), FAST)
    _, report = classify(dataset, distance, jobs=2)
    assert report.rate >= 0.95


def test_elastic_distance_beats_arclength_on_nuisance_transformations():
    dataset = samples.hard_dataset(per_class=10)
    _, elastic = classify(dataset, PairDistance("elastic", ElasticParams.srvf(), FAST), jobs=2)
    _, baseline = classify(dataset, PairDistance("arclength"), method="Arclength")
    assert elastic.rate >= 0.9
    assert elastic.rate > baseline.rate


def test_dataset_round_trip(tmp_path):
    dataset = samples.separable_dataset(per_class=2, n=16)
    written = save_dataset(dataset, tmp_path)
    assert len(written) == 4
    loaded = load_dataset(tmp_path)
    assert loaded.classes == ["circle", "square"]
    assert loaded.names == ["circle/circle_00", "circle/circle_01",
                            "square/square_00", "square/square_01"]
    np.testing.assert_allclose(loaded.curves[0].vertices, dataset.curves[0].vertices)


def test_layout_errors(tmp_path):
    dataset = samples.separable_dataset(per_class=2, n=16)
    single = Dataset(dataset.curves[:3], dataset.labels[:3], dataset.names[:3])
    save_dataset(single, tmp_path / "single")
    with pytest.raises(DatasetLayoutError, match="square"):
        load_dataset(tmp_path / "single")

    one_class = Dataset(dataset.curves[:2], dataset.labels[:2], dataset.names[:2])
    save_dataset(one_class, tmp_path / "one")
    with pytest.raises(DatasetLayoutError):
        load_dataset(tmp_path / "one")

    with pytest.raises(DatasetLayoutError):
        load_dataset(tmp_path / "missing")


def test_method_labels():
    assert method_label(0.25) == "rho=1/4"
    assert method_label(0.5) == "rho=1/2"
    assert method_label(3.0) == "rho=3"


def test_rho_table_rows():
    dataset = samples.separable_dataset(per_class=2, n=16)
    reports = rho_table(dataset, options=FAST)
    assert [r.method for r in reports] == ["Arclength", "rho=1/4", "rho=1/2", "rho=1",
                                           "rho=2", "rho=3", "rho=4"]
    table = format_table(reports)
    assert table.splitlines()[0] == "| Method | Classif. Rate | Perfect Matches |"
    assert len(table.splitlines()) == 2 + len(reports)


def test_matrix_csv(tmp_path):
    out = write_matrix_csv(np.array([[0.0, 1.5], [2.0, 0.0]]), ["a", "b"], tmp_path / "m.csv")
    assert out.read_text().splitlines() == [",a,b", "a,0,1.5", "b,2,0"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
