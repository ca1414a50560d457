#!/usr/bin/env python3
"""
Tests for the pipeline event flow and its reporters.

RecordingVisualizer stands in for the console reporter so the emitted
events can be checked in order.
"""

import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from elastica import build_pipeline, samples
from elastica.curve_core import horseshoe, normalize, secant_sample
from elastica.visualizer import (
    MATPLOTLIB_AVAILABLE,
    ConsoleVisualizer,
    GeodesicFigure,
    QuietVisualizer,
    create_visualizer,
)


class RecordingVisualizer(ConsoleVisualizer):
    """Console reporter that also keeps every event"""

    def __init__(self):
        super().__init__(stream=io.StringIO())
        self.events = []

    def on_step(self, name, payload):
        self.events.append((name, payload))
        super().on_step(name, payload)

    @property
    def names(self):
        return [name for name, _ in self.events]


def recording_pipeline(**kwargs):
    viz = RecordingVisualizer()
    return build_pipeline(visualizer=viz, **kwargs), viz


def test_transform_and_invert_events():
    pipeline, viz = recording_pipeline()
    c = samples.wave()
    q = pipeline.transform_curve(c)
    back = pipeline.invert(q, name="wave")
    assert viz.names == ["transform.forward", "transform.inverse"]
    assert viz.events[0][1]["segments"] == c.segment_count
    np.testing.assert_allclose(back.vertices, c.vertices - c.vertices[0], atol=1e-10)
    assert back.name == "wave"


def test_geodesic_events_in_order():
    pipeline, viz = recording_pipeline(grid_n=32, steps=5)
    path = pipeline.geodesic(samples.arc(), samples.wave())
    assert viz.names == ["elastica.geodesic_start", "matching.match", "geodesic.path"]
    assert viz.events[-1][1]["steps"] == 5
    assert viz.events[-1][1]["distance"] == pytest.approx(path.distance, abs=1e-6)


def test_distance_agrees_with_geodesic():
    pipeline, viz = recording_pipeline(grid_n=32)
    c1, c2 = samples.hook(), samples.s_curve()
    distance = pipeline.distance(c1, c2)
    assert distance == pytest.approx(pipeline.geodesic(c1, c2).match.distance)
    assert viz.names[0] == "matching.distance"


def test_close_curve_events():
    pipeline, viz = recording_pipeline(a=1.0, b=1.0)
    curve = normalize(secant_sample(horseshoe(0.8), 65))
    closed, residual = pipeline.close_curve(curve)
    assert closed.closed
    assert residual <= pipeline.options.tolerance(pipeline.params)
    assert viz.names[0] == "transform.forward"
    assert viz.names[1] == "closed.project_start"
    assert viz.names[-1] == "closed.project_complete"
    assert not viz.events[-1][1]["unchanged"]


def test_closing_a_closed_curve_is_a_no_op():
    pipeline, viz = recording_pipeline()
    curve = samples.blob(n=65)
    closed, _ = pipeline.close_curve(curve)
    assert closed is curve
    assert viz.events[-1][1]["unchanged"]


def test_classify_events():
    pipeline, viz = recording_pipeline(grid_n=32)
    dataset = samples.separable_dataset(per_class=2, n=24)
    _, report = pipeline.classify(dataset, method="arclength")
    assert viz.names == ["classify.start", "classify.report"]
    assert viz.events[0][1] == {"samples": 4, "classes": 2, "method": "arclength"}
    assert viz.events[1][1]["method"] == report.method == "Arclength"


def test_console_line_format():
    stream = io.StringIO()
    ConsoleVisualizer(stream).on_step("transform.forward", {"segments": 3})
    line = stream.getvalue().rstrip("\n")
    assert line.startswith("[TRANSFORM ] transform.forward")
    assert line.endswith("{'segments': 3}")
    assert line.index("{") == len("[TRANSFORM ] ") + 29


def test_create_visualizer_follows_environment(monkeypatch):
    monkeypatch.setenv("ELASTICA_LOG", "INFO")
    assert isinstance(create_visualizer(), ConsoleVisualizer)
    monkeypatch.setenv("ELASTICA_LOG", "WARNING")
    assert isinstance(create_visualizer(), QuietVisualizer)
    assert isinstance(create_visualizer(True), ConsoleVisualizer)


@pytest.mark.skipif(not MATPLOTLIB_AVAILABLE, reason="matplotlib not installed")
def test_geodesic_figure_has_one_group_per_curve(tmp_path):
    pipeline, _ = recording_pipeline(grid_n=32, steps=4)
    path = pipeline.geodesic(samples.arc(), samples.bump())
    out = GeodesicFigure().save(path, tmp_path / "path.svg")
    ids = [element.get("id", "") for element in ET.parse(out).iter()]
    assert sum(1 for value in ids if value.startswith("curve-")) == 4
    assert "warp" in ids and "identity" in ids


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
