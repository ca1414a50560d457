"""
Shape-analysis pipeline for elastic transforms.

Coordinates the library modules behind one object:
- transform: curve to transform and back
- closed: projection of open curves onto the closed ones
- matching/geodesics: alignment, geodesic paths and distances
- classifier: leave-one-out classification and the rho table

Every step reports through an ``emit(name, payload)`` callback, so a console
reporter (or any other listener) can follow a run.
"""

from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .classifier import PairDistance, TABLE_RHOS, classify, options_for, rho_table
from .closed import closure_defect, project_to_closed
from .curve_core import normalize
from .geodesics import distance_of_match, shape_geodesic
from .matching import match_curves
from .models import (
    ClassificationReport,
    Dataset,
    ElasticParams,
    GeodesicPath,
    PlaneCurve,
    ShapeOptions,
    TransformedCurve,
)
from .transform import forward, inverse
from .visualizer import create_visualizer


class ShapeAnalysisPipeline:
    """
    Runs elastic shape computations for one choice of (a, b).

    Options are held as a ShapeOptions value; the pipeline never mutates it.
    """

    def __init__(self,
                 params: ElasticParams,
                 emit: Callable[[str, Dict], None],
                 options: Optional[ShapeOptions] = None):
        self.params = params
        self.emit = emit
        self.options = options or ShapeOptions()

    def transform_curve(self, curve: PlaneCurve) -> TransformedCurve:
        q = forward(curve, self.params)
        self.emit("transform.forward", {
            "curve": curve.name,
            "segments": curve.segment_count,
            "rho": round(self.params.rho, 6),
        })
        return q

    def invert(self, q: TransformedCurve, closed: bool = False, name: str = "") -> PlaneCurve:
        curve = inverse(q, closed=closed, name=name)
        self.emit("transform.inverse", {"segments": q.segment_count, "closed": closed})
        return curve

    def close_curve(self, curve: PlaneCurve) -> Tuple[PlaneCurve, float]:
        """
        Project a curve onto the closed curves.

        Returns:
            the closed curve and the final closure residual |f|
        """
        q = self.transform_curve(normalize(curve, translate=True, scale=False))
        start = abs(closure_defect(q))
        self.emit("closed.project_start", {"curve": curve.name, "residual": start})
        tol = self.options.tolerance(self.params)
        if start <= tol:
            self.emit("closed.project_complete", {"curve": curve.name, "residual": start,
                                                  "unchanged": True})
            return curve, start

        projected = project_to_closed(q, tol=tol, max_iter=self.options.max_iter)
        residual = abs(closure_defect(projected))
        closed = self.invert(projected, closed=True, name=curve.name)
        self.emit("closed.project_complete", {"curve": curve.name, "residual": residual,
                                              "unchanged": False})
        return closed, residual

    def geodesic(self, c1: PlaneCurve, c2: PlaneCurve) -> GeodesicPath:
        self.emit("elastica.geodesic_start", {
            "from": c1.name, "to": c2.name, "rho": round(self.params.rho, 6),
            "closed": self.options.closed, "fixed_length": self.options.fixed_length,
        })
        path = shape_geodesic(c1, c2, self.params, self.options)
        self.emit("matching.match", {
            "rotation": round(path.match.rotation, 6),
            "seed": path.match.seed,
            "rounds": path.match.rounds,
        })
        self.emit("geodesic.path", {
            "space": path.space.name.lower(),
            "steps": len(path.points),
            "distance": round(path.distance, 6),
            "straightened": path.diagnostics.get("straightened", False),
        })
        return path

    def distance(self, c1: PlaneCurve, c2: PlaneCurve) -> float:
        first = normalize(c1, translate=True, scale=self.options.fixed_length)
        second = normalize(c2, translate=True, scale=self.options.fixed_length)
        match = match_curves(first, second, self.params, self.options)
        value = distance_of_match(match, self.options)
        self.emit("matching.distance", {"from": c1.name, "to": c2.name,
                                        "distance": round(value, 6), "seed": match.seed})
        return value

    def classify(self, dataset: Dataset, method: str = "elastic",
                 jobs: int = 1) -> Tuple[np.ndarray, ClassificationReport]:
        options = options_for(dataset, self.options)
        self.emit("classify.start", {"samples": len(dataset.curves),
                                     "classes": len(dataset.classes), "method": method})
        distance = PairDistance(method, self.params, options)
        label = "Arclength" if method == "arclength" else f"rho={self.params.rho:g}"
        matrix, report = classify(dataset, distance, jobs, method=label)
        self.emit("classify.report", {"method": report.method, "rate": round(report.rate, 4),
                                      "perfect": report.perfect})
        return matrix, report

    def rho_table(self, dataset: Dataset, rhos=TABLE_RHOS,
                  jobs: int = 1) -> List[ClassificationReport]:
        options = options_for(dataset, self.options)
        self.emit("classify.table_start", {"rhos": list(rhos)})
        reports = rho_table(dataset, rhos, options, jobs)
        for report in reports:
            self.emit("classify.report", {"method": report.method,
                                          "rate": round(report.rate, 4),
                                          "perfect": report.perfect})
        return reports


def build_pipeline(a: float = 1.0, b: float = 0.5, verbose: Optional[bool] = None,
                   visualizer=None, **option_overrides) -> ShapeAnalysisPipeline:
    """
    Factory function to create a pipeline with its event reporter.

    Args:
        a, b: elastic metric weights
        verbose: print events to standard error (defaults from ELASTICA_LOG)
        visualizer: explicit event listener with an ``on_step`` method
        **option_overrides: ShapeOptions fields
    """
    visualizer = visualizer or create_visualizer(verbose)
    pipeline = ShapeAnalysisPipeline(
        params=ElasticParams(a, b),
        emit=visualizer.on_step,
        options=ShapeOptions(**option_overrides),
    )
    pipeline._visualizer = visualizer
    return pipeline
