"""
Elastica: F_{a,b} transforms for elastic shape analysis of plane curves

Transforms piecewise-linear curves so that the elastic metric g^{a,b}
becomes the flat L2 metric, and builds geodesics, shape distances,
closed-curve projections and nearest-neighbour classification on top.

Example usage:
    from elastica import build_pipeline, samples

    pipeline = build_pipeline(a=1.0, b=0.25, steps=7)
    path = pipeline.geodesic(samples.arc(), samples.wave())
    print(f"dist={path.distance:.4f}")
"""

from . import samples
from .closed import (
    check_membership_V,
    closure_defect,
    closure_gradients,
    evaluate_closure,
    project_to_closed,
)
from .curve_core import (
    CurveGenerator,
    arclength_parameterize,
    cyclic_shift,
    edge_vectors,
    exterior_angles,
    normalize,
    polar_decompose,
    resample_uniform,
    rotation_index,
    secant_sample,
)
from .errors import (
    Antipodal,
    DegenerateInner,
    ElasticaError,
    NoConvergence,
    NotClosed,
    OffSphere,
    ParamRegime,
    SegmentMismatch,
    SingularJacobian,
    StraighteningFailed,
    ZeroEdge,
)
from .geodesics import (
    closed_geodesic,
    flat_geodesic,
    shape_distance,
    shape_geodesic,
    sphere_geodesic,
)
from .matching import (
    dp_reparameterize,
    injectivity_check,
    match_closed,
    match_open,
    optimal_rotation,
)
from .models import (
    ElasticParams,
    GeodesicPath,
    MatchResult,
    PlaneCurve,
    PolarDerivative,
    Reparameterization,
    ShapeOptions,
    SpaceTag,
    TransformedCurve,
)
from .pipeline import ShapeAnalysisPipeline, build_pipeline
from .transform import (
    branch_images,
    cone_projection,
    forward,
    inverse,
    pullback_metric_eval,
    reparam_action,
    rotate_curve,
    rotate_transform,
    scale_equivariance_check,
)
from .visualizer import ConsoleVisualizer, GeodesicFigure, create_visualizer

__version__ = "0.1.0"

__all__ = [
    # Curves and transforms
    "PlaneCurve",
    "PolarDerivative",
    "ElasticParams",
    "TransformedCurve",
    "Reparameterization",
    "MatchResult",
    "GeodesicPath",
    "SpaceTag",
    "ShapeOptions",
    "CurveGenerator",
    "edge_vectors",
    "polar_decompose",
    "exterior_angles",
    "rotation_index",
    "normalize",
    "resample_uniform",
    "arclength_parameterize",
    "cyclic_shift",
    "secant_sample",
    "forward",
    "inverse",
    "rotate_curve",
    "rotate_transform",
    "scale_equivariance_check",
    "reparam_action",
    "pullback_metric_eval",
    "cone_projection",
    "branch_images",

    # Closed curves, matching and geodesics
    "closure_defect",
    "closure_gradients",
    "evaluate_closure",
    "project_to_closed",
    "check_membership_V",
    "optimal_rotation",
    "dp_reparameterize",
    "match_open",
    "match_closed",
    "injectivity_check",
    "flat_geodesic",
    "sphere_geodesic",
    "closed_geodesic",
    "shape_geodesic",
    "shape_distance",

    # Errors
    "ElasticaError",
    "ZeroEdge",
    "NotClosed",
    "SegmentMismatch",
    "ParamRegime",
    "OffSphere",
    "NoConvergence",
    "SingularJacobian",
    "Antipodal",
    "StraighteningFailed",
    "DegenerateInner",

    # Pipeline and reporting
    "ShapeAnalysisPipeline",
    "build_pipeline",
    "ConsoleVisualizer",
    "GeodesicFigure",
    "create_visualizer",
    "samples",
]
