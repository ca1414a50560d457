#!/usr/bin/env python3
"""
Demo script for elastic shape geodesics.

Runs one open pair and one closed pair through the pipeline for a sweep of
rho = a / 2b and demonstrates:
- Transforms, alignment and geodesic paths between curves
- Distances growing as rho shrinks
- Projection of an open curve onto the closed curves
- Event emission through the console reporter
"""

import time
from pathlib import Path
from typing import Iterable, Optional

from elastica import build_pipeline, samples
from elastica.curve_core import horseshoe, normalize, secant_sample
from elastica.errors import NumericalError
from elastica.models import ElasticParams
from elastica.visualizer import MATPLOTLIB_AVAILABLE, GeodesicFigure

DEMO_RHOS = (2.0, 1.0, 0.5, 0.17)


def run_demo(rhos: Iterable[float] = DEMO_RHOS, steps: int = 7, grid_n: int = 64,
             verbose: bool = True, svg_dir: Optional[str] = None):
    """
    Run the geodesic demonstration.

    Args:
        rhos: ratios a / 2b to sweep (a = 1)
        steps: points along every geodesic
        grid_n: matching grid cells
        verbose: print pipeline events
        svg_dir: write one SVG figure per geodesic into this directory
    """
    rhos = list(rhos)
    print("Elastic geodesic demo")
    print(f"   Rhos: {rhos}")
    print(f"   Figures: {svg_dir if svg_dir and MATPLOTLIB_AVAILABLE else 'none'}")
    print("=" * 50)

    pipeline = None
    try:
        start_time = time.time()
        pairs = [("arc-wave", samples.arc(), samples.wave(), False),
                 ("flower-bone", samples.flower(5, n=65), samples.bone(n=65), True)]
        for rho in rhos:
            p = ElasticParams.from_rho(rho)
            for label, c1, c2, closed in pairs:
                pipeline = build_pipeline(p.a, p.b, verbose=verbose, steps=steps,
                                          grid_n=grid_n, closed=closed, seed_stride=4)
                try:
                    path = pipeline.geodesic(c1, c2)
                except NumericalError as exc:
                    print(f"   rho={rho:<5g} {label:12} failed: {exc}")
                    continue
                print(f"   rho={rho:<5g} {label:12} dist={path.distance:.4f}")
                if svg_dir and MATPLOTLIB_AVAILABLE:
                    out = Path(svg_dir) / f"{label}_rho{rho:g}.svg"
                    GeodesicFigure().save(path, out, title=f"rho={rho:g} dist={path.distance:.4f}")

        pipeline = build_pipeline(1.0, 1.0, verbose=verbose)
        _, residual = pipeline.close_curve(normalize(secant_sample(horseshoe(0.8), 65)))
        end_time = time.time()

        print("=" * 50)
        print("Demo completed successfully!")
        print(f"   Closed horseshoe residual: {residual:.3e}")
        print(f"   Total time: {end_time - start_time:.2f} seconds")

    except KeyboardInterrupt:
        print("\nDemo interrupted by user")
    except Exception as e:
        print(f"Demo failed: {e}")
        raise
    finally:
        if pipeline is not None and hasattr(pipeline, '_visualizer'):
            pipeline._visualizer.close()


def main():
    """Main entry point"""

    run_demo(
        rhos=DEMO_RHOS,
        steps=7,
        grid_n=64,
        verbose=True,
        svg_dir="/tmp/elastica"
    )


if __name__ == "__main__":
    main()
