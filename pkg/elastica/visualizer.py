"""
Reporting for shape-analysis runs.

Provides a console reporter for pipeline events and matplotlib-based SVG
figures of geodesic paths with their optimal reparameterization.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Dict, Optional, Union

# Try to import matplotlib, handle gracefully if not available
try:
    import matplotlib
    from matplotlib.figure import Figure
    MATPLOTLIB_AVAILABLE = True
except ImportError:
    MATPLOTLIB_AVAILABLE = False
    matplotlib = None
    Figure = None

from .models import GeodesicPath, PlaneCurve

LOG_ENV = "ELASTICA_LOG"


def log_level_from_env(default: str = "WARNING") -> int:
    name = os.environ.get(LOG_ENV, default).strip().upper()
    return getattr(logging, name, logging.WARNING) if name else logging.WARNING


def configure_logging(verbose: bool = False) -> int:
    """Set the root logging level from ELASTICA_LOG (INFO when verbose)"""
    level = log_level_from_env()
    if verbose:
        level = min(level, logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)
    return level


class ConsoleVisualizer:
    """Prints pipeline events, one line each, to standard error"""

    def __init__(self, stream=None):
        self.stream = stream or sys.stderr

    def on_step(self, name: str, payload: Dict):
        station = (name.split('.', 1)[0] if '.' in name else name).upper()
        print(f"[{station:10}] {name:28} {payload}", file=self.stream)

    def close(self):
        pass


class QuietVisualizer:
    """Discards events"""

    def on_step(self, name: str, payload: Dict):
        pass

    def close(self):
        pass


def create_visualizer(verbose: Optional[bool] = None):
    """Console reporter when verbose (or ELASTICA_LOG is INFO or lower), else a quiet one"""
    if verbose is None:
        verbose = log_level_from_env() <= logging.INFO
    return ConsoleVisualizer() if verbose else QuietVisualizer()


class GeodesicFigure:
    """
    SVG figure of a geodesic: the row of curves along the path, then the
    optimal reparameterization in blue against the identity in red.

    Every curve is drawn as its own group with id ``curve-<k>``.
    """

    def __init__(self, panel_size: float = 1.8):
        if not MATPLOTLIB_AVAILABLE:
            raise ImportError("matplotlib is not available")
        self.panel_size = panel_size

    def _draw_curve(self, ax, curve: PlaneCurve, index: int):
        z = curve.vertices
        line, = ax.plot(z.real, z.imag, color="black", linewidth=1.2)
        line.set_gid(f"curve-{index}")
        ax.set_aspect("equal", adjustable="datalim")
        ax.set_xticks([])
        ax.set_yticks([])

    def render(self, path: GeodesicPath, title: Optional[str] = None):
        curves = [point for point in path.points if isinstance(point, PlaneCurve)]
        panels = len(curves) + (1 if path.match is not None else 0)
        fig = Figure(figsize=(self.panel_size * panels, self.panel_size + 0.6))
        for index, curve in enumerate(curves):
            self._draw_curve(fig.add_subplot(1, panels, index + 1), curve, index)
        if path.match is not None:
            ax = fig.add_subplot(1, panels, panels)
            gamma = path.match.gamma
            warp, = ax.plot(gamma.breakpoints, gamma.values, color="blue", linewidth=1.2)
            warp.set_gid("warp")
            identity, = ax.plot([0, 1], [0, 1], color="red", linewidth=0.8)
            identity.set_gid("identity")
            ax.set_xlim(0, 1)
            ax.set_ylim(0, 1)
            ax.set_aspect("equal")
        fig.suptitle(title or f"dist={path.distance:.4f}")
        return fig

    def save(self, path: GeodesicPath, out: Union[str, Path], title: Optional[str] = None) -> Path:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig = self.render(path, title)
        fig.savefig(out, format="svg")
        return out
