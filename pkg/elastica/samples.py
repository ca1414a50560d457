"""
Bundled test curves: open curve pairs, outline shapes, random bounded-angle
polygons and synthetic two-class datasets.
"""

from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .models import Dataset, PlaneCurve, uniform_params


def _sampled(name: str, path: Callable[[np.ndarray], np.ndarray], n: int,
             closed: bool = False) -> PlaneCurve:
    t = uniform_params(n - 1)
    vertices = np.asarray(path(t), dtype=complex)
    if closed:
        vertices[-1] = vertices[0]
    return PlaneCurve(vertices, t, closed=closed, name=name)


# Open curves

def arc(sweep: float = np.pi, n: int = 64) -> PlaneCurve:
    return _sampled(f"arc_{sweep:.2f}", lambda t: np.exp(1j * sweep * t), n)


def wave(periods: float = 1.0, amplitude: float = 0.15, n: int = 64) -> PlaneCurve:
    return _sampled(f"wave_{periods:g}",
                    lambda t: t + 1j * amplitude * np.sin(2 * np.pi * periods * t), n)


def bump(center: float = 0.5, height: float = 0.25, width: float = 0.08,
         n: int = 64) -> PlaneCurve:
    return _sampled(f"bump_{center:.2f}",
                    lambda t: t + 1j * height * np.exp(-((t - center) / width) ** 2), n)


def hook(n: int = 64) -> PlaneCurve:
    def path(t):
        # straight shaft for the first 60% of the parameter, then a half turn
        shaft = np.minimum(t, 0.6) / 0.6
        turn = np.clip((t - 0.6) / 0.4, 0.0, 1.0)
        return 1j * shaft + 0.2 + 0.2 * np.exp(1j * np.pi * (1.0 - turn))
    return _sampled("hook", path, n)


def spiral(turns: float = 1.25, n: int = 64) -> PlaneCurve:
    return _sampled("spiral",
                    lambda t: (0.3 + 0.7 * t) * np.exp(2j * np.pi * turns * t), n)


def s_curve(n: int = 64) -> PlaneCurve:
    return _sampled("s_curve", lambda t: np.sin(np.pi * (t - 0.5)) * 0.5 + 1j * (
        0.3 * np.sin(2 * np.pi * t)), n)


OPEN_SHAPES: Dict[str, Callable[[], PlaneCurve]] = {
    "half_arc": lambda: arc(np.pi),
    "quarter_arc": lambda: arc(np.pi / 2),
    "wave": lambda: wave(1.0),
    "double_wave": lambda: wave(2.0, 0.1),
    "bump": lambda: bump(0.5),
    "early_bump": lambda: bump(0.3),
    "hook": hook,
    "spiral": spiral,
    "s_curve": s_curve,
}

OPEN_PAIRS: List[Tuple[str, str]] = [
    ("half_arc", "wave"),
    ("bump", "double_wave"),
    ("quarter_arc", "s_curve"),
    ("hook", "half_arc"),
    ("spiral", "half_arc"),
    ("bump", "early_bump"),
    ("wave", "double_wave"),
    ("s_curve", "wave"),
    ("hook", "bump"),
    ("quarter_arc", "early_bump"),
]


def open_pairs() -> List[Tuple[str, PlaneCurve, PlaneCurve]]:
    """The bundled open-curve pairs as (label, first, second)"""
    return [(f"{a}-{b}", OPEN_SHAPES[a](), OPEN_SHAPES[b]()) for a, b in OPEN_PAIRS]


# Closed outlines

def polar_outline(name: str, radius: Callable[[np.ndarray], np.ndarray],
                  n: int = 128) -> PlaneCurve:
    def path(t):
        angle = 2 * np.pi * t
        return radius(angle) * np.exp(1j * angle)
    return _sampled(name, path, n, closed=True)


def flower(petals: int = 5, depth: float = 0.3, n: int = 128) -> PlaneCurve:
    return polar_outline(f"flower_{petals}", lambda a: 1.0 + depth * np.cos(petals * a), n)


def bone(n: int = 128) -> PlaneCurve:
    return polar_outline("bone", lambda a: 1.0 + 0.45 * np.cos(2 * a) + 0.15 * np.cos(4 * a), n)


def blob(n: int = 128) -> PlaneCurve:
    return polar_outline(
        "blob", lambda a: 1.0 + 0.2 * np.cos(a) + 0.15 * np.sin(2 * a) + 0.1 * np.cos(3 * a + 1.0), n)


OUTLINES: Dict[str, Callable[..., PlaneCurve]] = {
    "flower_5": lambda n=128: flower(5, n=n),
    "flower_6": lambda n=128: flower(6, n=n),
    "bone": bone,
    "blob": blob,
}


def regular_polygon(sides: int, radius: float = 1.0, clockwise: bool = False) -> PlaneCurve:
    angles = np.linspace(0.0, 2 * np.pi, sides + 1)
    vertices = radius * np.exp((-1j if clockwise else 1j) * angles)
    vertices[-1] = vertices[0]
    return PlaneCurve(vertices, closed=True, name=f"polygon_{sides}")


def square_outline(n: int = 48, side: float = 2.0) -> PlaneCurve:
    """Counterclockwise square sampled evenly by arclength, starting mid right side"""
    def path(t):
        s = (4.0 * t + 0.5) % 4.0
        corners = np.array([1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) * side / 2
        edge = np.minimum(np.floor(s).astype(int), 3)
        frac = s - edge
        return corners[edge] + frac * (corners[edge + 1] - corners[edge])
    return _sampled("square", path, n, closed=True)


# Random curves

def random_curve(rng: np.random.Generator, segments: int, max_angle: float,
                 closed: bool = False, random_params: bool = True) -> PlaneCurve:
    """
    Open polygon with every exterior angle strictly below ``max_angle``.

    The first edge direction lies in (-pi/2, pi/2), edge lengths in
    [0.5, 1.5] and, with ``random_params``, breakpoints are random.
    """
    turns = rng.uniform(-max_angle, max_angle, segments - 1) * 0.999
    directions = rng.uniform(-np.pi / 2, np.pi / 2) + np.concatenate([[0.0], np.cumsum(turns)])
    lengths = rng.uniform(0.5, 1.5, segments)
    vertices = np.concatenate([[0.0], np.cumsum(lengths * np.exp(1j * directions))])
    vertices = vertices * rng.uniform(0.5, 2.0) + complex(*rng.normal(size=2))
    if random_params:
        widths = rng.uniform(0.5, 1.5, segments)
        params = np.concatenate([[0.0], np.cumsum(widths)])
        params /= params[-1]
    else:
        params = uniform_params(segments)
    return PlaneCurve(vertices, params, closed=closed, name="random")


def random_warp(rng: np.random.Generator, strength: float = 0.25) -> Callable[[np.ndarray], np.ndarray]:
    """Smooth increasing map of [0, 1] onto itself: t + eps sin(pi t) / pi with |eps| < 1"""
    eps = rng.uniform(-strength, strength) * np.pi
    return lambda t: t + eps * np.sin(np.pi * np.asarray(t)) / np.pi


# Synthetic datasets

def separable_dataset(per_class: int = 10, seed: int = 0, n: int = 48,
                      jitter: float = 0.01) -> Dataset:
    """Jittered circles against jittered squares of comparable size"""
    rng = np.random.default_rng(seed)
    curves, labels, names = [], [], []
    for label in ("circle", "square"):
        for index in range(per_class):
            if label == "circle":
                base = _sampled("circle", lambda t: np.exp(2j * np.pi * t), n, closed=True)
            else:
                base = square_outline(n)
            noise = jitter * (rng.normal(size=n) + 1j * rng.normal(size=n))
            noise[-1] = noise[0]
            vertices = (base.vertices + noise) * rng.uniform(0.9, 1.1)
            curves.append(PlaneCurve(vertices, base.params, closed=True,
                                     name=f"{label}_{index:02d}"))
            labels.append(label)
            names.append(f"{label}_{index:02d}")
    return Dataset(curves, labels, names)


def hard_dataset(per_class: int = 10, seed: int = 0, n: int = 64) -> Dataset:
    """
    One-bump against two-bump open curves under nuisance transformations.

    Each sample is rigidly rotated by a random angle, its bumps are moved
    along the curve and its parameterization is warped, so only a
    rotation- and reparameterization-aware distance separates the classes.
    """
    rng = np.random.default_rng(seed)
    curves, labels, names = [], [], []
    for label in ("one_bump", "two_bumps"):
        for index in range(per_class):
            if label == "one_bump":
                centers = [0.5 + rng.uniform(-0.12, 0.12)]
            else:
                centers = [0.3 + rng.uniform(-0.06, 0.06), 0.7 + rng.uniform(-0.06, 0.06)]
            warp = random_warp(rng)
            turn = np.exp(1j * rng.uniform(0.0, 2 * np.pi))

            def path(t, centers=centers, warp=warp, turn=turn):
                x = warp(t)
                y = sum(0.25 * np.exp(-((x - c) / 0.07) ** 2) for c in centers)
                return turn * (x + 1j * y)

            name = f"{label}_{index:02d}"
            curves.append(_sampled(name, path, n))
            labels.append(label)
            names.append(name)
    return Dataset(curves, labels, names)


SYNTHETIC_KINDS = {
    "separable": separable_dataset,
    "hard": hard_dataset,
}


def make_synthetic_dataset(kind: str, per_class: int = 10, seed: int = 0,
                           n: Optional[int] = None) -> Dataset:
    builder = SYNTHETIC_KINDS[kind]
    if n is None:
        return builder(per_class=per_class, seed=seed)
    return builder(per_class=per_class, seed=seed, n=n)
