"""
Optimal alignment of transformed curves over rotations, reparameterizations
and, for closed curves, starting points.
"""

import logging
import warnings
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from .curve_core import cyclic_shift, exterior_angles, normalize, polar_decompose
from .errors import DegenerateInner, SegmentMismatch
from .models import (
    ElasticParams,
    InjectivityReport,
    MatchResult,
    PlaneCurve,
    Reparameterization,
    RotationAlignment,
    ShapeOptions,
    TransformedCurve,
    uniform_params,
)
from .transform import (
    common_refinement,
    forward,
    l2_distance,
    reparam_action,
    rotate_transform,
)

logger = logging.getLogger(__name__)

COARSEST_GRID = 8


class DPSolution(NamedTuple):
    gamma: Reparameterization
    cost: float


def optimal_rotation(q1: TransformedCurve, q2: TransformedCurve) -> RotationAlignment:
    """
    Rotation e^{i phi} of q2 closest to q1 in L2.

    phi is the argument of the complex inner product of q1 and q2. When the
    inner product vanishes every angle is optimal; a DegenerateInner
    warning is issued and phi = 0 is used.
    """
    r1, r2 = common_refinement(q1, q2)
    inner = complex(np.sum(r1.samples * np.conj(r2.samples) * r1.widths))
    if abs(inner) < 1e-14:
        warnings.warn("inner product vanishes; using zero rotation", DegenerateInner)
        angle = 0.0
    else:
        angle = float(np.angle(inner))
    aligned = rotate_transform(q2, angle)
    return RotationAlignment(angle, aligned, l2_distance(q1, aligned))


def project_to_grid(q: TransformedCurve, n: int) -> np.ndarray:
    """Cell averages of q over the uniform grid with n cells"""
    grid = uniform_params(n)
    integral = np.concatenate([[0.0], np.cumsum(q.samples * q.widths)])
    return np.diff(np.interp(grid, q.params, integral)) * n


def _overlap_weights(di: int, dj: int) -> np.ndarray:
    """Overlap lengths of [a/di, (a+1)/di] and [b/dj, (b+1)/dj], scaled to q1-cell units"""
    a = np.arange(di)[:, None]
    b = np.arange(dj)[None, :]
    low = np.maximum(a / di, b / dj)
    high = np.minimum((a + 1) / di, (b + 1) / dj)
    return np.clip(high - low, 0.0, None) * di


def _edge_costs(Q1: np.ndarray, Q2: np.ndarray, window: int) -> Dict[Tuple[int, int], np.ndarray]:
    """
    Exact squared L2 cost of every lattice edge, keyed by step (di, dj).

    Entry [i, j] of each table is the cost of the edge from node (i, j) to
    node (i + di, j + dj): q1 on that interval against sqrt(sigma) q2(gamma)
    with gamma linear of slope sigma = dj / di.
    """
    n = Q1.size
    h = 1.0 / n
    energy1 = np.concatenate([[0.0], np.cumsum(np.abs(Q1) ** 2)]) * h
    energy2 = np.concatenate([[0.0], np.cumsum(np.abs(Q2) ** 2)]) * h
    products = (Q1[:, None] * np.conj(Q2)[None, :]).real

    tables = {}
    for di in range(1, window + 1):
        for dj in range(1, window + 1):
            rows, cols = n - di + 1, n - dj + 1
            weights = _overlap_weights(di, dj)
            cross = np.zeros((rows, cols))
            for a, b in zip(*np.nonzero(weights > 1e-15)):
                cross += weights[a, b] * products[a:a + rows, b:b + cols]
            cross *= h
            a1 = energy1[di:di + rows] - energy1[:rows]
            a2 = energy2[dj:dj + cols] - energy2[:cols]
            tables[di, dj] = a1[:, None] + a2[None, :] - 2.0 * np.sqrt(dj / di) * cross
    return tables


def dp_match(q1: TransformedCurve, q2: TransformedCurve, grid_n: int = 128,
             window: int = 4) -> DPSolution:
    """
    Minimize ||q1 - gamma * q2||^2 over lattice paths of the grid.

    Paths run from node (0, 0) to (n, n) with steps (di, dj), 1 <= di, dj <= window.
    Both transforms are first replaced by their cell averages on the grid.
    """
    n = grid_n
    tables = _edge_costs(project_to_grid(q1, n), project_to_grid(q2, n), window)
    energy = np.full((n + 1, n + 1), np.inf)
    energy[0, 0] = 0.0
    came_from = np.zeros((n + 1, n + 1, 2), dtype=int)

    for i in range(1, n + 1):
        for (di, dj), table in tables.items():
            if di > i:
                continue
            start = i - di
            candidate = energy[start, :n - dj + 1] + table[start]
            better = candidate < energy[i, dj:]
            if np.any(better):
                target = np.flatnonzero(better) + dj
                energy[i, target] = candidate[better]
                came_from[i, target] = (di, dj)

    nodes = [(n, n)]
    i, j = n, n
    while (i, j) != (0, 0):
        di, dj = came_from[i, j]
        i, j = i - di, j - dj
        nodes.append((i, j))
    nodes.reverse()
    path = np.array(nodes, dtype=float) / n
    return DPSolution(Reparameterization(path[:, 0], path[:, 1]), float(energy[n, n]))


def dp_reparameterize(q1: TransformedCurve, q2: TransformedCurve, grid_n: int = 128,
                      window: int = 4) -> Reparameterization:
    return dp_match(q1, q2, grid_n, window).gamma


def grid_levels(grid_n: int, coarsest: int = COARSEST_GRID) -> List[int]:
    """Halvings of grid_n down to ``coarsest`` cells, ending with grid_n itself"""
    levels = [grid_n]
    while levels[0] % 2 == 0 and levels[0] // 2 >= coarsest:
        levels.insert(0, levels[0] // 2)
    return levels


def align_transforms(q1: TransformedCurve, q2: TransformedCurve,
                     options: Optional[ShapeOptions] = None, seed: int = 0) -> MatchResult:
    """
    Alternate optimal rotation and dynamic-programming reparameterization.

    The alternation runs on each grid of ``grid_levels(options.grid_n)`` in
    turn, every level starting from the best alignment of the coarser ones.
    A level stops when a round improves the distance by less than
    ``round_tol`` or after ``max_rounds`` rounds; the best alignment seen is
    returned, so doubling the grid never increases the distance.
    """
    options = options or ShapeOptions()
    rotation = optimal_rotation(q1, q2)
    best = MatchResult(gamma=Reparameterization.identity(), rotation=rotation.angle,
                       seed=seed, distance=rotation.distance, reference=q1,
                       aligned=rotation.aligned)
    total = 0
    for level in grid_levels(options.grid_n):
        for rounds in range(1, options.max_rounds + 1):
            total += 1
            gamma = dp_reparameterize(q1, rotate_transform(q2, best.rotation),
                                      level, options.window)
            rotation = optimal_rotation(q1, reparam_action(gamma, q2))
            improvement = best.distance - rotation.distance
            if improvement > 0:
                best = MatchResult(gamma=gamma, rotation=rotation.angle, seed=seed,
                                   distance=rotation.distance, reference=q1,
                                   aligned=rotation.aligned)
            logger.debug("grid %d round %d: distance %.10f", level, rounds, best.distance)
            if improvement < options.round_tol:
                break
    return MatchResult(best.gamma, best.rotation, best.seed, best.distance,
                       best.reference, best.aligned, rounds=total)


def prepare(c: PlaneCurve, options: ShapeOptions) -> PlaneCurve:
    """
    Base the curve at the origin (and rescale it to unit length).

    The vertices are kept as they are: the grid only steers the warp search,
    distances are always evaluated on the curves' own partitions.
    """
    return normalize(c, translate=True, scale=options.fixed_length)


def match_open(c1: PlaneCurve, c2: PlaneCurve, p: ElasticParams,
               options: Optional[ShapeOptions] = None) -> MatchResult:
    """Align c2 onto c1 over rotations and reparameterizations"""
    options = options or ShapeOptions()
    q1 = forward(prepare(c1, options), p)
    q2 = forward(prepare(c2, options), p)
    return align_transforms(q1, q2, options)


def match_closed(c1: PlaneCurve, c2: PlaneCurve, p: ElasticParams,
                 options: Optional[ShapeOptions] = None) -> MatchResult:
    """
    Align closed c2 onto c1, additionally searching over starting vertices.

    Every seed re-indexes c2 and transforms it afresh, so the
    angle recursion restarts at the seed vertex.
    """
    options = options or ShapeOptions()
    first = prepare(c1, options)
    second = prepare(c2, options)
    q1 = forward(first, p)

    best = None
    seeds = range(0, second.segment_count, options.seed_stride)
    scores = np.full(len(seeds), np.inf)
    for slot, seed in enumerate(seeds):
        q2 = forward(cyclic_shift(second, seed), p)
        result = align_transforms(q1, q2, options, seed=seed)
        scores[slot] = result.distance
        if best is None or result.distance < best.distance:
            best = result
    logger.debug("seed search over %d seeds: best seed %d distance %.8f",
                 len(seeds), best.seed, best.distance)
    return MatchResult(best.gamma, best.rotation, best.seed, best.distance,
                       best.reference, best.aligned, rounds=best.rounds,
                       seed_distances=scores)


def match_curves(c1: PlaneCurve, c2: PlaneCurve, p: ElasticParams,
                 options: Optional[ShapeOptions] = None) -> MatchResult:
    options = options or ShapeOptions()
    if options.closed:
        return match_closed(c1, c2, p, options)
    return match_open(c1, c2, p, options)


def lattice_path_cost(q1: TransformedCurve, q2: TransformedCurve,
                      nodes: List[Tuple[int, int]], grid_n: int) -> float:
    """Squared L2 cost of the warp through the given lattice nodes"""
    path = np.array(nodes, dtype=float) / grid_n
    gamma = Reparameterization(path[:, 0], path[:, 1])
    return l2_distance(q1, reparam_action(gamma, q2)) ** 2


def injectivity_check(c1: PlaneCurve, c2: PlaneCurve, p: ElasticParams) -> InjectivityReport:
    """
    Decide whether c1 and c2 can share a transform.

    They do exactly when the speeds agree and every signed turn (and the
    initial angle) differs by an integer multiple of (4b/a) pi. Both curves
    having all exterior angles below (2b/a) pi rules this out for distinct
    curves, as does rho <= 1.

    Raises:
        SegmentMismatch: if the curves have different segment counts
    """
    if c1.segment_count != c2.segment_count:
        raise SegmentMismatch(c1.segment_count, c2.segment_count)
    polar1, polar2 = polar_decompose(c1), polar_decompose(c2)
    radius_match = bool(
        np.allclose(polar1.params, polar2.params, rtol=0, atol=1e-12)
        and np.allclose(polar1.r, polar2.r, rtol=1e-12, atol=0))

    turns = np.diff(polar1.theta - polar2.theta, prepend=0.0)
    period = 4.0 * p.b / p.a * np.pi
    multiples = turns / period
    relations_hold = bool(np.all(np.abs(multiples - np.round(multiples)) < 1e-9))

    q1, q2 = forward(c1, p), forward(c2, p)
    coincide = radius_match and bool(np.max(np.abs(q1.samples - q2.samples)) <= 1e-12 * p.radius)

    bound = 2.0 * p.b / p.a * np.pi
    maxima = tuple(float(np.max(exterior_angles(c), initial=0.0)) for c in (c1, c2))
    injective = p.rho <= 1.0 or all(m < bound for m in maxima)
    return InjectivityReport(
        radius_match=radius_match,
        angle_multiples=np.round(multiples).astype(int),
        relations_hold=radius_match and relations_hold,
        transforms_coincide=coincide,
        max_exterior_angles=maxima,
        angle_bound=bound,
        injective_regime=injective,
    )
