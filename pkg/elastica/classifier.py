"""
Leave-one-out nearest-neighbour classification with elastic shape distances.

Datasets are directories with one subdirectory per class and one curve
file per sample. Distances are computed for every ordered pair, optionally
fanned out over a process pool, and compared against an arclength-L2
baseline.
"""

import csv
import logging
import multiprocessing as mp
from collections import Counter
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .curve_core import normalize, resample_arclength
from .curve_files import load_curve, save_curve
from .errors import DatasetLayoutError
from .geodesics import shape_distance
from .models import ClassificationReport, Dataset, ElasticParams, PlaneCurve, ShapeOptions

logger = logging.getLogger(__name__)

CURVE_SUFFIXES = (".json", ".csv")
TABLE_RHOS = (0.25, 0.5, 1.0, 2.0, 3.0, 4.0)


def validate_layout(labels: Sequence[str]) -> None:
    counts = Counter(labels)
    if len(counts) < 2:
        raise DatasetLayoutError(f"need at least 2 classes, found {len(counts)}")
    small = sorted(label for label, count in counts.items() if count < 2)
    if small:
        raise DatasetLayoutError(f"classes with fewer than 2 samples: {', '.join(small)}")


def load_dataset(root: Path) -> Dataset:
    """
    Read a class-per-directory dataset.

    Raises:
        DatasetLayoutError: if there are fewer than 2 classes or a class has
            fewer than 2 samples
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetLayoutError(f"{root}: not a directory")
    curves, labels, names = [], [], []
    for class_dir in sorted(d for d in root.iterdir() if d.is_dir()):
        for path in sorted(class_dir.iterdir()):
            if path.suffix.lower() not in CURVE_SUFFIXES:
                continue
            curves.append(load_curve(path))
            labels.append(class_dir.name)
            names.append(f"{class_dir.name}/{path.stem}")
    validate_layout(labels)
    logger.info("loaded %d curves in %d classes from %s", len(curves), len(set(labels)), root)
    return Dataset(curves, labels, names)


def save_dataset(dataset: Dataset, root: Path) -> List[Path]:
    root = Path(root)
    written = []
    for curve, label, name in zip(dataset.curves, dataset.labels, dataset.names):
        stem = name.split("/")[-1]
        written.append(save_curve(curve, root / label / f"{stem}.json"))
    return written


def arclength_distance(c1: PlaneCurve, c2: PlaneCurve, n: int = 200) -> float:
    """L2 distance of unit-length, origin-based curves resampled uniformly by arclength"""
    z1 = resample_arclength(normalize(c1), n).vertices
    z2 = resample_arclength(normalize(c2), n).vertices
    return float(np.sqrt(np.mean(np.abs(z1 - z2) ** 2)))


class PairDistance:
    """Picklable distance callable for process pools"""

    def __init__(self, method: str = "elastic", params: Optional[ElasticParams] = None,
                 options: Optional[ShapeOptions] = None):
        self.method = method
        self.params = params or ElasticParams.srvf()
        self.options = options or ShapeOptions()

    def __call__(self, c1: PlaneCurve, c2: PlaneCurve) -> float:
        if self.method == "arclength":
            return arclength_distance(c1, c2)
        return shape_distance(c1, c2, self.params, self.options)


_pool_curves: List[PlaneCurve] = []
_pool_distance: Optional[Callable[[PlaneCurve, PlaneCurve], float]] = None


def _init_worker(curves: List[PlaneCurve], distance: Callable) -> None:
    global _pool_curves, _pool_distance
    _pool_curves, _pool_distance = curves, distance


def _pair_worker(pair: Tuple[int, int]) -> float:
    i, j = pair
    return _pool_distance(_pool_curves[i], _pool_curves[j])


def distance_matrix(curves: Sequence[PlaneCurve],
                    distance: Callable[[PlaneCurve, PlaneCurve], float],
                    jobs: int = 1,
                    emit: Optional[Callable[[str, Dict], None]] = None) -> np.ndarray:
    """
    Distances d(curve_i, curve_j) for every ordered pair, zero on the diagonal.

    Both directions are computed because alignment over the reparameterization
    semigroup is not exactly symmetric.
    """
    count = len(curves)
    pairs = [(i, j) for i in range(count) for j in range(count) if i != j]
    if jobs > 1 and len(pairs) > 1:
        with mp.Pool(min(jobs, len(pairs)), initializer=_init_worker,
                     initargs=(list(curves), distance)) as pool:
            values = pool.map(_pair_worker, pairs, chunksize=max(1, len(pairs) // (4 * jobs)))
    else:
        values = []
        for pair in pairs:
            values.append(distance(curves[pair[0]], curves[pair[1]]))
            if emit is not None:
                emit("classify.pair", {"i": pair[0], "j": pair[1], "distance": round(values[-1], 6)})
    matrix = np.zeros((count, count))
    for (i, j), value in zip(pairs, values):
        matrix[i, j] = value
    return matrix


def leave_one_out(matrix: np.ndarray, labels: Sequence[str], names: Sequence[str] = (),
                  method: str = "elastic") -> ClassificationReport:
    """1-NN label of every sample among all the others"""
    labels = list(labels)
    masked = np.array(matrix, dtype=float)
    np.fill_diagonal(masked, np.inf)
    nearest = np.argmin(masked, axis=1)
    predictions = [labels[k] for k in nearest]
    hits = np.array([p == t for p, t in zip(predictions, labels)])

    per_class = {}
    for label in sorted(set(labels)):
        members = np.array([t == label for t in labels])
        per_class[label] = float(hits[members].mean())
    perfect = sum(1 for rate in per_class.values() if rate == 1.0)
    return ClassificationReport(method=method, rate=float(hits.mean()), per_class=per_class,
                                perfect=perfect, predictions=predictions, labels=labels,
                                names=list(names))


def classify(dataset: Dataset, distance: Callable[[PlaneCurve, PlaneCurve], float],
             jobs: int = 1, method: str = "elastic") -> Tuple[np.ndarray, ClassificationReport]:
    validate_layout(dataset.labels)
    matrix = distance_matrix(dataset.curves, distance, jobs)
    return matrix, leave_one_out(matrix, dataset.labels, dataset.names, method)


def method_label(rho: float) -> str:
    for fraction, text in ((0.25, "1/4"), (0.5, "1/2")):
        if abs(rho - fraction) < 1e-12:
            return f"rho={text}"
    return f"rho={rho:g}"


def rho_table(dataset: Dataset, rhos: Iterable[float] = TABLE_RHOS,
              options: Optional[ShapeOptions] = None, jobs: int = 1) -> List[ClassificationReport]:
    """
    Classification rates of the arclength baseline and of every rho.

    Each rho uses a = 1 and b = 1 / (2 rho).
    """
    options = options or ShapeOptions()
    _, baseline = classify(dataset, PairDistance("arclength"), jobs, method="Arclength")
    reports = [baseline]
    for rho in rhos:
        params = ElasticParams.from_rho(rho)
        _, report = classify(dataset, PairDistance("elastic", params, options), jobs,
                             method=method_label(rho))
        reports.append(report)
    return reports


def format_table(reports: Sequence[ClassificationReport]) -> str:
    lines = ["| Method | Classif. Rate | Perfect Matches |", "|---|---|---|"]
    for report in reports:
        lines.append(f"| {report.method} | {100.0 * report.rate:.2f} | {report.perfect} |")
    return "\n".join(lines)


def format_report(report: ClassificationReport) -> str:
    lines = [f"method: {report.method}",
             f"overall rate: {100.0 * report.rate:.2f}%",
             f"perfect classes: {report.perfect}/{len(report.per_class)}"]
    for label, rate in report.per_class.items():
        lines.append(f"  {label}: {100.0 * rate:.2f}%")
    misses = [(name, truth, guess) for name, truth, guess
              in zip(report.names, report.labels, report.predictions) if truth != guess]
    for name, truth, guess in misses:
        lines.append(f"  misclassified {name}: {truth} -> {guess}")
    return "\n".join(lines)


def write_matrix_csv(matrix: np.ndarray, names: Sequence[str], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([""] + list(names))
        for name, row in zip(names, matrix):
            writer.writerow([name] + ["%.10g" % value for value in row])
    return path


def options_for(dataset: Dataset, options: ShapeOptions) -> ShapeOptions:
    """Use closed-curve matching only when every curve in the dataset is closed"""
    return replace(options, closed=options.closed and all(c.closed for c in dataset.curves))
