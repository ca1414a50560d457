"""
Curve and transform files.

Curves are stored as JSON objects {name, closed, vertices[, params]}; a
two-column x,y CSV is accepted as a fallback. Transforms are written as
CSV with columns t, re, im, phase where t is the right end of each
segment and phase the lifted argument.
"""

import csv
import json
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from .errors import CurveFileError
from .models import ElasticParams, PlaneCurve, TransformedCurve
from .transform import unwrapped_phase

PathLike = Union[str, Path]


def curve_to_dict(curve: PlaneCurve, include_params: bool = True) -> dict:
    record = {
        "name": curve.name,
        "closed": bool(curve.closed),
        "vertices": [[float(z.real), float(z.imag)] for z in curve.vertices],
    }
    if include_params:
        record["params"] = [float(t) for t in curve.params]
    return record


def curve_from_dict(record: dict, fallback_name: str = "") -> PlaneCurve:
    if not isinstance(record, dict) or "vertices" not in record:
        raise CurveFileError("curve record needs a 'vertices' list")
    try:
        vertices = np.asarray(record["vertices"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise CurveFileError(f"vertices are not numeric pairs: {exc}") from exc
    if vertices.ndim != 2 or vertices.shape[1] != 2:
        raise CurveFileError("vertices must be a list of [x, y] pairs")
    if vertices.shape[0] < 2:
        raise CurveFileError("a curve needs at least 2 vertices")
    params = record.get("params")
    if params is not None:
        try:
            params = np.asarray(params, dtype=float)
        except (TypeError, ValueError) as exc:
            raise CurveFileError(f"params are not numeric: {exc}") from exc
    return PlaneCurve(vertices, params, closed=bool(record.get("closed", False)),
                      name=str(record.get("name", fallback_name)))


def _read_csv_points(path: Path) -> np.ndarray:
    rows = []
    with open(path, newline="") as handle:
        for row in csv.reader(handle):
            if not row or not "".join(row).strip():
                continue
            try:
                rows.append([float(row[0]), float(row[1])])
            except (ValueError, IndexError):
                if rows:
                    raise CurveFileError(f"{path}: bad row {row!r}")
                # header line
    if len(rows) < 2:
        raise CurveFileError(f"{path}: needs at least two x,y rows")
    return np.asarray(rows)


def load_curve(path: PathLike, closed: Optional[bool] = None) -> PlaneCurve:
    """
    Read a curve from a JSON curve file (or an x,y CSV).

    Raises:
        CurveFileError: if the file is missing or malformed
        ZeroEdge, NotClosed: if the data is not a valid curve
    """
    path = Path(path)
    if not path.is_file():
        raise CurveFileError(f"{path}: no such file")
    if path.suffix.lower() == ".csv":
        points = _read_csv_points(path)
        is_closed = bool(closed) if closed is not None else bool(np.allclose(points[0], points[-1]))
        return PlaneCurve(points, closed=is_closed, name=path.stem)
    try:
        record = json.loads(path.read_text())
    except (OSError, ValueError) as exc:
        raise CurveFileError(f"{path}: {exc}") from exc
    if closed is not None and isinstance(record, dict):
        record = dict(record, closed=closed)
    return curve_from_dict(record, fallback_name=path.stem)


def save_curve(curve: PlaneCurve, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(curve_to_dict(curve), indent=2))
    return path


def write_transform_csv(q: TransformedCurve, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    phase = unwrapped_phase(q)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "re", "im", "phase"])
        for t, value, angle in zip(q.params[1:], q.samples, phase):
            writer.writerow(["%.17g" % t, "%.17g" % value.real, "%.17g" % value.imag,
                             "%.17g" % angle])
    return path


def read_transform_csv(path: PathLike, p: ElasticParams) -> TransformedCurve:
    """
    Read a transform written by write_transform_csv.

    Raises:
        CurveFileError: on a missing file, missing columns or bad numbers
    """
    path = Path(path)
    if not path.is_file():
        raise CurveFileError(f"{path}: no such file")
    try:
        with open(path, newline="") as handle:
            rows = list(csv.DictReader(handle))
        t = np.array([float(row["t"]) for row in rows])
        samples = np.array([float(row["re"]) + 1j * float(row["im"]) for row in rows])
        phase = [float(row["phase"]) for row in rows if row.get("phase") not in (None, "")]
    except (KeyError, TypeError, ValueError) as exc:
        raise CurveFileError(f"{path}: {exc}") from exc
    if not rows:
        raise CurveFileError(f"{path}: no transform rows")
    return TransformedCurve(samples, np.concatenate([[0.0], t]), p,
                            initial_phase=phase[0] if phase else None)


def parse_point_list(text: str) -> np.ndarray:
    """
    Points from a whitespace-delimited list.

    Takes the first two numbers of each line, skips a leading count line and
    any non-numeric lines, and drops consecutive duplicates.
    """
    points: List[List[float]] = []
    for line in text.splitlines():
        numbers = []
        for token in line.replace(",", " ").split():
            try:
                numbers.append(float(token))
            except ValueError:
                break
        if len(numbers) < 2:
            continue
        point = numbers[:2]
        if points and point == points[-1]:
            continue
        points.append(point)
    if len(points) < 2:
        raise CurveFileError("point list needs at least two distinct points")
    return np.asarray(points)


def ingest_points(source: PathLike, name: Optional[str] = None,
                  closed: bool = False) -> PlaneCurve:
    source = Path(source)
    try:
        points = parse_point_list(source.read_text())
    except OSError as exc:
        raise CurveFileError(f"{source}: {exc}") from exc
    if closed and not np.array_equal(points[0], points[-1]):
        points = np.vstack([points, points[:1]])
    return PlaneCurve(points, closed=closed, name=name or source.stem)
