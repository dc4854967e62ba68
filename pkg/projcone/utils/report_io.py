"""
Report and Trace I/O
Deterministic JSON reports and CSV traces.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import InputError

REPORT_SCHEMA = 1


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays, paths and tuples to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, Path):
        return str(value)
    return value


def format_report(report: Dict[str, Any]) -> str:
    """Sorted keys, two-space indent, shortest round-trip floats, trailing newline."""
    payload = {"schema": REPORT_SCHEMA, **report}
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dump_report(report: Dict[str, Any], path: Optional[Path] = None) -> str:
    """
    Render a report and optionally write it.

    Args:
        report: Report dictionary
        path: Destination file (parent directories are created)

    Returns:
        The rendered JSON text
    """
    text = format_report(report)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    return text


def _metadata_line(metadata: Dict[str, Any]) -> str:
    parts = []
    for key, value in metadata.items():
        if isinstance(value, bool):
            value = str(value).lower()
        parts.append(f"{key}={value}")
    return "# " + " ".join(parts) + "\n"


def write_frame_csv(frame: pd.DataFrame, path: Path, metadata: Optional[Dict[str, Any]] = None) -> Path:
    """Write a table, preceded by one '#' metadata line when metadata is given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if metadata:
            f.write(_metadata_line(metadata))
        frame.to_csv(f, index=False, lineterminator="\n")
    return path


def write_trace_csv(trace, path: Path) -> Path:
    """Trace CSV: ``t,x1..xn[,s0..sn]`` with an integrator metadata line."""
    return write_frame_csv(trace.to_frame(), path, trace.metadata())


def developed_frame(targets: Sequence[Sequence[float]], points) -> pd.DataFrame:
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    homog = np.array([p.homog for p in points])
    data: Dict[str, Any] = {}
    for axis in range(targets.shape[1]):
        data[f"x{axis + 1}"] = targets[:, axis]
    for A in range(homog.shape[1]):
        data[f"h{A}"] = homog[:, A]
    return pd.DataFrame(data)


def write_developed_csv(targets: Sequence[Sequence[float]], points, path: Path) -> Path:
    return write_frame_csv(developed_frame(targets, points), path)


def read_trace_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def read_points_csv(path: Path, n: int) -> np.ndarray:
    """
    Read target points.

    Columns x1..xn are used when present; otherwise the first n columns.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"targets file not found: {path}")
    try:
        frame = pd.read_csv(path, comment="#")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputError(f"cannot read targets from {path}: {e}")
    columns: List[str] = [f"x{axis + 1}" for axis in range(n)]
    if not all(c in frame.columns for c in columns):
        if frame.shape[1] < n:
            raise InputError(f"targets file needs {n} coordinate columns, found {frame.shape[1]}")
        columns = list(frame.columns[:n])
    try:
        points = frame[columns].to_numpy(dtype=float)
    except ValueError:
        raise InputError(f"targets file {path} has non-numeric coordinates")
    if points.shape[0] == 0:
        raise InputError(f"targets file {path} has no rows")
    return points
