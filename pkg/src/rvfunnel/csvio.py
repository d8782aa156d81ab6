"""CSV emission and parsing for trajectories and diagnostic dumps."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .boundary import FunnelSchedule, eval_phi
from .reference import ReferencePath
from .sim import COLUMNS, TrajectoryRecord

FMT = "%.14e"      # 15 significant digits


def _emit(fh, header, data) -> None:
    fh.write(",".join(header) + "\n")
    for row in data:
        fh.write(",".join(FMT % v for v in row) + "\n")


def write_table(path, header: Sequence[str], rows):
    """Write to a path (parents created) or to an open text stream."""
    data = np.asarray(rows, dtype=float).reshape(-1, len(header))
    if hasattr(path, "write"):
        _emit(path, header, data)
        return path
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        _emit(fh, header, data)
    return path


def read_table(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


def write_trajectory(record: TrajectoryRecord, path) -> Path:
    return write_table(path, record.columns, record.data)


def read_trajectory(path) -> TrajectoryRecord:
    header, data = read_table(path)
    if tuple(header) != tuple(COLUMNS):
        raise ValueError(f"{path}: unexpected trajectory header")
    return TrajectoryRecord(data)


def reference_rows(path: ReferencePath, step: float, horizon: float) -> np.ndarray:
    n = int(round(horizon / step))
    ts = step * np.arange(n + 1)
    return np.array([(t, *path.sample(t)) for t in ts])


def write_reference(path: ReferencePath, out, step: float = 0.01,
                    horizon: float | None = None):
    horizon = path.duration if horizon is None else horizon
    return write_table(out, ["t", "z", "dz", "d2z", "d3z", "d4z"],
                       reference_rows(path, step, horizon))


def boundary_rows(schedule: FunnelSchedule, times: Iterable[float]) -> np.ndarray:
    rows = []
    for t in times:
        rho, rho_dot = schedule.width(t)
        phi, phi_dot = eval_phi(schedule, t)
        rows.append((t, rho, rho_dot, phi, phi_dot))
    return np.array(rows)


def write_boundary(schedule: FunnelSchedule, out, step: float, horizon: float):
    n = int(round(horizon / step))
    return write_table(out, ["t", "rho", "rho_dot", "phi", "phi_dot"],
                       boundary_rows(schedule, step * np.arange(n + 1)))
