"""Final primitive positions: seeded jitter on lattice points, or
data-driven placement (accurate / displaced / gridded)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .geometry import Vec
from .lattice import LatticePoints
from .model import (
    AxisMismatch,
    DataPlacementSpec,
    HostSymbol,
    ProjectionDegenerate,
    RegularitySpec,
    SpecError,
)
from .rng import CH_DISPLACE, CH_JITTER, Stream

_RELAX_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class DataPlacement:
    """Positions derived from data records, plus placement bookkeeping."""

    positions: np.ndarray                      # (n, 2) float64
    records: tuple[Mapping[str, object], ...]  # aligned with positions
    dropped_outside: int
    converged: bool
    residual_violations: int


def _unit_or_none(v: Vec | None) -> Vec | None:
    if v is None:
        return None
    h = math.hypot(*v)
    if h <= 0:
        return None
    return (v[0] / h, v[1] / h)


def _draw(stream: Stream, reg: RegularitySpec) -> float:
    if reg.distribution == "uniform":
        return reg.range * stream.uniform_signed()
    return stream.truncated_normal(reg.dispersion, reg.range)


def apply_jitter(points: LatticePoints, reg: RegularitySpec, seed: int) -> np.ndarray:
    """Displace each lattice point independently along the allowed axes.

    Per-point streams are keyed by the lattice cell indices (i, j), so a
    point's jitter is stable when the host is resized and the list grows.
    Zero range returns the input positions unchanged.
    """
    if reg.range == 0.0:
        return points.points.copy()

    b1, b2 = points.basis
    u_hat = _unit_or_none(b1)
    v_hat = _unit_or_none(b2)

    if points.dimensionality == 1:
        if reg.axes == "v-only":
            raise AxisMismatch("1D lattices have no v axis")
        axes = [u_hat]
    else:
        if reg.axes == "along-line":
            raise AxisMismatch("along-line jitter requires a 1D lattice")
        if reg.axes == "u-only":
            axes = [u_hat]
        elif reg.axes == "v-only":
            axes = [v_hat]
        else:
            axes = [u_hat, v_hat]

    out = points.points.copy()
    for row, (i, j) in enumerate(points.indices):
        stream = Stream(seed, CH_JITTER, int(i), int(j))
        for axis in axes:
            d = _draw(stream, reg)
            out[row, 0] += d * axis[0]
            out[row, 1] += d * axis[1]
    return out


def jitter_positions(positions: np.ndarray, ids: Sequence[tuple[int, int]],
                     reg: RegularitySpec, seed: int,
                     tangents: Sequence[float] | None = None) -> np.ndarray:
    """Jitter arbitrary positions (along-line arrangements) by stream ids.

    With axes=along-line each point moves along its own tangent direction.
    """
    if reg.range == 0.0:
        return positions.copy()
    out = positions.copy()
    for row, (i, j) in enumerate(ids):
        stream = Stream(seed, CH_JITTER, int(i), int(j))
        d = _draw(stream, reg)
        if tangents is not None:
            phi = math.radians(tangents[row])
            axis = (math.cos(phi), math.sin(phi))
        else:
            axis = (1.0, 0.0)
        out[row, 0] += d * axis[0]
        out[row, 1] += d * axis[1]
    return out


def place_from_data(spec: DataPlacementSpec, host: HostSymbol,
                    seed: int) -> DataPlacement:
    """Place primitives from data records.

    accurate: positions are the projected record coordinates.
    displaced: seeded pairwise relaxation until min_separation holds or
    the iteration cap; the convergence flag is re-verified by brute force.
    gridded: positions snap to grid-cell centers; colliding records are
    aggregated (count attached, numeric attributes averaged).
    """
    if abs(spec.projection.det()) < 1e-12:
        raise ProjectionDegenerate("projection is not invertible")

    bounds = host.bbox()
    margin = 0.0
    if spec.mode == "gridded":
        margin = spec.grid_cell
    elif spec.mode == "displaced":
        margin = spec.min_separation
    near = bounds.expanded(margin)

    kept: list[Vec] = []
    kept_records: list[Mapping[str, object]] = []
    dropped = 0
    for rec in spec.records:
        x, y = spec.projection.apply_point(float(rec["x"]), float(rec["y"]))
        if near.contains(x, y):
            kept.append((x, y))
            kept_records.append(rec)
        else:
            dropped += 1

    if not kept:
        return DataPlacement(np.zeros((0, 2)), (), dropped, True, 0)

    positions = np.array(kept, dtype=float)

    if spec.mode == "accurate":
        return DataPlacement(positions, tuple(kept_records), dropped, True, 0)

    if spec.mode == "displaced":
        positions, converged, violations = _relax(positions, spec.min_separation, seed)
        return DataPlacement(positions, tuple(kept_records), dropped,
                             converged, violations)

    # gridded
    cell = spec.grid_cell
    buckets: dict[tuple[int, int], list[int]] = {}
    order: list[tuple[int, int]] = []
    for idx in range(len(positions)):
        key = (math.floor(positions[idx, 0] / cell), math.floor(positions[idx, 1] / cell))
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append(idx)

    grid_positions = []
    grid_records: list[Mapping[str, object]] = []
    for key in order:
        members = buckets[key]
        grid_positions.append(((key[0] + 0.5) * cell, (key[1] + 0.5) * cell))
        grid_records.append(_aggregate([kept_records[m] for m in members]))
    return DataPlacement(np.array(grid_positions, dtype=float),
                         tuple(grid_records), dropped, True, 0)


def _aggregate(records: list[Mapping[str, object]]) -> dict[str, object]:
    """Merge colliding records: count attached, numeric attributes averaged,
    non-numeric taken from the first record."""
    merged: dict[str, object] = dict(records[0])
    if len(records) > 1:
        for key in merged:
            values = [r.get(key) for r in records]
            if all(isinstance(v, (int, float)) and not isinstance(v, bool)
                   for v in values):
                merged[key] = sum(float(v) for v in values) / len(values)
    merged["count"] = float(len(records))
    return merged


def _relax(positions: np.ndarray, min_sep: float,
           seed: int) -> tuple[np.ndarray, bool, int]:
    """Jacobi-style pairwise repulsion; deterministic in (positions, seed)."""
    pos = positions.copy()
    n = len(pos)
    for _ in range(_RELAX_MAX_ITERATIONS):
        moves = np.zeros_like(pos)
        any_violation = False
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[j, 0] - pos[i, 0]
                dy = pos[j, 1] - pos[i, 1]
                d = math.hypot(dx, dy)
                if d >= min_sep:
                    continue
                any_violation = True
                if d < 1e-12:
                    # Coincident points: seeded escape direction per pair.
                    angle = Stream(seed, CH_DISPLACE, i, j).uniform() * 2 * math.pi
                    dx, dy, d = math.cos(angle), math.sin(angle), 1.0
                push = (min_sep - d) / 2.0 + 1e-9
                ux, uy = dx / d, dy / d
                moves[i, 0] -= push * ux
                moves[i, 1] -= push * uy
                moves[j, 0] += push * ux
                moves[j, 1] += push * uy
        if not any_violation:
            return pos, True, 0
        pos += moves

    violations = 0
    for i in range(n):
        for j in range(i + 1, n):
            if math.hypot(pos[j, 0] - pos[i, 0], pos[j, 1] - pos[i, 1]) < min_sep - 1e-9:
                violations += 1
    return pos, violations == 0, violations


# --- record ingestion ---------------------------------------------------------

def load_records_csv(text: str) -> list[dict[str, object]]:
    """Records from CSV with a header row: x, y, then attribute columns.
    Numeric-looking values parse as numbers; everything else stays a string."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or "x" not in reader.fieldnames \
            or "y" not in reader.fieldnames:
        raise SpecError("", "CSV needs a header row with x and y columns")
    records: list[dict[str, object]] = []
    for i, row in enumerate(reader):
        rec: dict[str, object] = {}
        for key, value in row.items():
            if key is None or value is None:
                continue
            if key in ("x", "y"):
                try:
                    rec[key] = float(value)
                except ValueError:
                    raise SpecError(f"/{i}/{key}", f"not a number: {value!r}") from None
            else:
                try:
                    rec[key] = float(value)
                except ValueError:
                    rec[key] = value
        if "x" not in rec or "y" not in rec:
            raise SpecError(f"/{i}", "row is missing x or y")
        records.append(rec)
    return records


def load_records_json(text: str) -> list[dict[str, object]]:
    """Records from a JSON array of objects with x, y, and attributes."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise SpecError("", "expected a JSON array of records")
    out: list[dict[str, object]] = []
    for i, rec in enumerate(data):
        if not isinstance(rec, dict) or "x" not in rec or "y" not in rec:
            raise SpecError(f"/{i}", "records require x and y")
        out.append(dict(rec))
    return out
