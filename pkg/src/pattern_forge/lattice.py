"""Lattice point generation: unit cell, affine transform, region coverage.

Point positions are always computed directly from integer cell indices
(origin + i*b1 + j*b2), never by iterated addition, so there is no
accumulated floating-point drift and regeneration is bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import BBox, Vec
from .model import Affine2D, DegenerateTransform, UnitCell


@dataclass(frozen=True)
class LatticePoints:
    """Transformed lattice points covering a region plus a margin ring.

    points[k] equals origin + indices[k,0]*basis[0] + indices[k,1]*basis[1];
    rows are ordered row-major by (j, i). `coverage` is the expanded region
    the point set is guaranteed to cover.
    """

    points: np.ndarray        # (n, 2) float64
    indices: np.ndarray       # (n, 2) int64, columns (i, j)
    origin: Vec
    basis: tuple[Vec, Vec | None]
    coverage: BBox
    dimensionality: int

    def __len__(self) -> int:
        return len(self.points)


def basis_vectors(cell: UnitCell) -> tuple[Vec, Vec | None]:
    """Untransformed basis vectors for a unit cell.

    Square/rectangular/oblique cells span (a, 0) and (b cos(theta),
    b sin(theta)); hexagonal cells use theta = 120 with b = a; segment
    cells are one-dimensional and return a single vector.
    """
    v1 = (cell.a, 0.0)
    if cell.is_1d:
        return v1, None
    theta = math.radians(cell.theta)
    v2 = (cell.b * math.cos(theta), cell.b * math.sin(theta))
    return v1, v2


def generate_lattice(cell: UnitCell, transform: Affine2D, region: BBox,
                     *, anchor: Vec | None = None) -> LatticePoints:
    """All transformed lattice points intersecting `region` plus one
    transformed cell diagonal of margin.

    The untransformed lattice is anchored so the (0, 0) point sits at
    `anchor` (default: the region's min corner). Scale and shear pivot on
    the anchor; rotation pivots on the region center; translation applies
    last. Enumeration is row-major by (j, i) and deterministic.
    """
    if region.width <= 0 or region.height <= 0:
        raise ValueError("region must have positive width and height")
    det = transform.det()
    if abs(det) < 1e-12:
        raise DegenerateTransform(f"|det| = {abs(det)} < 1e-12")

    if anchor is None:
        anchor = (region.min_x, region.min_y)
    center = region.center

    v1, v2 = basis_vectors(cell)
    dim = 1 if v2 is None else 2

    # Linear part split: scale+shear about the anchor, rotation about the
    # region center. Both are linear, so the transformed lattice is still
    # origin + i*b1 + j*b2 for suitable origin and basis.
    no_rot = Affine2D(scale_x=transform.scale_x, scale_y=transform.scale_y,
                      rotation=0.0, shear=transform.shear)
    rot_only = Affine2D(rotation=transform.rotation)

    def full_map(qx: float, qy: float) -> Vec:
        # q is a lattice offset relative to the anchor.
        sx, sy = no_rot.apply_linear(qx, qy)
        px, py = anchor[0] + sx, anchor[1] + sy
        rx, ry = rot_only.apply_linear(px - center[0], py - center[1])
        return (center[0] + rx + transform.translate[0],
                center[1] + ry + transform.translate[1])

    origin = full_map(0.0, 0.0)
    b1 = _sub(full_map(*v1), origin)
    b2 = _sub(full_map(*v2), origin) if v2 is not None else None

    diag = math.hypot(*b1)
    if b2 is not None:
        diag = max(math.hypot(b1[0] + b2[0], b1[1] + b2[1]),
                   math.hypot(b1[0] - b2[0], b1[1] - b2[1]))
    expanded = region.expanded(diag)

    corners = [(expanded.min_x, expanded.min_y), (expanded.max_x, expanded.min_y),
               (expanded.max_x, expanded.max_y), (expanded.min_x, expanded.max_y)]

    if dim == 2:
        # Invert p = origin + i*b1 + j*b2 at the corners for the index range.
        mat = np.array([[b1[0], b2[0]], [b1[1], b2[1]]], dtype=float)
        inv = np.linalg.inv(mat)
        ij = np.array([inv @ (np.array(c) - np.array(origin)) for c in corners])
        i0, j0 = np.floor(ij.min(axis=0)).astype(int) - 1
        i1, j1 = np.ceil(ij.max(axis=0)).astype(int) + 1
        ii, jj = np.meshgrid(np.arange(i0, i1 + 1), np.arange(j0, j1 + 1))
        indices = np.column_stack([ii.ravel(), jj.ravel()]).astype(np.int64)
        pts = (np.array(origin)[None, :]
               + indices[:, 0:1] * np.array(b1)[None, :]
               + indices[:, 1:2] * np.array(b2)[None, :])
    else:
        denom = b1[0] * b1[0] + b1[1] * b1[1]
        proj = [((c[0] - origin[0]) * b1[0] + (c[1] - origin[1]) * b1[1]) / denom
                for c in corners]
        i0 = math.floor(min(proj)) - 1
        i1 = math.ceil(max(proj)) + 1
        idx = np.arange(i0, i1 + 1, dtype=np.int64)
        indices = np.column_stack([idx, np.zeros_like(idx)])
        pts = (np.array(origin)[None, :]
               + indices[:, 0:1] * np.array(b1)[None, :])

    keep = ((pts[:, 0] >= expanded.min_x) & (pts[:, 0] <= expanded.max_x)
            & (pts[:, 1] >= expanded.min_y) & (pts[:, 1] <= expanded.max_y))
    return LatticePoints(points=pts[keep], indices=indices[keep], origin=origin,
                         basis=(b1, b2), coverage=expanded, dimensionality=dim)


def _sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])
