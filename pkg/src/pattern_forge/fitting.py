"""Fit a styled pattern onto a host symbol.

Order of operations: pattern offset, stretch, mode filter (clip /
omit-incomplete / overflow), then the halo filter, which drops any
primitive reaching into the band within `halo` of the host boundary.
In clip mode surviving boundary-straddling geometry is clipped at
render/measure time against the host outline.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .geometry import (
    Vec,
    circle_polygon,
    dist_point_segment,
    oriented_rect,
    point_at_arclength,
    point_in_polygon,
    polyline_length,
    segments_intersect,
)
from .model import FitSpec, HostSymbol, SpecError
from .styling import ResolvedPrimitive

DROP_REASONS = ("clipped-out", "incomplete", "halo")


@dataclass(frozen=True)
class ResolvedPattern:
    """A fitted pattern: surviving primitives plus drop bookkeeping.

    `composition` encodes lattice dimensionality x pattern extension
    directions x host dimensionality (for example "2x2x2" for a 2D lattice
    tiling across an area).
    """

    host: HostSymbol
    primitives: tuple[ResolvedPrimitive, ...]
    dropped: Mapping[str, int]
    composition: str
    clip_to_host: bool
    halo: float = 0.0
    group_count: int = 1


class HostRegion:
    """Point-membership and boundary-distance queries for a host symbol.

    Line hosts are treated as their stroke ribbon (round caps and joins);
    point hosts as their disk. Queries are vectorized over point arrays.
    """

    def __init__(self, host: HostSymbol) -> None:
        self.host = host
        self.kind = host.kind
        self.bbox = host.bbox()
        if host.kind == "area":
            self._polygon = np.array(host.polygon, dtype=float)
            closed = np.vstack([self._polygon, self._polygon[:1]])
            self._ex0 = closed[:-1]
            self._ex1 = closed[1:]
            self.is_convex = _polygon_convex(host.polygon)
        elif host.kind == "line":
            self._path = np.array(host.path, dtype=float)
            self._half = host.width / 2.0
            self.is_convex = False
        else:
            self._center = np.array(host.center, dtype=float)
            self._radius = host.radius
            self.is_convex = True

    def contains(self, x: float, y: float) -> bool:
        return bool(self.contains_many(np.array([[x, y]]))[0])

    def boundary_dist(self, x: float, y: float) -> float:
        return float(self.boundary_dist_many(np.array([[x, y]]))[0])

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        if self.kind == "area":
            x, y = pts[:, 0], pts[:, 1]
            inside = np.zeros(len(pts), dtype=bool)
            for (x1, y1), (x2, y2) in zip(self._ex0, self._ex1):
                if y1 == y2:
                    continue
                cond = (y1 > y) != (y2 > y)
                t = np.where(cond, (y - y1) / (y2 - y1), 0.0)
                inside ^= cond & (x < x1 + t * (x2 - x1))
            return inside
        if self.kind == "line":
            return self._dist_to_path(pts) <= self._half
        d = np.hypot(pts[:, 0] - self._center[0], pts[:, 1] - self._center[1])
        return d <= self._radius

    def boundary_dist_many(self, pts: np.ndarray) -> np.ndarray:
        if self.kind == "area":
            best = np.full(len(pts), np.inf)
            for (x1, y1), (x2, y2) in zip(self._ex0, self._ex1):
                best = np.minimum(best, _dist_to_segment(pts, x1, y1, x2, y2))
            return best
        if self.kind == "line":
            return np.abs(self._half - self._dist_to_path(pts))
        d = np.hypot(pts[:, 0] - self._center[0], pts[:, 1] - self._center[1])
        return np.abs(self._radius - d)

    def _dist_to_path(self, pts: np.ndarray) -> np.ndarray:
        best = np.full(len(pts), np.inf)
        for i in range(len(self._path) - 1):
            x1, y1 = self._path[i]
            x2, y2 = self._path[i + 1]
            best = np.minimum(best, _dist_to_segment(pts, x1, y1, x2, y2))
        return best

    def representative_points(self) -> list[Vec]:
        """Points on or in the host, for host-inside-primitive checks."""
        if self.kind == "area":
            return [tuple(p) for p in self.host.polygon]
        if self.kind == "line":
            return [tuple(p) for p in self.host.path]
        return [tuple(self.host.center)]

    def crosses_boundary(self, polygon: Sequence[Vec]) -> bool:
        """Exact edge-vs-boundary intersection for area and point hosts;
        ribbon boundaries rely on the sampled tests in classify_primitive."""
        n = len(polygon)
        if self.kind == "point":
            cx, cy = self._center
            r = self._radius
            for i in range(n):
                a, b = polygon[i], polygon[(i + 1) % n]
                dmin = dist_point_segment(cx, cy, a[0], a[1], b[0], b[1])
                dmax = max(math.hypot(a[0] - cx, a[1] - cy),
                           math.hypot(b[0] - cx, b[1] - cy))
                if dmin <= r <= dmax:
                    return True
            return False
        if self.kind != "area":
            return False
        for i in range(n):
            a, b = polygon[i], polygon[(i + 1) % n]
            for e0, e1 in zip(self._ex0, self._ex1):
                if segments_intersect(a, b, tuple(e0), tuple(e1)):
                    return True
        return False

    def min_half_extent(self) -> float:
        if self.kind == "point":
            return self._radius
        if self.kind == "line":
            return self._half
        return min(self.bbox.width, self.bbox.height) / 2.0


def _dist_to_segment(pts: np.ndarray, x1: float, y1: float,
                     x2: float, y2: float) -> np.ndarray:
    dx, dy = x2 - x1, y2 - y1
    denom = dx * dx + dy * dy
    if denom <= 0:
        return np.hypot(pts[:, 0] - x1, pts[:, 1] - y1)
    t = np.clip(((pts[:, 0] - x1) * dx + (pts[:, 1] - y1) * dy) / denom, 0.0, 1.0)
    return np.hypot(pts[:, 0] - (x1 + t * dx), pts[:, 1] - (y1 + t * dy))


def _polygon_convex(polygon: Sequence[Vec]) -> bool:
    n = len(polygon)
    sign = 0
    for i in range(n):
        ax, ay = polygon[i]
        bx, by = polygon[(i + 1) % n]
        cx, cy = polygon[(i + 2) % n]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if abs(cross) < 1e-12:
            continue
        s = 1 if cross > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


def primitive_outline(prim: ResolvedPrimitive, span: float) -> list[list[Vec]]:
    """Bounding geometry of a primitive as one or more polygons.

    Circles become inscribed 64-gons; infinite lines become a rectangle of
    length `span` (pass something larger than the host diagonal).
    """
    x, y = prim.position
    w, h = prim.size
    kind = prim.shape.kind
    if kind == "circle":
        return [circle_polygon(x, y, w / 2.0, h / 2.0, prim.orientation)]
    if kind in ("square", "rectangle", "line-segment", "nested"):
        return [oriented_rect(x, y, w, h, prim.orientation)]
    if kind == "infinite-line":
        return [oriented_rect(x, y, span, h, prim.orientation)]
    # glyph-path: points live in a unit box centered on the origin and are
    # scaled by (w, h), rotated, then translated.
    phi = math.radians(prim.orientation)
    c, s = math.cos(phi), math.sin(phi)
    polys: list[list[Vec]] = []
    for poly in prim.shape.glyph:
        out = []
        for gx, gy in poly:
            px, py = gx * w, gy * h
            out.append((x + px * c - py * s, y + px * s + py * c))
        polys.append(out)
    return polys


def _sample_points(polygon: Sequence[Vec], per_edge: int) -> np.ndarray:
    pts = np.array(polygon, dtype=float)
    if per_edge <= 0:
        return pts
    nxt = np.roll(pts, -1, axis=0)
    steps = (np.arange(1, per_edge + 1) / (per_edge + 1))[:, None, None]
    interp = pts[None, :, :] + steps * (nxt - pts)[None, :, :]
    return np.vstack([pts, interp.reshape(-1, 2)])


def classify_primitive(prim: ResolvedPrimitive, region: HostRegion,
                       span: float, *, need_dist: bool = False) -> tuple[str, float]:
    """Classify a primitive against the host region.

    Returns (status, min boundary distance over sampled outline points);
    the distance is only computed when `need_dist` (it backs the halo
    filter). Status is "inside", "crosses", or "outside".
    """
    polys = primitive_outline(prim, span)

    # Cheap reject: disjoint bounding boxes mean the primitive is outside.
    min_dist = math.inf
    box = region.bbox
    all_xy = [p for poly in polys for p in poly]
    if (max(p[0] for p in all_xy) < box.min_x
            or min(p[0] for p in all_xy) > box.max_x
            or max(p[1] for p in all_xy) < box.min_y
            or min(p[1] for p in all_xy) > box.max_y):
        return "outside", min_dist

    statuses_inside = []
    crosses = False
    for poly in polys:
        if region.kind == "area":
            per_edge = 0 if len(poly) >= 32 else 6
        else:
            # Ribbon and disk boundaries are curved: sample densely enough
            # that no edge can skip across the host.
            longest = max(math.hypot(poly[i][0] - poly[(i + 1) % len(poly)][0],
                                     poly[i][1] - poly[(i + 1) % len(poly)][1])
                          for i in range(len(poly)))
            target = max(region.min_half_extent() / 2.0, 1e-9)
            per_edge = min(1024, max(0 if len(poly) >= 32 else 6,
                                     int(math.ceil(longest / target))))
        samples = _sample_points(poly, per_edge)
        flags = region.contains_many(samples)
        if need_dist:
            d = float(region.boundary_dist_many(samples).min())
            if d < min_dist:
                min_dist = d
        any_in = bool(flags.any())
        all_in = bool(flags.all())
        if any_in and not all_in:
            crosses = True
        # Sampling can miss a concave notch or a through-crossing; the
        # exact edge test covers those cases where they are possible.
        if not crosses and (not region.is_convex or not any_in):
            if region.crosses_boundary(poly):
                crosses = True
        statuses_inside.append(all_in)
    if crosses:
        return "crosses", min_dist
    if all(statuses_inside):
        return "inside", min_dist
    if not any(statuses_inside):
        # Entirely-outside outline may still swallow the host.
        for poly in polys:
            for hx, hy in region.representative_points():
                if point_in_polygon(hx, hy, poly):
                    return "crosses", min_dist
        return "outside", min_dist
    return "crosses", min_dist


def fit_pattern(primitives: Sequence[ResolvedPrimitive], host: HostSymbol,
                fit: FitSpec, *, composition: str = "2x2x2",
                group_count: int | None = None) -> ResolvedPattern:
    """Apply offset, stretch, the fit mode, and the halo filter."""
    region = HostRegion(host)
    if fit.halo > 0 and fit.halo >= region.min_half_extent():
        raise SpecError("/fit/halo",
                        f"halo {fit.halo:g} must be smaller than the host's "
                        f"minimum half-extent {region.min_half_extent():g}")

    box = host.bbox()
    span = 4.0 * math.hypot(box.width, box.height) + 1.0
    center = box.center

    moved: list[ResolvedPrimitive] = []
    for prim in primitives:
        x = prim.position[0] + fit.pattern_offset[0]
        y = prim.position[1] + fit.pattern_offset[1]
        size = prim.size
        orientation = prim.orientation
        if fit.stretch is not None:
            x, y = fit.stretch.apply_about(x, y, center)
            if fit.stretch_geometry:
                size = (size[0] * fit.stretch.scale_x, size[1] * fit.stretch.scale_y)
                orientation = (orientation + fit.stretch.rotation) % 360.0
        if (x, y) != prim.position or size != prim.size or orientation != prim.orientation:
            prim = dataclasses.replace(prim, position=(x, y), size=size,
                                       orientation=orientation)
        moved.append(prim)

    dropped = {reason: 0 for reason in DROP_REASONS}
    survivors: list[ResolvedPrimitive] = []
    need_dist = fit.halo > 0
    for prim in moved:
        status, min_dist = classify_primitive(prim, region, span,
                                              need_dist=need_dist)
        if fit.mode == "clip":
            if status == "outside":
                dropped["clipped-out"] += 1
                continue
        elif fit.mode == "omit-incomplete":
            if status == "outside":
                dropped["clipped-out"] += 1
                continue
            if status == "crosses":
                dropped["incomplete"] += 1
                continue
        if fit.halo > 0:
            if status == "crosses" or (status == "inside" and min_dist < fit.halo):
                dropped["halo"] += 1
                continue
        survivors.append(prim)

    if group_count is None:
        group_count = 1 + max((p.group for p in primitives), default=0)
    return ResolvedPattern(host=host, primitives=tuple(survivors),
                           dropped=dropped, composition=composition,
                           clip_to_host=(fit.mode == "clip"), halo=fit.halo,
                           group_count=group_count)


def along_line_lattice(path: Sequence[Vec], cell_a: float,
                       fit: FitSpec) -> tuple[np.ndarray, list[float]]:
    """Positions at arc-length multiples of cell_a along a polyline, each
    carrying the local tangent angle (degrees).

    A position on an interior corner takes the bisector tangent. When the
    path length is not an exact multiple of cell_a, the trailing partial
    interval gains an end-of-path position unless the fit mode is
    omit-incomplete.
    """
    if cell_a <= 0:
        raise ValueError("cell_a must be > 0")
    total = polyline_length(path)
    if total <= 0:
        raise ValueError("path length must be > 0")

    steps = int(math.floor(total / cell_a + 1e-9))
    arcs = [k * cell_a for k in range(steps + 1)]
    exact_multiple = abs(steps * cell_a - total) <= 1e-9 * max(1.0, total)
    if not exact_multiple and fit.mode != "omit-incomplete":
        arcs.append(total)

    positions = []
    tangents = []
    for s in arcs:
        (x, y), angle = point_at_arclength(path, s)
        positions.append((x, y))
        tangents.append(angle)
    return np.array(positions, dtype=float), tangents
