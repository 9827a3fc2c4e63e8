"""Shared 2D geometry helpers: boxes, polygons, polylines, distances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

Vec = tuple[float, float]

EPS = 1e-9


@dataclass(frozen=True)
class BBox:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def center(self) -> Vec:
        return ((self.min_x + self.max_x) / 2.0, (self.min_y + self.max_y) / 2.0)

    def expanded(self, margin: float) -> "BBox":
        return BBox(self.min_x - margin, self.min_y - margin,
                    self.max_x + margin, self.max_y + margin)

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        return (self.min_x - tol <= x <= self.max_x + tol
                and self.min_y - tol <= y <= self.max_y + tol)


def polygon_bbox(points: Sequence[Vec]) -> BBox:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return BBox(min(xs), min(ys), max(xs), max(ys))


def polygon_area(points: Sequence[Vec]) -> float:
    """Unsigned area by the shoelace formula."""
    total = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return abs(total) / 2.0


def point_in_polygon(x: float, y: float, points: Sequence[Vec]) -> bool:
    """Even-odd crossing test. Boundary points may land on either side."""
    inside = False
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            t = (y - y1) / (y2 - y1)
            if x < x1 + t * (x2 - x1):
                inside = not inside
    return inside


def _orient(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segments_intersect(p1: Vec, p2: Vec, p3: Vec, p4: Vec) -> bool:
    """True when segments p1p2 and p3p4 share at least one point."""
    d1 = _orient(*p3, *p4, *p1)
    d2 = _orient(*p3, *p4, *p2)
    d3 = _orient(*p1, *p2, *p3)
    d4 = _orient(*p1, *p2, *p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True

    def on_segment(a: Vec, b: Vec, c: Vec) -> bool:
        return (min(a[0], b[0]) - EPS <= c[0] <= max(a[0], b[0]) + EPS
                and min(a[1], b[1]) - EPS <= c[1] <= max(a[1], b[1]) + EPS)

    if abs(d1) <= EPS and on_segment(p3, p4, p1):
        return True
    if abs(d2) <= EPS and on_segment(p3, p4, p2):
        return True
    if abs(d3) <= EPS and on_segment(p1, p2, p3):
        return True
    if abs(d4) <= EPS and on_segment(p1, p2, p4):
        return True
    return False


def polygon_is_simple(points: Sequence[Vec]) -> bool:
    """True when no two non-adjacent edges intersect. O(n^2); hosts are small."""
    n = len(points)
    if n < 3:
        return False
    edges = [(points[i], points[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j == i + 1) or (i == 0 and j == n - 1):
                continue
            if segments_intersect(edges[i][0], edges[i][1], edges[j][0], edges[j][1]):
                return False
    return True


def dist_point_segment(px: float, py: float, ax: float, ay: float,
                       bx: float, by: float) -> float:
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom <= 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / denom
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def dist_point_polyline(px: float, py: float, path: Sequence[Vec]) -> float:
    if len(path) == 1:
        return math.hypot(px - path[0][0], py - path[0][1])
    best = math.inf
    for i in range(len(path) - 1):
        d = dist_point_segment(px, py, *path[i], *path[i + 1])
        if d < best:
            best = d
    return best


def dist_point_polygon_boundary(px: float, py: float, points: Sequence[Vec]) -> float:
    best = math.inf
    n = len(points)
    for i in range(n):
        d = dist_point_segment(px, py, *points[i], *points[(i + 1) % n])
        if d < best:
            best = d
    return best


def polyline_length(path: Sequence[Vec]) -> float:
    return sum(math.hypot(path[i + 1][0] - path[i][0], path[i + 1][1] - path[i][1])
               for i in range(len(path) - 1))


def point_at_arclength(path: Sequence[Vec], s: float, vertex_tol: float = 1e-9):
    """Point and tangent angle (degrees) at arc length s along a polyline.

    A position landing on an interior vertex takes the bisector of the two
    adjacent segment directions; a degenerate U-turn falls back to the
    incoming direction rotated 90 degrees.
    """
    seg_dirs: list[Vec] = []
    seg_lengths: list[float] = []
    for i in range(len(path) - 1):
        dx = path[i + 1][0] - path[i][0]
        dy = path[i + 1][1] - path[i][1]
        length = math.hypot(dx, dy)
        if length > 0.0:
            seg_dirs.append(_unit(dx, dy))
            seg_lengths.append(length)
    total = sum(seg_lengths)
    s = max(0.0, min(s, total))

    # Cumulative boundaries; cum[i] is the arc length at the start of segment i.
    cum = [0.0]
    for length in seg_lengths:
        cum.append(cum[-1] + length)

    # Vertex hit on an interior vertex -> bisector tangent.
    for i in range(1, len(seg_lengths)):
        if abs(s - cum[i]) <= vertex_tol:
            d1, d2 = seg_dirs[i - 1], seg_dirs[i]
            mx, my = d1[0] + d2[0], d1[1] + d2[1]
            if math.hypot(mx, my) < 1e-12:
                mx, my = -d1[1], d1[0]
            x, y = _walk_to(path, s)
            return (x, y), math.degrees(math.atan2(my, mx)) % 360.0

    # Plain interpolation inside (or at the ends of) one segment.
    idx = len(seg_lengths) - 1
    for i in range(len(seg_lengths)):
        if s <= cum[i + 1] + vertex_tol:
            idx = i
            break
    x, y = _walk_to(path, s)
    dx, dy = seg_dirs[idx]
    return (x, y), math.degrees(math.atan2(dy, dx)) % 360.0


def _walk_to(path: Sequence[Vec], s: float) -> Vec:
    acc = 0.0
    for i in range(len(path) - 1):
        ax, ay = path[i]
        bx, by = path[i + 1]
        length = math.hypot(bx - ax, by - ay)
        if length <= 0.0:
            continue
        if s <= acc + length:
            t = (s - acc) / length
            return (ax + t * (bx - ax), ay + t * (by - ay))
        acc += length
    return path[-1]


def _unit(x: float, y: float) -> Vec:
    h = math.hypot(x, y)
    if h <= 0.0:
        return (0.0, 0.0)
    return (x / h, y / h)


def circle_polygon(cx: float, cy: float, rx: float, ry: float,
                   rotation_deg: float = 0.0, n: int = 64) -> list[Vec]:
    """Ellipse outline as an n-gon (inscribed, so it under-approximates)."""
    phi = math.radians(rotation_deg)
    cos_p, sin_p = math.cos(phi), math.sin(phi)
    pts: list[Vec] = []
    for k in range(n):
        t = 2.0 * math.pi * k / n
        x = rx * math.cos(t)
        y = ry * math.sin(t)
        pts.append((cx + x * cos_p - y * sin_p, cy + x * sin_p + y * cos_p))
    return pts


def oriented_rect(cx: float, cy: float, w: float, h: float,
                  rotation_deg: float) -> list[Vec]:
    phi = math.radians(rotation_deg)
    cos_p, sin_p = math.cos(phi), math.sin(phi)
    hw, hh = w / 2.0, h / 2.0
    corners = [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)]
    return [(cx + x * cos_p - y * sin_p, cy + x * sin_p + y * cos_p)
            for x, y in corners]


def rotate_about(px: float, py: float, cx: float, cy: float, deg: float) -> Vec:
    phi = math.radians(deg)
    cos_p, sin_p = math.cos(phi), math.sin(phi)
    dx, dy = px - cx, py - cy
    return (cx + dx * cos_p - dy * sin_p, cy + dx * sin_p + dy * cos_p)
