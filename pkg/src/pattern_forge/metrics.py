"""Emergent pattern quantities: ink ratio, regional shade, preservation.

All measurements rasterize the fitted pattern over the host at a
supersampled resolution and count pixel coverage; overlapping primitives
count once. Painting follows SVG document order (groups ascending,
primitives in list order), so the shade matches what the renderer emits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .color import hsl_to_linear, linear_to_hsl
from .fitting import ResolvedPattern, primitive_outline
from .model import HSL, HostSymbol, PatternSpec
from .styling import ResolvedPrimitive

SOLID_FILL_THRESHOLD = 0.98
SUPERSAMPLE_FACTORS = (1, 2, 4, 8)

WHITE = HSL(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class PatternMetrics:
    ink_ratio: float
    regional_shade: HSL
    solid_fill_flag: bool
    resolution: int

    def to_dict(self) -> dict:
        return {
            "ink_ratio": self.ink_ratio,
            "regional_shade": {"h": self.regional_shade.h,
                               "s": self.regional_shade.s,
                               "l": self.regional_shade.l},
            "solid_fill": self.solid_fill_flag,
            "resolution": self.resolution,
        }


# --- vectorized membership tests ----------------------------------------------

def _polygon_mask(X: np.ndarray, Y: np.ndarray, poly) -> np.ndarray:
    """Even-odd point-in-polygon over coordinate arrays."""
    inside = np.zeros(X.shape, dtype=bool)
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if y1 == y2:
            continue
        cond = (y1 > Y) != (y2 > Y)
        t = np.where(cond, (Y - y1) / (y2 - y1), 0.0)
        inside ^= cond & (X < x1 + t * (x2 - x1))
    return inside


def _host_mask(X: np.ndarray, Y: np.ndarray, host: HostSymbol) -> np.ndarray:
    if host.kind == "area":
        return _polygon_mask(X, Y, host.polygon)
    if host.kind == "point":
        cx, cy = host.center
        return (X - cx) ** 2 + (Y - cy) ** 2 <= host.radius ** 2
    half = host.width / 2.0
    best = np.full(X.shape, np.inf)
    path = host.path
    for i in range(len(path) - 1):
        ax, ay = path[i]
        bx, by = path[i + 1]
        dx, dy = bx - ax, by - ay
        denom = dx * dx + dy * dy
        if denom <= 0:
            d2 = (X - ax) ** 2 + (Y - ay) ** 2
        else:
            t = np.clip(((X - ax) * dx + (Y - ay) * dy) / denom, 0.0, 1.0)
            d2 = (X - ax - t * dx) ** 2 + (Y - ay - t * dy) ** 2
        best = np.minimum(best, d2)
    return best <= half * half


def _shape_mask(prim: ResolvedPrimitive, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact point-in-shape tests; X, Y are coordinates in the frame the
    primitive was placed in."""
    x0, y0 = prim.position
    w, h = prim.size
    phi = math.radians(prim.orientation)
    c, s = math.cos(phi), math.sin(phi)
    dx, dy = X - x0, Y - y0
    lx = dx * c + dy * s
    ly = -dx * s + dy * c
    kind = prim.shape.kind
    if kind == "circle":
        rx, ry = w / 2.0, h / 2.0
        return (lx / rx) ** 2 + (ly / ry) ** 2 <= 1.0
    if kind in ("square", "rectangle", "line-segment"):
        return (np.abs(lx) <= w / 2.0) & (np.abs(ly) <= h / 2.0)
    if kind == "infinite-line":
        return np.abs(ly) <= h / 2.0
    if kind == "glyph-path":
        inside = np.zeros(X.shape, dtype=bool)
        for poly in prim.shape.glyph:
            scaled = [(gx * w, gy * h) for gx, gy in poly]
            inside ^= _polygon_mask(lx, ly, scaled)
        return inside
    raise ValueError(f"unsupported shape for rasterization: {kind}")


# --- stratified sampling ---------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_ROW_KEY = np.uint64(0xC2B2AE3D27D4EB4F)
_AXIS_SALT = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z + _GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _pixel_jitter(ix0: int, ix1: int, iy0: int, iy1: int):
    """Deterministic per-pixel offsets in [-0.5, 0.5), keyed by the global
    pixel index. Stratified sampling removes the systematic quantization
    bias that aligned lattices would otherwise share across primitives."""
    ix = np.arange(ix0, ix1, dtype=np.uint64)[None, :]
    iy = np.arange(iy0, iy1, dtype=np.uint64)[:, None]
    key = ix * _GOLDEN ^ iy * _ROW_KEY
    jx = (_mix64(key) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53 - 0.5
    jy = (_mix64(key ^ _AXIS_SALT) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53 - 0.5
    return jx, jy


# --- painter --------------------------------------------------------------------

@dataclass(frozen=True)
class _Frame:
    """Rigid transform (rotation then translation) from a local pattern
    frame to root coordinates, plus the clip applied at that level."""

    cos: float
    sin: float
    tx: float
    ty: float
    host: HostSymbol
    clip: bool

    def to_root(self, x: float, y: float) -> tuple[float, float]:
        return (self.tx + x * self.cos - y * self.sin,
                self.ty + x * self.sin + y * self.cos)

    def to_local(self, X: np.ndarray, Y: np.ndarray):
        dx, dy = X - self.tx, Y - self.ty
        return (dx * self.cos + dy * self.sin, -dx * self.sin + dy * self.cos)

    def child(self, position, orientation_deg: float, host: HostSymbol,
              clip: bool) -> "_Frame":
        phi = math.radians(orientation_deg)
        c, s = math.cos(phi), math.sin(phi)
        tx, ty = self.to_root(*position)
        return _Frame(cos=self.cos * c - self.sin * s,
                      sin=self.sin * c + self.cos * s,
                      tx=tx, ty=ty, host=host, clip=clip)


class _Painter:
    def __init__(self, host: HostSymbol, supersample: int) -> None:
        box = host.bbox()
        nx = max(1, int(math.ceil(box.width * supersample)))
        ny = max(1, int(math.ceil(box.height * supersample)))
        self.nx, self.ny = nx, ny
        self.dx = box.width / nx
        self.dy = box.height / ny
        self.min_x, self.min_y = box.min_x, box.min_y
        self.xs = box.min_x + (np.arange(nx) + 0.5) * self.dx
        self.ys = box.min_y + (np.arange(ny) + 0.5) * self.dy
        self.canvas = np.full((ny, nx), -1, dtype=np.int32)
        self.colors: list[HSL] = []
        self._color_ids: dict[tuple[float, float, float], int] = {}
        self.span = 4.0 * math.hypot(box.width, box.height) + 1.0

    def coords(self, sl: tuple[slice, slice]):
        """Jittered sample coordinates for a canvas slice (2D arrays)."""
        iy0, iy1 = sl[0].start, sl[0].stop
        ix0, ix1 = sl[1].start, sl[1].stop
        jx, jy = _pixel_jitter(ix0, ix1, iy0, iy1)
        X = self.min_x + (np.arange(ix0, ix1, dtype=float)[None, :] + 0.5 + jx) * self.dx
        Y = self.min_y + (np.arange(iy0, iy1, dtype=float)[:, None] + 0.5 + jy) * self.dy
        return X, Y

    def color_id(self, color: HSL) -> int:
        key = (color.h, color.s, color.l)
        if key not in self._color_ids:
            self._color_ids[key] = len(self.colors)
            self.colors.append(color)
        return self._color_ids[key]

    def paint_pattern(self, resolved: ResolvedPattern,
                      chain: list[_Frame]) -> None:
        order = sorted(range(len(resolved.primitives)),
                       key=lambda i: (resolved.primitives[i].group, i))
        for idx in order:
            prim = resolved.primitives[idx]
            if prim.nested is not None:
                frame = chain[-1].child(prim.position, prim.orientation,
                                        prim.nested.host,
                                        prim.nested.clip_to_host)
                self.paint_pattern(prim.nested, chain + [frame])
            else:
                self._paint_leaf(prim, chain)

    def _slice_for(self, root_pts) -> tuple[slice, slice] | None:
        xs_min = min(p[0] for p in root_pts)
        xs_max = max(p[0] for p in root_pts)
        ys_min = min(p[1] for p in root_pts)
        ys_max = max(p[1] for p in root_pts)
        ix0 = int(np.searchsorted(self.xs, xs_min - self.dx))
        ix1 = int(np.searchsorted(self.xs, xs_max + self.dx))
        iy0 = int(np.searchsorted(self.ys, ys_min - self.dy))
        iy1 = int(np.searchsorted(self.ys, ys_max + self.dy))
        if ix0 >= ix1 or iy0 >= iy1:
            return None
        return slice(iy0, iy1), slice(ix0, ix1)

    def _paint_leaf(self, prim: ResolvedPrimitive, chain: list[_Frame]) -> None:
        frame = chain[-1]
        root_pts = [frame.to_root(px, py)
                    for poly in primitive_outline(prim, self.span)
                    for px, py in poly]
        sl = self._slice_for(root_pts)
        if sl is None:
            return
        X, Y = self.coords(sl)
        lx, ly = frame.to_local(X, Y)
        mask = _shape_mask(prim, lx, ly)
        if not mask.any():
            return
        for level in chain:
            if level.clip:
                hx, hy = level.to_local(X, Y)
                mask &= _host_mask(hx, hy, level.host)
                if not mask.any():
                    return
        self.canvas[sl][mask] = self.color_id(prim.color)


def _rasterize(resolved: ResolvedPattern, supersample: int):
    if supersample not in SUPERSAMPLE_FACTORS:
        raise ValueError(f"supersample must be one of {SUPERSAMPLE_FACTORS}")
    painter = _Painter(resolved.host, supersample)
    root = _Frame(cos=1.0, sin=0.0, tx=0.0, ty=0.0, host=resolved.host,
                  clip=resolved.clip_to_host)
    painter.paint_pattern(resolved, [root])
    # Row strips keep peak memory flat at high supersampling.
    host_mask = np.empty((painter.ny, painter.nx), dtype=bool)
    strip = max(1, (1 << 22) // max(1, painter.nx))
    for y0 in range(0, painter.ny, strip):
        sl = (slice(y0, min(y0 + strip, painter.ny)), slice(0, painter.nx))
        X, Y = painter.coords(sl)
        host_mask[sl] = _host_mask(X, Y, resolved.host)
    return painter.canvas, painter.colors, host_mask


def ink_ratio(resolved: ResolvedPattern, background: HSL = WHITE,
              supersample: int = 4) -> float:
    """Fraction of host pixels covered by at least one primitive."""
    canvas, _, host_mask = _rasterize(resolved, supersample)
    total = int(host_mask.sum())
    if total == 0:
        return 0.0
    return int(((canvas >= 0) & host_mask).sum()) / total


def regional_shade(resolved: ResolvedPattern, background: HSL = WHITE,
                   supersample: int = 4) -> HSL:
    """Area-weighted mean of primitive colors and background, mixed in
    linear-light RGB and converted back to HSL."""
    canvas, colors, host_mask = _rasterize(resolved, supersample)
    return _shade_from_canvas(canvas, colors, host_mask, background)


def _shade_from_canvas(canvas, colors, host_mask, background: HSL) -> HSL:
    total = int(host_mask.sum())
    if total == 0:
        return background
    acc = np.zeros(3)
    visible = canvas[host_mask]
    bg_count = int((visible < 0).sum())
    if bg_count == total:
        # No primitive pixels at all: the background color, exactly.
        return background
    acc += np.array(hsl_to_linear(background)) * bg_count
    for cid, color in enumerate(colors):
        count = int((visible == cid).sum())
        if count:
            acc += np.array(hsl_to_linear(color)) * count
    mean = acc / total
    return linear_to_hsl(*mean)


def compute_metrics(resolved: ResolvedPattern, background: HSL = WHITE,
                    supersample: int = 4,
                    solid_fill_threshold: float = SOLID_FILL_THRESHOLD) -> PatternMetrics:
    """Ink ratio, regional shade, and the solid-fill flag in one pass."""
    canvas, colors, host_mask = _rasterize(resolved, supersample)
    total = int(host_mask.sum())
    if total == 0:
        ratio = 0.0
    else:
        ratio = int(((canvas >= 0) & host_mask).sum()) / total
    shade = _shade_from_canvas(canvas, colors, host_mask, background)
    return PatternMetrics(ink_ratio=ratio, regional_shade=shade,
                          solid_fill_flag=ratio > solid_fill_threshold,
                          resolution=supersample)


def check_value_preservation(spec_a: PatternSpec, spec_b: PatternSpec,
                             host: HostSymbol, tol: float,
                             supersample: int = 8) -> tuple[bool, dict]:
    """True when both specs produce the same ink ratio within tol."""
    from .pipeline import compile_pattern

    ratio_a = ink_ratio(compile_pattern(spec_a, host), supersample=supersample)
    ratio_b = ink_ratio(compile_pattern(spec_b, host), supersample=supersample)
    preserved = abs(ratio_a - ratio_b) <= tol
    return preserved, {
        "ink_ratio_a": ratio_a,
        "ink_ratio_b": ratio_b,
        "difference": abs(ratio_a - ratio_b),
        "tolerance": tol,
        "preserved": preserved,
    }
