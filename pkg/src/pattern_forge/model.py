"""Domain types for the pattern system.

All types are immutable after construction and safe to share across
threads. Construction itself does not validate; `specio` builds instances
from JSON with full invariant checking and path-bearing errors, and is
the supported entry point for untrusted input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .geometry import BBox, Vec, polygon_bbox

CELL_SHAPES = ("square", "rectangular", "oblique", "hexagonal", "segment")
PRIMITIVE_SHAPES = ("circle", "square", "rectangle", "line-segment",
                    "infinite-line", "glyph-path", "nested")
SHAPE_ALTERNATIVE_POOL = ("circle", "square", "rectangle", "line-segment")
DISTRIBUTION_STYLES = ("grouped", "interspersed", "dispersed", "clustered")
FIT_MODES = ("clip", "omit-incomplete", "overflow")
DATA_MODES = ("accurate", "displaced", "gridded")
REGULARITY_DISTRIBUTIONS = ("uniform", "truncated-normal")
REGULARITY_AXES = ("both", "u-only", "v-only", "along-line")
RETINAL_VARIABLES = ("size", "orientation", "lightness", "hue", "shape")
CHANNEL_VARIABLES = ("size", "orientation", "lightness", "hue", "saturation")
GROUPABLE_VARIABLES = ("size", "orientation", "lightness", "hue", "saturation", "shape")

DEFAULT_MAX_NESTING_DEPTH = 3


class PatternError(Exception):
    """Base class for engine errors."""


class SpecError(PatternError):
    """Invalid spec input; carries a JSON-pointer path to the offender."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path or '/'}: {message}")
        self.path = path
        self.message = message


class NestingDepthExceeded(SpecError):
    pass


class AxisMismatch(PatternError):
    pass


class DegenerateTransform(PatternError):
    pass


class ProjectionDegenerate(PatternError):
    pass


@dataclass(frozen=True)
class SpecWarning:
    """Advisory finding from validate_spec; never affects rendering."""

    code: str
    message: str


@dataclass(frozen=True)
class HSL:
    h: float
    s: float
    l: float


@dataclass(frozen=True)
class Affine2D:
    """Scale, shear, rotation and translation of the plane.

    The linear part composes as rotation @ shear @ scale; with positive
    scale factors its determinant is always positive.
    """

    scale_x: float = 1.0
    scale_y: float = 1.0
    rotation: float = 0.0
    shear: float = 0.0
    translate: Vec = (0.0, 0.0)

    def linear(self) -> tuple[float, float, float, float]:
        """Row-major 2x2 linear part (rotation @ shear @ scale)."""
        phi = math.radians(self.rotation)
        c, s = math.cos(phi), math.sin(phi)
        # shear @ scale
        a, b = self.scale_x, self.shear * self.scale_y
        c2, d = 0.0, self.scale_y
        return (c * a - s * c2, c * b - s * d,
                s * a + c * c2, s * b + c * d)

    def det(self) -> float:
        m00, m01, m10, m11 = self.linear()
        return m00 * m11 - m01 * m10

    def apply_linear(self, x: float, y: float) -> Vec:
        m00, m01, m10, m11 = self.linear()
        return (m00 * x + m01 * y, m10 * x + m11 * y)

    def apply_about(self, x: float, y: float, center: Vec) -> Vec:
        """Full map with the linear part pivoting on `center`."""
        lx, ly = self.apply_linear(x - center[0], y - center[1])
        return (center[0] + lx + self.translate[0],
                center[1] + ly + self.translate[1])

    def apply_point(self, x: float, y: float) -> Vec:
        lx, ly = self.apply_linear(x, y)
        return (lx + self.translate[0], ly + self.translate[1])

    def invert_point(self, x: float, y: float) -> Vec:
        m00, m01, m10, m11 = self.linear()
        det = m00 * m11 - m01 * m10
        if abs(det) < 1e-12:
            raise DegenerateTransform(f"linear part is singular (det={det})")
        tx, ty = x - self.translate[0], y - self.translate[1]
        return ((m11 * tx - m01 * ty) / det, (-m10 * tx + m00 * ty) / det)


IDENTITY = Affine2D()


@dataclass(frozen=True)
class UnitCell:
    """Smallest tessellating unit of a lattice: shape plus a, b, theta."""

    shape: str
    a: float
    b: float
    theta: float

    @property
    def is_1d(self) -> bool:
        return self.shape == "segment"


@dataclass(frozen=True)
class RegularitySpec:
    """Deviation rule: how far (range) and how spread out (dispersion)."""

    range: float = 0.0
    dispersion: float = 0.0
    distribution: str = "uniform"
    axes: str = "both"


ZERO_REGULARITY = RegularitySpec()


@dataclass(frozen=True)
class LatticeSpec:
    dimensionality: int
    cell: UnitCell
    transform: Affine2D = IDENTITY
    positional_regularity: RegularitySpec = ZERO_REGULARITY


@dataclass(frozen=True)
class DataPlacementSpec:
    mode: str
    records: tuple[Mapping[str, object], ...]
    projection: Affine2D = IDENTITY
    grid_cell: float | None = None
    min_separation: float | None = None
    channel_map: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ArrangementSpec:
    kind: str
    lattice: LatticeSpec | None = None
    data: DataPlacementSpec | None = None


@dataclass(frozen=True)
class GroupingSpec:
    count: int
    ratios: tuple[float, ...]
    distribution_style: str = "interspersed"
    cluster_size: int | None = None


@dataclass(frozen=True)
class GroupStyle:
    shape: str
    size: Vec
    orientation: float = 0.0
    color: HSL = HSL(0.0, 0.0, 0.0)
    regularity: Mapping[str, RegularitySpec] = field(default_factory=dict)
    nested_spec: "PatternSpec | None" = None
    shape_alternatives: tuple[str, ...] = ()
    glyph: str | None = None


@dataclass(frozen=True)
class FitSpec:
    mode: str = "clip"
    halo: float = 0.0
    pattern_offset: Vec = (0.0, 0.0)
    stretch: Affine2D | None = None
    stretch_geometry: bool = False


DEFAULT_FIT = FitSpec()


@dataclass(frozen=True)
class PatternSpec:
    """Full declarative description of one pattern."""

    arrangement: ArrangementSpec
    grouping: GroupingSpec
    groups: tuple[GroupStyle, ...]
    fit: FitSpec = DEFAULT_FIT
    seed: int = 0
    variable_groupings: Mapping[str, GroupingSpec] = field(default_factory=dict)


@dataclass(frozen=True)
class HostSymbol:
    """The mark a pattern fills: area polygon, stroked line, or point."""

    kind: str
    id: str = "host"
    polygon: tuple[Vec, ...] | None = None
    path: tuple[Vec, ...] | None = None
    width: float | None = None
    center: Vec | None = None
    radius: float | None = None

    def bbox(self) -> BBox:
        if self.kind == "area":
            return polygon_bbox(self.polygon)
        if self.kind == "line":
            raw = polygon_bbox(self.path)
            half = self.width / 2.0
            return raw.expanded(half)
        cx, cy = self.center
        return BBox(cx - self.radius, cy - self.radius,
                    cx + self.radius, cy + self.radius)


def rect_host(width: float, height: float, origin: Vec = (0.0, 0.0),
              host_id: str = "host") -> HostSymbol:
    """Axis-aligned rectangular area host anchored at `origin`."""
    x, y = origin
    return HostSymbol(kind="area", id=host_id, polygon=(
        (x, y), (x + width, y), (x + width, y + height), (x, y + height)))


def nesting_depth(spec: PatternSpec) -> int:
    """Depth of the pattern document; a plain pattern has depth 1."""
    deepest = 0
    for grp in spec.groups:
        if grp.nested_spec is not None:
            deepest = max(deepest, nesting_depth(grp.nested_spec))
    return 1 + deepest
