"""Retinal resolution: concrete appearance of every placed primitive.

Each primitive takes its group's base style, then data channels and
per-variable regularity perturb individual variables on independent
seeded streams. Nested primitives expand via an injected compiler so the
recursion lives in the pipeline, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Mapping, Sequence

import numpy as np

from .model import HSL, GroupStyle, PatternSpec
from .rng import (
    CH_STYLE,
    VAR_HUE,
    VAR_LIGHTNESS,
    VAR_ORIENTATION,
    VAR_SHAPE,
    VAR_SIZE,
    Stream,
)
from .specio import parse_glyph

if TYPE_CHECKING:
    from .fitting import ResolvedPattern

_VAR_IDS = {"size": VAR_SIZE, "orientation": VAR_ORIENTATION,
            "lightness": VAR_LIGHTNESS, "hue": VAR_HUE, "shape": VAR_SHAPE}

# Data channels map a normalized attribute value t in [0, 1] onto each
# variable's usable span.
_SIZE_CHANNEL_MIN = 0.5
_SIZE_CHANNEL_MAX = 1.5
_ORIENTATION_CHANNEL_SPAN = 180.0


@dataclass(frozen=True)
class ShapeGeom:
    """Concrete primitive geometry: kind plus glyph polygons when needed."""

    kind: str
    glyph: tuple[tuple[tuple[float, float], ...], ...] | None = None


@dataclass(frozen=True)
class ResolvedPrimitive:
    position: tuple[float, float]
    group: int
    shape: ShapeGeom
    size: tuple[float, float]
    orientation: float
    color: HSL
    nested: "ResolvedPattern | None" = None


def _draw(stream: Stream, reg) -> float:
    if reg.distribution == "uniform":
        return reg.range * stream.uniform_signed()
    return stream.truncated_normal(reg.dispersion, reg.range)


def resolve_styles(
    positions: np.ndarray,
    labels: Sequence[int],
    spec: PatternSpec,
    seed: int,
    *,
    stream_ids: Sequence[tuple[int, int]] | None = None,
    tangents: Sequence[float] | None = None,
    channel_values: Mapping[str, Sequence[float]] | None = None,
    variable_labels: Mapping[str, Sequence[int]] | None = None,
    nested_compile: Callable[[PatternSpec, tuple[float, float]], "ResolvedPattern"] | None = None,
) -> list[ResolvedPrimitive]:
    """Resolve the appearance of every primitive.

    `stream_ids` keys the per-primitive perturbation streams (lattice cell
    indices when available, list indices otherwise). `tangents` rotates
    primitives to follow along-line arrangements. `channel_values` holds
    normalized data channels per variable; `variable_labels` holds
    per-variable group assignments that override the primary one.
    """
    n = len(positions)
    if stream_ids is None:
        stream_ids = [(i, 0) for i in range(n)]
    variable_labels = variable_labels or {}

    out: list[ResolvedPrimitive] = []
    for idx in range(n):
        g = labels[idx]
        style = spec.groups[g]

        def var_style(var: str) -> GroupStyle:
            if var in variable_labels:
                return spec.groups[variable_labels[var][idx]]
            return style

        w, h = var_style("size").size
        orientation = var_style("orientation").orientation
        shape_style = var_style("shape")
        shape_kind = shape_style.shape
        hue_style = var_style("hue").color
        sat_style = var_style("saturation").color
        light_style = var_style("lightness").color
        hue, sat, light = hue_style.h, sat_style.s, light_style.l

        if tangents is not None:
            orientation += tangents[idx]

        if channel_values:
            t = {var: channel_values[var][idx] for var in channel_values}
            if "size" in t:
                f = _SIZE_CHANNEL_MIN + (_SIZE_CHANNEL_MAX - _SIZE_CHANNEL_MIN) * t["size"]
                w, h = w * f, h * f
            if "orientation" in t:
                orientation += _ORIENTATION_CHANNEL_SPAN * t["orientation"]
            if "hue" in t:
                hue = 360.0 * t["hue"]
            if "saturation" in t:
                sat = t["saturation"]
            if "lightness" in t:
                light = t["lightness"]

        sid = stream_ids[idx]
        reg_map = style.regularity
        if "size" in reg_map and reg_map["size"].range > 0:
            d = _draw(Stream(seed, CH_STYLE, VAR_SIZE, sid[0], sid[1]), reg_map["size"])
            w = max(w + d, 1e-6)
            h = max(h + d, 1e-6)
        if "orientation" in reg_map and reg_map["orientation"].range > 0:
            d = _draw(Stream(seed, CH_STYLE, VAR_ORIENTATION, sid[0], sid[1]),
                      reg_map["orientation"])
            orientation += d
        if "hue" in reg_map and reg_map["hue"].range > 0:
            d = _draw(Stream(seed, CH_STYLE, VAR_HUE, sid[0], sid[1]), reg_map["hue"])
            hue += d
        if "lightness" in reg_map and reg_map["lightness"].range > 0:
            d = _draw(Stream(seed, CH_STYLE, VAR_LIGHTNESS, sid[0], sid[1]),
                      reg_map["lightness"])
            light = min(1.0, max(0.0, light + d))
        if "shape" in reg_map and reg_map["shape"].range > 0 and style.shape_alternatives:
            pool = (shape_kind,) + style.shape_alternatives
            shape_kind = Stream(seed, CH_STYLE, VAR_SHAPE, sid[0], sid[1]).choice(pool)

        glyph = None
        if shape_kind == "glyph-path":
            glyph = parse_glyph(shape_style.glyph)

        nested = None
        if shape_kind == "nested":
            if nested_compile is None:
                raise ValueError("nested primitives need a nested_compile hook")
            nested = nested_compile(shape_style.nested_spec, (w, h))

        out.append(ResolvedPrimitive(
            position=(float(positions[idx, 0]), float(positions[idx, 1])),
            group=g,
            shape=ShapeGeom(kind=shape_kind, glyph=glyph),
            size=(w, h),
            orientation=orientation % 360.0,
            color=HSL(hue % 360.0, min(1.0, max(0.0, sat)), light),
            nested=nested,
        ))
    return out


def normalize_channels(records: Sequence[Mapping[str, object]],
                       channel_map: Mapping[str, str]) -> dict[str, list[float]]:
    """Min-max normalize mapped numeric attributes to [0, 1] per channel.

    A constant attribute maps to 0.5. Missing or non-numeric values also
    fall back to 0.5 so one bad record cannot shift the scale.
    """
    channels: dict[str, list[float]] = {}
    for attr, var in channel_map.items():
        values: list[float | None] = []
        for rec in records:
            v = rec.get(attr)
            if isinstance(v, (int, float)) and not isinstance(v, bool):
                values.append(float(v))
            else:
                values.append(None)
        present = [v for v in values if v is not None]
        if not present:
            channels[var] = [0.5] * len(records)
            continue
        lo, hi = min(present), max(present)
        if hi - lo <= 0:
            channels[var] = [0.5] * len(records)
        else:
            channels[var] = [0.5 if v is None else (v - lo) / (hi - lo)
                             for v in values]
    return channels


# --- covariation ----------------------------------------------------------------

@dataclass(frozen=True)
class CovariationReport:
    variables: tuple[str, ...]
    matrix: tuple[tuple[float, ...], ...]
    constant: tuple[bool, ...]

    def association(self, a: str, b: str) -> float:
        return self.matrix[self.variables.index(a)][self.variables.index(b)]


def covariation_report(resolved: Sequence[ResolvedPrimitive]) -> CovariationReport:
    """Pairwise association across active variables, over primitives.

    Numeric pairs report |Pearson r|; any pair involving a categorical
    variable reports Cramer's V. Constant variables are flagged and report
    0 against everything else (diagonal stays 1).
    """
    if len(resolved) < 2:
        raise ValueError("covariation needs >= 2 primitives")

    numeric: dict[str, np.ndarray] = {
        "size": np.array([p.size[0] for p in resolved]),
        "orientation": np.array([p.orientation for p in resolved]),
        "hue": np.array([p.color.h for p in resolved]),
        "saturation": np.array([p.color.s for p in resolved]),
        "lightness": np.array([p.color.l for p in resolved]),
    }
    categorical: dict[str, list[str]] = {
        "shape": [p.shape.kind for p in resolved],
    }

    names = tuple(list(numeric) + list(categorical))
    is_constant = {}
    for name, vals in numeric.items():
        is_constant[name] = bool(np.all(vals == vals[0]))
    for name, vals in categorical.items():
        is_constant[name] = len(set(vals)) <= 1

    size = len(names)
    matrix = [[0.0] * size for _ in range(size)]
    for i in range(size):
        matrix[i][i] = 1.0
        for j in range(i + 1, size):
            a, b = names[i], names[j]
            if is_constant[a] or is_constant[b]:
                value = 0.0
            elif a in numeric and b in numeric:
                value = _abs_pearson(numeric[a], numeric[b])
            else:
                xa = _as_categories(numeric[a]) if a in numeric else categorical[a]
                xb = _as_categories(numeric[b]) if b in numeric else categorical[b]
                value = _cramers_v(xa, xb)
            matrix[i][j] = matrix[j][i] = value

    return CovariationReport(
        variables=names,
        matrix=tuple(tuple(row) for row in matrix),
        constant=tuple(is_constant[n] for n in names),
    )


def _abs_pearson(x: np.ndarray, y: np.ndarray) -> float:
    sx, sy = np.std(x), np.std(y)
    if sx == 0 or sy == 0:
        return 0.0
    r = float(np.mean((x - np.mean(x)) * (y - np.mean(y))) / (sx * sy))
    return min(1.0, abs(r))


def _as_categories(values: np.ndarray, max_levels: int = 16) -> list[str]:
    distinct = np.unique(values)
    if len(distinct) <= max_levels:
        return [repr(float(v)) for v in values]
    edges = np.quantile(values, np.linspace(0, 1, 9)[1:-1])
    return [str(int(np.searchsorted(edges, v))) for v in values]


def _cramers_v(a: Sequence[str], b: Sequence[str]) -> float:
    levels_a = sorted(set(a))
    levels_b = sorted(set(b))
    ia = {lvl: i for i, lvl in enumerate(levels_a)}
    ib = {lvl: i for i, lvl in enumerate(levels_b)}
    table = np.zeros((len(levels_a), len(levels_b)))
    for x, y in zip(a, b):
        table[ia[x], ib[y]] += 1
    n = table.sum()
    row = table.sum(axis=1, keepdims=True)
    col = table.sum(axis=0, keepdims=True)
    expected = row @ col / n
    with np.errstate(divide="ignore", invalid="ignore"):
        chi2 = float(np.nansum(np.where(expected > 0,
                                        (table - expected) ** 2 / expected, 0.0)))
    denom = n * (min(len(levels_a), len(levels_b)) - 1)
    if denom <= 0:
        return 0.0
    return min(1.0, math.sqrt(chi2 / denom))
