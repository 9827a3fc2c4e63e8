"""End-to-end compilation: PatternSpec + HostSymbol -> ResolvedPattern.

Stages: arrangement (lattice or data-driven) -> positional jitter ->
group assignment -> retinal resolution (with nested expansion) -> fit.
Every stage is pure; the seed fully determines the output.
"""

from __future__ import annotations

import numpy as np

from .fitting import ResolvedPattern, along_line_lattice, fit_pattern
from .grouping import assign_groups
from .lattice import generate_lattice
from .model import (
    DEFAULT_MAX_NESTING_DEPTH,
    HostSymbol,
    NestingDepthExceeded,
    PatternSpec,
    rect_host,
)
from .placement import apply_jitter, jitter_positions, place_from_data
from .rng import (
    VAR_HUE,
    VAR_LIGHTNESS,
    VAR_ORIENTATION,
    VAR_SATURATION,
    VAR_SHAPE,
    VAR_SIZE,
)
from .styling import normalize_channels, resolve_styles

_VAR_SALTS = {"size": VAR_SIZE, "orientation": VAR_ORIENTATION,
              "lightness": VAR_LIGHTNESS, "hue": VAR_HUE,
              "saturation": VAR_SATURATION, "shape": VAR_SHAPE}


def compile_pattern(spec: PatternSpec, host: HostSymbol, *,
                    seed_override: int | None = None,
                    max_depth: int = DEFAULT_MAX_NESTING_DEPTH,
                    _depth: int = 1) -> ResolvedPattern:
    """Compile a validated spec onto a host symbol."""
    if _depth > max_depth:
        raise NestingDepthExceeded(
            "", f"nesting depth exceeded (max {max_depth})")
    seed = spec.seed if seed_override is None else seed_override

    tangents = None
    channel_values = None
    region = host.bbox()

    if spec.arrangement.kind == "lattice":
        lat = spec.arrangement.lattice
        if host.kind == "line" and lat.dimensionality == 1:
            positions, tangents = along_line_lattice(host.path, lat.cell.a, spec.fit)
            stream_ids = [(i, 0) for i in range(len(positions))]
            if lat.positional_regularity.range > 0:
                along = lat.positional_regularity.axes in ("along-line", "both", "u-only")
                positions = jitter_positions(
                    positions, stream_ids, lat.positional_regularity, seed,
                    tangents=tangents if along else None)
        else:
            points = generate_lattice(lat.cell, lat.transform, region)
            positions = apply_jitter(points, lat.positional_regularity, seed)
            stream_ids = [(int(i), int(j)) for i, j in points.indices]
    else:
        placed = place_from_data(spec.arrangement.data, host, seed)
        positions = placed.positions
        stream_ids = [(i, 0) for i in range(len(positions))]
        if spec.arrangement.data.channel_map:
            channel_values = normalize_channels(placed.records,
                                                spec.arrangement.data.channel_map)

    n = len(positions)
    assignment = assign_groups(n, spec.grouping, None, seed)
    variable_labels = {
        var: assign_groups(n, vg, None, seed, salt=_VAR_SALTS[var]).labels
        for var, vg in spec.variable_groupings.items()
    }

    def expand_nested(nested_spec: PatternSpec, extent: tuple[float, float]) -> ResolvedPattern:
        w, h = extent
        local_host = rect_host(w, h, origin=(-w / 2.0, -h / 2.0), host_id="nested")
        return compile_pattern(nested_spec, local_host, max_depth=max_depth,
                               _depth=_depth + 1)

    primitives = resolve_styles(
        positions, assignment.labels, spec, seed,
        stream_ids=stream_ids, tangents=tangents,
        channel_values=channel_values, variable_labels=variable_labels,
        nested_compile=expand_nested)

    return fit_pattern(primitives, host, spec.fit,
                       composition=_composition(spec, host),
                       group_count=len(spec.groups))


def _composition(spec: PatternSpec, host: HostSymbol) -> str:
    """Arrangement dims x pattern extension dims x host dims.

    Data-driven arrangements span two directions like a 2D lattice; point
    hosts count as small areas (they have areal extent)."""
    host_dim = 1 if host.kind == "line" else 2
    if spec.arrangement.kind == "lattice":
        lattice_dim = spec.arrangement.lattice.dimensionality
    else:
        lattice_dim = 2
    extension = min(lattice_dim, host_dim)
    return f"{lattice_dim}x{extension}x{host_dim}"
