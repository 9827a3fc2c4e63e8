"""Fit modes, halo filtering, along-line placement, count conservation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pattern_forge import (
    FitSpec,
    HostSymbol,
    SpecError,
    along_line_lattice,
    compile_pattern,
    fit_pattern,
    rect_host,
)
from pattern_forge.fitting import HostRegion, classify_primitive, primitive_outline
from pattern_forge.model import HSL
from pattern_forge.styling import ResolvedPrimitive, ShapeGeom

from conftest import make_spec

BLACK = HSL(0.0, 0.0, 0.0)


def circle_at(x, y, d=4.0, group=0):
    return ResolvedPrimitive(position=(x, y), group=group,
                             shape=ShapeGeom(kind="circle"), size=(d, d),
                             orientation=0.0, color=BLACK)


def test_halo_drops_near_border_primitive():
    # Circle r=2 centered 3 units from the border, halo 5: the disk lies
    # in the band [1, 5] from the boundary, so it must drop as "halo".
    host = rect_host(100, 100)
    prim = circle_at(3.0, 50.0)
    out = fit_pattern([prim], host, FitSpec(mode="clip", halo=5.0))
    assert len(out.primitives) == 0
    assert out.dropped["halo"] == 1


def test_omit_incomplete_keeps_interior():
    host = rect_host(100, 100)
    out = fit_pattern([circle_at(50, 50)], host, FitSpec(mode="omit-incomplete"))
    assert len(out.primitives) == 1
    assert sum(out.dropped.values()) == 0


def test_omit_incomplete_drops_straddler():
    host = rect_host(100, 100)
    out = fit_pattern([circle_at(0.5, 50)], host, FitSpec(mode="omit-incomplete"))
    assert len(out.primitives) == 0
    assert out.dropped["incomplete"] == 1


def test_clip_keeps_straddler_drops_outside():
    host = rect_host(100, 100)
    prims = [circle_at(0.5, 50), circle_at(-30, 50), circle_at(50, 50)]
    out = fit_pattern(prims, host, FitSpec(mode="clip"))
    assert len(out.primitives) == 2
    assert out.dropped["clipped-out"] == 1


def test_overflow_keeps_everything():
    host = rect_host(100, 100)
    prims = [circle_at(-30, 50), circle_at(50, 50)]
    out = fit_pattern(prims, host, FitSpec(mode="overflow"))
    assert len(out.primitives) == 2


def test_count_conservation():
    host = rect_host(100, 100)
    prims = [circle_at(x, 50.0) for x in np.linspace(-20, 120, 29)]
    for mode in ("clip", "omit-incomplete", "overflow"):
        for halo in (0.0, 2.0, 5.0, 10.0):
            out = fit_pattern(prims, host, FitSpec(mode=mode, halo=halo))
            assert len(out.primitives) + sum(out.dropped.values()) == len(prims)


def test_halo_monotonicity():
    host = rect_host(100, 100)
    prims = [circle_at(x, y) for x in np.linspace(2, 98, 13)
             for y in np.linspace(2, 98, 13)]
    survivors = []
    for halo in (0.0, 2.0, 5.0, 10.0):
        out = fit_pattern(prims, host, FitSpec(mode="clip", halo=halo))
        survivors.append(len(out.primitives))
    assert survivors == sorted(survivors, reverse=True)
    assert survivors[0] > survivors[-1]


def test_omit_incomplete_survivors_fully_inside_inset():
    # Geometric scan oracle: every surviving disk must clear the halo band.
    host = rect_host(100, 100)
    prims = [circle_at(x, y) for x in np.linspace(1, 99, 17)
             for y in np.linspace(1, 99, 17)]
    halo = 4.0
    out = fit_pattern(prims, host, FitSpec(mode="omit-incomplete", halo=halo))
    assert out.primitives
    for p in out.primitives:
        x, y = p.position
        r = p.size[0] / 2
        dist_to_boundary = min(x, y, 100 - x, 100 - y)
        assert dist_to_boundary - r >= halo - 1e-9


def test_halo_must_be_smaller_than_half_extent():
    host = rect_host(20, 100)
    with pytest.raises(SpecError) as err:
        fit_pattern([circle_at(10, 50)], host, FitSpec(mode="clip", halo=10.0))
    assert err.value.path == "/fit/halo"


def test_pattern_offset_shifts_positions():
    host = rect_host(100, 100)
    out = fit_pattern([circle_at(50, 50)], host,
                      FitSpec(mode="clip", pattern_offset=(7.0, -3.0)))
    assert out.primitives[0].position == (57.0, 47.0)


def test_stretch_moves_positions_not_geometry():
    from pattern_forge import Affine2D

    host = rect_host(100, 100)
    fit = FitSpec(mode="overflow", stretch=Affine2D(scale_x=2.0))
    out = fit_pattern([circle_at(30, 50)], host, fit)
    # Stretch pivots on the host bbox center (50, 50).
    assert out.primitives[0].position == (10.0, 50.0)
    assert out.primitives[0].size == (4.0, 4.0)

    fit_geo = FitSpec(mode="overflow", stretch=Affine2D(scale_x=2.0),
                      stretch_geometry=True)
    out_geo = fit_pattern([circle_at(30, 50)], host, fit_geo)
    assert out_geo.primitives[0].size == (8.0, 4.0)


def test_classify_swallowing_primitive_counts_as_crossing():
    host = rect_host(10, 10)
    region = HostRegion(host)
    big = circle_at(5, 5, d=100.0)
    status, _ = classify_primitive(big, region, span=500.0)
    assert status == "crosses"


def test_infinite_line_crosses_disk_host():
    host = HostSymbol(kind="point", id="p", center=(50.0, 50.0), radius=8.0)
    region = HostRegion(host)
    prim = ResolvedPrimitive(position=(50.0, 50.0), group=0,
                             shape=ShapeGeom(kind="infinite-line"),
                             size=(1.0, 2.0), orientation=30.0, color=BLACK)
    status, _ = classify_primitive(prim, region, span=1000.0)
    assert status == "crosses"


def test_line_host_ribbon_membership():
    host = HostSymbol(kind="line", id="l", path=((0.0, 0.0), (100.0, 0.0)),
                      width=10.0)
    region = HostRegion(host)
    assert region.contains(50, 4.9)
    assert not region.contains(50, 5.1)
    out = fit_pattern([circle_at(50, 0, d=4)], host, FitSpec(mode="omit-incomplete"))
    assert len(out.primitives) == 1
    out2 = fit_pattern([circle_at(50, 4, d=4)], host, FitSpec(mode="omit-incomplete"))
    assert len(out2.primitives) == 0


# --- along-line placement -------------------------------------------------------

def test_straight_path_positions():
    positions, tangents = along_line_lattice([(0, 0), (100, 0)], 10.0,
                                             FitSpec(mode="clip"))
    assert len(positions) == 11
    assert positions[:, 0].tolist() == [10.0 * k for k in range(11)]
    assert all(t == 0.0 for t in tangents)


def test_corner_position_takes_bisector():
    # Hand geometry: two 50-unit legs meeting at a right angle; the sample
    # at arc length 50 sits on the corner and the tangent bisects 0 and 90.
    path = [(0, 0), (50, 0), (50, 50)]
    positions, tangents = along_line_lattice(path, 10.0, FitSpec(mode="clip"))
    idx = 5
    assert positions[idx].tolist() == [50.0, 0.0]
    assert tangents[idx] == pytest.approx(45.0)


def test_cell_longer_than_path_omit():
    positions, _ = along_line_lattice([(0, 0), (7, 0)], 10.0,
                                      FitSpec(mode="omit-incomplete"))
    assert positions.tolist() == [[0.0, 0.0]]


def test_partial_interval_kept_in_clip_mode():
    positions, _ = along_line_lattice([(0, 0), (95, 0)], 10.0,
                                      FitSpec(mode="clip"))
    assert positions[-1].tolist() == [95.0, 0.0]
    assert len(positions) == 11


def test_line_host_pipeline_orients_primitives():
    host = HostSymbol(kind="line", id="l",
                      path=((0.0, 0.0), (50.0, 0.0), (50.0, 50.0)), width=8.0)
    spec = make_spec(cell_shape="segment", a=10.0, dimensionality=1,
                     groups=[{"shape": "line-segment", "size": [6, 1.5]}],
                     fit={"mode": "overflow"})
    resolved = compile_pattern(spec, host)
    assert resolved.composition == "1x1x1"
    orientations = sorted({round(p.orientation, 3) for p in resolved.primitives})
    assert 0.0 in orientations       # along the first leg
    assert 90.0 in orientations      # along the second leg
    assert 45.0 in orientations      # the corner bisector
