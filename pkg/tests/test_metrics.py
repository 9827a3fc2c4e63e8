"""Ink ratio, regional shade, and value-preservation checks.

Analytic oracles: pi*r^2/a^2 for circle coverage on a square lattice and
the circular-segment formula for clipped boundary disks.
"""

from __future__ import annotations

import math

import pytest

from pattern_forge import (
    FitSpec,
    HSL,
    check_value_preservation,
    compile_pattern,
    compute_metrics,
    fit_pattern,
    ink_ratio,
    rect_host,
    regional_shade,
)
from pattern_forge.color import hsl_to_linear
from pattern_forge.styling import ResolvedPrimitive, ShapeGeom

from conftest import make_spec

BLACK = HSL(0.0, 0.0, 0.0)


def circle_at(x, y, d=4.0, color=BLACK, group=0):
    return ResolvedPrimitive(position=(x, y), group=group,
                             shape=ShapeGeom(kind="circle"), size=(d, d),
                             orientation=0.0, color=color)


def test_empty_pattern_ink_zero(host100):
    out = fit_pattern([], host100, FitSpec(mode="clip"))
    assert ink_ratio(out) == 0.0
    assert regional_shade(out) == HSL(0.0, 0.0, 1.0)


def test_analytic_circle_packing(host100):
    # pi * 2^2 / 10^2 = 0.125664
    spec = make_spec(a=10, groups=[{"shape": "circle", "size": [4]}])
    resolved = compile_pattern(spec, host100)
    ratio = ink_ratio(resolved, supersample=8)
    assert abs(ratio - math.pi * 4.0 / 100.0) < 0.002


def test_grain_pair_matches():
    host = rect_host(400, 400)
    coarse = make_spec(a=20, groups=[{"shape": "circle", "size": [8]}])
    fine = make_spec(a=10, groups=[{"shape": "circle", "size": [4]}])
    ra = ink_ratio(compile_pattern(fine, host), supersample=8)
    rb = ink_ratio(compile_pattern(coarse, host), supersample=8)
    assert abs(ra - rb) < 0.003


def test_clipped_straddler_counts_inside_area_only():
    # Circle r=2 centered 1 unit inside the x=0 boundary. The clipped area
    # is pi r^2 minus the circular segment beyond the edge:
    # segment = r^2 acos(d/r) - d sqrt(r^2 - d^2) with d = 1.
    host = rect_host(100, 100)
    out = fit_pattern([circle_at(1.0, 50.0)], host, FitSpec(mode="clip"))
    assert len(out.primitives) == 1
    segment = 4.0 * math.acos(0.5) - 1.0 * math.sqrt(3.0)
    inside_area = math.pi * 4.0 - segment
    measured = ink_ratio(out, supersample=8) * 100.0 * 100.0
    assert abs(measured - inside_area) < 0.15


def test_overlap_counts_once(host100):
    out = fit_pattern([circle_at(50, 50, d=10), circle_at(50, 50, d=10)],
                      host100, FitSpec(mode="clip"))
    area = ink_ratio(out, supersample=8) * 10000
    assert abs(area - math.pi * 25.0) < 0.5


def test_supersample_convergence(host100):
    spec = make_spec(a=10, groups=[{"shape": "circle", "size": [4]}])
    resolved = compile_pattern(spec, host100)
    r4 = ink_ratio(resolved, supersample=4)
    r8 = ink_ratio(resolved, supersample=8)
    assert abs(r4 - r8) < 0.002


def test_monotonic_in_size(host100):
    ratios = []
    for d in (2.0, 3.0, 4.0, 5.0, 6.0):
        spec = make_spec(a=10, groups=[{"shape": "circle", "size": [d]}])
        ratios.append(ink_ratio(compile_pattern(spec, host100), supersample=4))
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_solid_fill_flag(host100):
    spec = make_spec(a=10, groups=[{"shape": "square", "size": [11]}])
    metrics = compute_metrics(compile_pattern(spec, host100))
    assert metrics.solid_fill_flag
    assert metrics.ink_ratio > 0.98

    sparse = make_spec(a=10, groups=[{"shape": "circle", "size": [4]}])
    assert not compute_metrics(compile_pattern(sparse, host100)).solid_fill_flag


def test_metrics_json_shape(host100):
    spec = make_spec()
    m = compute_metrics(compile_pattern(spec, host100), supersample=4)
    d = m.to_dict()
    assert set(d) == {"ink_ratio", "regional_shade", "solid_fill", "resolution"}
    assert set(d["regional_shade"]) == {"h", "s", "l"}
    assert d["resolution"] == 4


def test_half_ink_black_gives_mid_linear_gray(host100):
    # 50/50 black and white mixes to 0.5 in linear-light terms.
    side = 10.0 * math.sqrt(0.5)
    spec = make_spec(a=10, groups=[{"shape": "square", "size": [side],
                                    "color": {"h": 0, "s": 0, "l": 0}}])
    resolved = compile_pattern(spec, host100)
    shade = regional_shade(resolved, supersample=8)
    linear = hsl_to_linear(shade)
    assert shade.s == 0.0
    assert abs(linear[0] - 0.5) < 0.02


def test_blue_yellow_mixes_greenish(host200):
    spec = make_spec(
        groups=[{"shape": "circle", "size": [5],
                 "color": {"h": 230, "s": 1, "l": 0.5}},
                {"shape": "circle", "size": [5],
                 "color": {"h": 70, "s": 1, "l": 0.5}}],
        grouping={"ratios": [1, 1]})
    shade = regional_shade(compile_pattern(spec, host200), supersample=4)
    # The mixed hue lies strictly inside the short blue-yellow arc.
    assert 70.0 < shade.h < 230.0


def test_zero_primitives_shade_is_background():
    host = rect_host(50, 50)
    out = fit_pattern([], host, FitSpec(mode="clip"))
    coral = HSL(16.0, 1.0, 0.66)
    assert regional_shade(out, background=coral) == coral


def test_value_preservation_rotation(host200):
    # Non-overlapping squares rotated in place keep the covered area.
    base = make_spec(groups=[{"shape": "square", "size": [4]}])
    rot = make_spec(groups=[{"shape": "square", "size": [4],
                             "orientation": 45}])
    preserved, report = check_value_preservation(base, rot, host200, tol=0.005)
    assert preserved, report


def test_value_preservation_detects_spacing_change(host200):
    # a=10 vs a=8 at equal r multiplies the density by (10/8)^2.
    a10 = make_spec(a=10, groups=[{"shape": "circle", "size": [4]}])
    a8 = make_spec(a=8, groups=[{"shape": "circle", "size": [4]}])
    preserved, report = check_value_preservation(a10, a8, host200, tol=0.005)
    assert not preserved
    ratio = report["ink_ratio_b"] / report["ink_ratio_a"]
    assert ratio == pytest.approx((10.0 / 8.0) ** 2, rel=0.05)


def test_value_preservation_opposed_width_height(host200):
    # w*h constant: 4x4 squares against 8x2 rectangles.
    squares = make_spec(groups=[{"shape": "square", "size": [4]}])
    rects = make_spec(groups=[{"shape": "rectangle", "size": [8, 2]}])
    preserved, report = check_value_preservation(squares, rects, host200,
                                                 tol=0.005)
    assert preserved, report


def test_nested_solid_fill_equals_plain_primitive(host200):
    # A nested pattern that is itself a solid fill must measure like a
    # plain rectangle of the same extent.
    nested = {
        "seed": 3,
        "arrangement": {"kind": "lattice",
                        "lattice": {"cell": {"shape": "square", "a": 50}}},
        "groups": [{"shape": "square", "size": [200],
                    "color": {"h": 0, "s": 0, "l": 0}}],
    }
    spec_nested = make_spec(a=40, groups=[{
        "shape": "nested", "size": [24, 24], "nested_spec": nested}],
        fit={"mode": "omit-incomplete"})
    spec_plain = make_spec(a=40, groups=[{"shape": "rectangle",
                                          "size": [24, 24]}],
                           fit={"mode": "omit-incomplete"})
    ra = ink_ratio(compile_pattern(spec_nested, host200), supersample=8)
    rb = ink_ratio(compile_pattern(spec_plain, host200), supersample=8)
    assert abs(ra - rb) < 1e-3
