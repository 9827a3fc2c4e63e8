"""Parsing, validation errors, canonical serialization, advisory warnings."""

from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pattern_forge import (
    NestingDepthExceeded,
    SpecError,
    build_spec,
    load_schema,
    parse_host,
    parse_spec,
    rect_host,
    serialize_spec,
    validate_spec,
)

from conftest import make_spec, spec_json


def test_minimal_spec_defaults():
    spec = parse_spec(spec_json())
    assert spec.grouping.count == 1
    assert spec.grouping.ratios == (1.0,)
    assert spec.fit.mode == "clip"
    assert spec.fit.halo == 0.0
    assert spec.seed == 1
    assert spec.arrangement.lattice.transform.scale_x == 1.0
    assert spec.grouping.distribution_style == "interspersed"


def test_malformed_json():
    with pytest.raises(SpecError) as err:
        parse_spec(b"{not json")
    assert "malformed JSON" in err.value.message


def test_non_utf8_input():
    with pytest.raises(SpecError) as err:
        parse_spec(b"\xff\xfe{}")
    assert "UTF-8" in err.value.message


def test_hexagonal_theta_violation_path():
    obj = json.loads(spec_json())
    obj["arrangement"]["lattice"]["cell"] = {"shape": "hexagonal", "a": 10,
                                             "theta": 90}
    with pytest.raises(SpecError) as err:
        build_spec(obj)
    assert err.value.path == "/arrangement/lattice/cell/theta"


def test_square_cell_defaults_b_and_theta():
    spec = parse_spec(spec_json())
    cell = spec.arrangement.lattice.cell
    assert cell.b == cell.a
    assert cell.theta == 90.0


def test_oblique_requires_b_and_theta():
    obj = json.loads(spec_json())
    obj["arrangement"]["lattice"]["cell"] = {"shape": "oblique", "a": 10, "b": 6}
    with pytest.raises(SpecError) as err:
        build_spec(obj)
    assert err.value.path == "/arrangement/lattice/cell/theta"


def test_theta_range_open_interval():
    obj = json.loads(spec_json())
    obj["arrangement"]["lattice"]["cell"] = {"shape": "oblique", "a": 10,
                                             "b": 6, "theta": 180}
    with pytest.raises(SpecError):
        build_spec(obj)


def test_segment_cell_rejects_b():
    obj = json.loads(spec_json())
    obj["arrangement"]["lattice"] = {
        "dimensionality": 1, "cell": {"shape": "segment", "a": 10, "b": 5}}
    with pytest.raises(SpecError) as err:
        build_spec(obj)
    assert err.value.path == "/arrangement/lattice/cell/b"


def test_nesting_depth_exceeded():
    def nest(depth):
        if depth == 0:
            return json.loads(spec_json())
        inner = nest(depth - 1)
        inner.pop("spec_version", None)
        obj = json.loads(spec_json())
        obj["groups"] = [{"shape": "nested", "size": [8, 8],
                          "nested_spec": inner}]
        return obj

    # Depth 3 document is allowed at the default cap.
    build_spec(nest(2))
    with pytest.raises(NestingDepthExceeded) as err:
        build_spec(nest(3))
    assert "nesting depth exceeded" in err.value.message
    # A higher cap admits the same document.
    build_spec(nest(3), max_depth=4)


def test_seed_bounds():
    obj = json.loads(spec_json())
    obj["seed"] = -1
    with pytest.raises(SpecError):
        build_spec(obj)
    obj["seed"] = 2 ** 64 - 1
    assert build_spec(obj).seed == 2 ** 64 - 1


def test_ratios_length_must_match_groups():
    obj = json.loads(spec_json())
    obj["grouping"] = {"ratios": [1, 1]}
    with pytest.raises(SpecError) as err:
        build_spec(obj)
    assert err.value.path == "/grouping/ratios"


def test_ratios_normalize():
    spec = make_spec(groups=[{"shape": "circle", "size": [4]},
                             {"shape": "circle", "size": [2]}],
                     grouping={"ratios": [1, 3]})
    assert spec.grouping.ratios == (0.25, 0.75)


def test_cluster_size_required_for_clustered():
    obj = json.loads(spec_json())
    obj["groups"] = [{"shape": "circle", "size": [4]},
                     {"shape": "circle", "size": [2]}]
    obj["grouping"] = {"ratios": [1, 1], "distribution_style": "clustered"}
    with pytest.raises(SpecError) as err:
        build_spec(obj)
    assert err.value.path == "/grouping/cluster_size"


def test_uniform_dispersion_is_derived():
    obj = json.loads(spec_json())
    obj["arrangement"]["lattice"]["positional_regularity"] = {
        "range": 3.0, "dispersion": 1.0}
    with pytest.raises(SpecError) as err:
        build_spec(obj)
    assert "sqrt(3)" in err.value.message

    obj["arrangement"]["lattice"]["positional_regularity"] = {
        "range": 3.0, "dispersion": 3.0 / math.sqrt(3.0)}
    spec = build_spec(obj)
    assert spec.arrangement.lattice.positional_regularity.dispersion == pytest.approx(
        math.sqrt(3.0))


def test_truncated_normal_dispersion_capped_by_range():
    obj = json.loads(spec_json())
    obj["arrangement"]["lattice"]["positional_regularity"] = {
        "range": 2.0, "distribution": "truncated-normal", "dispersion": 3.0}
    with pytest.raises(SpecError):
        build_spec(obj)


def test_achromatic_value_becomes_lightness():
    obj = json.loads(spec_json())
    obj["groups"][0]["color"] = {"value": 0.3}
    spec = build_spec(obj)
    assert spec.groups[0].color.s == 0.0
    assert spec.groups[0].color.l == 0.3


def test_glyph_path_validation():
    obj = json.loads(spec_json())
    obj["groups"][0] = {"shape": "glyph-path", "size": [4, 4],
                        "glyph": "M 0 -0.5 L 0.5 0.5 L -0.5 0.5 Z"}
    spec = build_spec(obj)
    assert spec.groups[0].glyph is not None

    obj["groups"][0]["glyph"] = "M 0 0 C 1 1 2 2 3 3"
    with pytest.raises(SpecError) as err:
        build_spec(obj)
    assert "unsupported command" in err.value.message


def test_unknown_field_rejected():
    obj = json.loads(spec_json())
    obj["surprise"] = 1
    with pytest.raises(SpecError):
        build_spec(obj)


def test_canonical_round_trip_simple():
    text = spec_json()
    once = serialize_spec(parse_spec(text))
    twice = serialize_spec(parse_spec(once))
    assert once == twice


def test_warnings_solid_fill(host100):
    spec = make_spec(groups=[{"shape": "circle", "size": [12]}])
    warnings = validate_spec(spec, host100)
    assert any(w.code == "solid-fill-risk" for w in warnings)


def test_warnings_orientation_on_circle(host100):
    spec = make_spec(groups=[{
        "shape": "circle", "size": [4],
        "regularity": {"orientation": {"range": 90}}}])
    warnings = validate_spec(spec, host100)
    assert any(w.code == "orientation-on-round-primitive" for w in warnings)


def test_warnings_sparse():
    spec = make_spec()
    warnings = validate_spec(spec, rect_host(8, 8))
    sparse = [w for w in warnings if w.code == "sparse"]
    assert sparse and "1 < 4" in sparse[0].message


def test_warnings_quiet_for_sane_spec(host100):
    spec = make_spec()
    assert validate_spec(spec, host100) == []


def test_warnings_do_not_change_rendering(host100):
    from pattern_forge import compile_pattern, render_svg
    spec = make_spec(groups=[{"shape": "circle", "size": [12]}])
    before = render_svg(compile_pattern(spec, host100)).text
    validate_spec(spec, host100)
    after = render_svg(compile_pattern(spec, host100)).text
    assert before == after


def test_schema_loads_and_validates():
    schema = load_schema()
    assert schema["definitions"]["pattern_spec"]["properties"]["spec_version"]


def test_parse_host_variants():
    area = parse_host(json.dumps({"kind": "area", "polygon":
                                  [[0, 0], [10, 0], [10, 10], [0, 10]]}))
    assert area.kind == "area"
    line = parse_host(json.dumps({"kind": "line", "width": 4,
                                  "path": [[0, 0], [50, 0]]}))
    assert line.bbox().height == 4
    point = parse_host(json.dumps({"kind": "point", "center": [5, 5],
                                   "radius": 3}))
    assert point.bbox().width == 6

    with pytest.raises(SpecError) as err:
        parse_host(json.dumps({"kind": "area", "polygon":
                               [[0, 0], [10, 10], [10, 0], [0, 10]]}))
    assert "simple" in err.value.message


# --- property: round-trip identity over generated specs ------------------------

_cell = st.sampled_from([
    {"shape": "square", "a": 10},
    {"shape": "rectangular", "a": 8, "b": 5},
    {"shape": "oblique", "a": 8, "b": 5, "theta": 60},
    {"shape": "hexagonal", "a": 9},
])

_group = st.fixed_dictionaries({
    "shape": st.sampled_from(["circle", "rectangle", "line-segment"]),
    "size": st.tuples(st.floats(0.5, 20), st.floats(0.5, 20)).map(list),
    "orientation": st.floats(0, 359),
    "color": st.fixed_dictionaries({
        "h": st.floats(0, 359), "s": st.floats(0, 1), "l": st.floats(0, 1)}),
})


@st.composite
def _specs(draw):
    groups = draw(st.lists(_group, min_size=1, max_size=3))
    obj = {
        "spec_version": 1,
        "seed": draw(st.integers(0, 2 ** 32)),
        "arrangement": {"kind": "lattice", "lattice": {"cell": draw(_cell)}},
        "groups": groups,
    }
    if len(groups) > 1:
        obj["grouping"] = {
            "ratios": draw(st.lists(st.floats(0.5, 5), min_size=len(groups),
                                    max_size=len(groups))),
            "distribution_style": draw(st.sampled_from(
                ["grouped", "interspersed", "dispersed"])),
        }
    obj["fit"] = {"mode": draw(st.sampled_from(["clip", "omit-incomplete",
                                                "overflow"])),
                  "halo": draw(st.floats(0, 3))}
    return obj


@settings(max_examples=60, deadline=None)
@given(_specs())
def test_round_trip_canonical_identity(obj):
    once = serialize_spec(build_spec(obj))
    twice = serialize_spec(parse_spec(once))
    assert once == twice
