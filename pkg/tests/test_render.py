"""SVG output: well-formedness, structure, determinism."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor

from pattern_forge import HSL, FitSpec, compile_pattern, fit_pattern, render_svg

from conftest import make_spec

SVG_NS = "{http://www.w3.org/2000/svg}"


def render_text(spec, host):
    return render_svg(compile_pattern(spec, host)).text


def test_output_is_strict_xml(host100):
    spec = make_spec()
    doc = render_svg(compile_pattern(spec, host100))
    root = ET.fromstring(doc.text)
    assert root.tag == f"{SVG_NS}svg"
    assert root.get("viewBox") == "-10 -10 120 120"


def test_zero_primitive_pattern_still_valid(host100):
    out = fit_pattern([], host100, FitSpec(mode="clip"))
    doc = render_svg(out)
    root = ET.fromstring(doc.text)
    paths = root.findall(f"{SVG_NS}path")
    assert len(paths) >= 1  # host outline survives


def test_byte_identical_across_runs(host100):
    spec = make_spec(seed=99, groups=[{
        "shape": "circle", "size": [4],
        "regularity": {"size": {"range": 1}}}])
    a = render_svg(compile_pattern(spec, host100)).data
    b = render_svg(compile_pattern(spec, host100)).data
    assert a == b


def test_no_state_leaks_between_documents(host100, host200):
    spec1 = make_spec(seed=1)
    spec2 = make_spec(seed=2, a=8)
    a1 = render_text(spec1, host100)
    b1 = render_text(spec2, host200)
    # Render in the opposite order; both byte strings must be unchanged.
    b2 = render_text(spec2, host200)
    a2 = render_text(spec1, host100)
    assert a1 == a2
    assert b1 == b2


def test_parallel_rendering_matches_sequential(host100):
    spec = make_spec(seed=31)
    sequential = render_text(spec, host100)
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda _: render_text(spec, host100), range(8)))
    assert all(r == sequential for r in results)


def test_group_containers_and_counts(host200):
    spec = make_spec(groups=[
        {"shape": "circle", "size": [4], "color": {"h": 200, "s": 1, "l": 0.4}},
        {"shape": "square", "size": [3], "color": {"h": 30, "s": 1, "l": 0.5}}],
        grouping={"ratios": [1, 1]})
    resolved = compile_pattern(spec, host200)
    doc = render_svg(resolved)
    root = ET.fromstring(doc.text)
    containers = [g for g in root.iter(f"{SVG_NS}g")
                  if g.get("data-group") is not None]
    assert len(containers) == 2
    rendered = sum(len(list(g)) for g in containers)
    assert rendered == len(resolved.primitives)


def test_every_primitive_inside_padded_viewbox(host100):
    spec = make_spec(regularity={"range": 3.0}, seed=4)
    resolved = compile_pattern(spec, host100)
    doc = render_svg(resolved, padding=10)
    root = ET.fromstring(doc.text)
    min_x, min_y, w, h = map(float, root.get("viewBox").split())
    for c in root.iter(f"{SVG_NS}circle"):
        if c.get("fill") == "none":
            continue
        x, y, r = float(c.get("cx")), float(c.get("cy")), float(c.get("r"))
        assert min_x <= x - r and x + r <= min_x + w
        assert min_y <= y - r and y + r <= min_y + h


def test_nested_container_depth():
    inner = {
        "seed": 2,
        "arrangement": {"kind": "lattice",
                        "lattice": {"cell": {"shape": "square", "a": 6}}},
        "groups": [{"shape": "circle", "size": [2]}],
    }
    spec = make_spec(a=40, groups=[{
        "shape": "nested", "size": [28, 28], "nested_spec": inner}],
        fit={"mode": "omit-incomplete"})
    from pattern_forge import rect_host
    resolved = compile_pattern(spec, rect_host(120, 120))
    assert resolved.primitives
    doc = render_svg(resolved)
    root = ET.fromstring(doc.text)

    # Structural XML walk: a group container holding nested containers that
    # hold the inner pattern's group containers.
    def depth_of_group_nesting(node, depth=0):
        best = depth
        for child in node:
            bump = 1 if (child.tag == f"{SVG_NS}g"
                         and child.get("data-group") is not None) else 0
            best = max(best, depth_of_group_nesting(child, depth + bump))
        return best

    assert depth_of_group_nesting(root) == 2


def test_colors_serialized_as_hsl(host100):
    spec = make_spec(groups=[{"shape": "circle", "size": [4],
                              "color": {"h": 212.5, "s": 0.755, "l": 0.33}}])
    text = render_svg(compile_pattern(spec, host100)).text
    assert 'fill="hsl(212.5, 75.5%, 33%)"' in text


def test_background_option(host100):
    spec = make_spec()
    text = render_svg(compile_pattern(spec, host100),
                      background=HSL(0, 0, 1)).text
    assert 'hsl(0, 0%, 100%)' in text


def test_precision_controls_decimals(host100):
    spec = make_spec(a=3.14159265)
    text1 = render_svg(compile_pattern(spec, host100), precision=1).text
    assert "3.1" in text1
    assert "3.14159" not in text1


def test_stats_track_element_counts(host100):
    spec = make_spec()
    resolved = compile_pattern(spec, host100)
    doc = render_svg(resolved)
    assert doc.stats["circle"] == len(resolved.primitives)
    assert doc.stats["svg"] == 1
