"""Spec parsing, validation, and canonical JSON serialization.

Canonical form: sorted keys, no insignificant whitespace, numbers in
Python's shortest round-trip decimal representation, defaults
materialized, and derived fields (normalized ratios, uniform dispersion)
recomputed. Two canonically equal documents are byte-equal.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any, Mapping

import jsonschema

from .model import (
    CELL_SHAPES,
    CHANNEL_VARIABLES,
    DATA_MODES,
    DEFAULT_MAX_NESTING_DEPTH,
    DISTRIBUTION_STYLES,
    FIT_MODES,
    GROUPABLE_VARIABLES,
    HSL,
    PRIMITIVE_SHAPES,
    REGULARITY_AXES,
    REGULARITY_DISTRIBUTIONS,
    RETINAL_VARIABLES,
    SHAPE_ALTERNATIVE_POOL,
    Affine2D,
    ArrangementSpec,
    DataPlacementSpec,
    FitSpec,
    GroupStyle,
    GroupingSpec,
    HostSymbol,
    LatticeSpec,
    NestingDepthExceeded,
    PatternSpec,
    RegularitySpec,
    SpecError,
    SpecWarning,
    UnitCell,
)

_SQRT3 = math.sqrt(3.0)
_MAX_SEED = (1 << 64) - 1

SPARSE_COUNT_MINIMUM = 4


def load_schema() -> dict[str, Any]:
    """The published JSON Schema for the spec wire format."""
    text = resources.files("pattern_forge").joinpath(
        "schema/pattern-spec.schema.json").read_text("utf-8")
    return json.loads(text)


def _num(value: Any, path: str, *, positive: bool = False,
         nonneg: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(path, "expected a number")
    v = float(value)
    if not math.isfinite(v):
        raise SpecError(path, "number must be finite")
    if positive and v <= 0:
        raise SpecError(path, "must be > 0")
    if nonneg and v < 0:
        raise SpecError(path, "must be >= 0")
    return v + 0.0  # normalizes -0.0


def _vec2(value: Any, path: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SpecError(path, "expected [x, y]")
    return (_num(value[0], path + "/0"), _num(value[1], path + "/1"))


def _enum(value: Any, options: tuple[str, ...], path: str) -> str:
    if value not in options:
        raise SpecError(path, f"expected one of {', '.join(options)}")
    return value


def _obj(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, dict):
        raise SpecError(path, "expected an object")
    return value


def _reject_unknown(obj: Mapping[str, Any], known: tuple[str, ...], path: str) -> None:
    for key in obj:
        if key not in known:
            raise SpecError(f"{path}/{key}", "unknown field")


def _build_affine(obj: Any, path: str) -> Affine2D:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("scale_x", "scale_y", "rotation", "shear", "translate"), path)
    return Affine2D(
        scale_x=_num(obj.get("scale_x", 1.0), path + "/scale_x", positive=True),
        scale_y=_num(obj.get("scale_y", 1.0), path + "/scale_y", positive=True),
        rotation=_num(obj.get("rotation", 0.0), path + "/rotation"),
        shear=_num(obj.get("shear", 0.0), path + "/shear"),
        translate=_vec2(obj.get("translate", [0.0, 0.0]), path + "/translate"),
    )


def _build_cell(obj: Any, path: str) -> UnitCell:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("shape", "a", "b", "theta"), path)
    shape = _enum(obj.get("shape"), CELL_SHAPES, path + "/shape")
    a = _num(obj.get("a"), path + "/a", positive=True) if "a" in obj else None
    if a is None:
        raise SpecError(path + "/a", "required")

    b_raw = obj.get("b")
    theta_raw = obj.get("theta")

    if shape == "segment":
        if b_raw is not None:
            raise SpecError(path + "/b", "segment cells use only parameter a")
        if theta_raw is not None:
            raise SpecError(path + "/theta", "segment cells use only parameter a")
        return UnitCell(shape=shape, a=a, b=a, theta=90.0)

    if shape == "square":
        b = _num(b_raw, path + "/b", positive=True) if b_raw is not None else a
        if abs(b - a) > 1e-9:
            raise SpecError(path + "/b", "square cells require b = a")
        theta = _num(theta_raw, path + "/theta") if theta_raw is not None else 90.0
        if abs(theta - 90.0) > 1e-9:
            raise SpecError(path + "/theta", "square cells require theta = 90")
        return UnitCell(shape=shape, a=a, b=a, theta=90.0)

    if shape == "rectangular":
        if b_raw is None:
            raise SpecError(path + "/b", "required for rectangular cells")
        b = _num(b_raw, path + "/b", positive=True)
        theta = _num(theta_raw, path + "/theta") if theta_raw is not None else 90.0
        if abs(theta - 90.0) > 1e-9:
            raise SpecError(path + "/theta", "rectangular cells require theta = 90")
        return UnitCell(shape=shape, a=a, b=b, theta=90.0)

    if shape == "hexagonal":
        b = _num(b_raw, path + "/b", positive=True) if b_raw is not None else a
        if abs(b - a) > 1e-9:
            raise SpecError(path + "/b", "hexagonal cells require b = a")
        theta = _num(theta_raw, path + "/theta") if theta_raw is not None else 120.0
        if abs(theta - 120.0) > 1e-9:
            raise SpecError(path + "/theta", "hexagonal cells require theta = 120")
        return UnitCell(shape=shape, a=a, b=a, theta=120.0)

    # oblique
    if b_raw is None:
        raise SpecError(path + "/b", "required for oblique cells")
    if theta_raw is None:
        raise SpecError(path + "/theta", "required for oblique cells")
    b = _num(b_raw, path + "/b", positive=True)
    theta = _num(theta_raw, path + "/theta")
    if not (0.0 < theta < 180.0):
        raise SpecError(path + "/theta", "theta must lie in (0, 180) degrees")
    return UnitCell(shape=shape, a=a, b=b, theta=theta)


def _build_regularity(obj: Any, path: str, *, positional: bool) -> RegularitySpec:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("range", "dispersion", "distribution", "axes"), path)
    rng = _num(obj.get("range", 0.0), path + "/range", nonneg=True)
    distribution = _enum(obj.get("distribution", "uniform"),
                         REGULARITY_DISTRIBUTIONS, path + "/distribution")
    axes = _enum(obj.get("axes", "both"), REGULARITY_AXES, path + "/axes")
    if not positional and axes != "both":
        raise SpecError(path + "/axes", "axes apply to positional regularity only")

    if distribution == "uniform":
        derived = rng / _SQRT3
        if "dispersion" in obj:
            given = _num(obj["dispersion"], path + "/dispersion", nonneg=True)
            if abs(given - derived) > 1e-9:
                raise SpecError(path + "/dispersion",
                                "uniform dispersion is derived; must equal range/sqrt(3) or be omitted")
        dispersion = derived
    else:
        if "dispersion" not in obj:
            raise SpecError(path + "/dispersion", "required for truncated-normal")
        dispersion = _num(obj["dispersion"], path + "/dispersion", nonneg=True)
        if dispersion > rng + 1e-12:
            raise SpecError(path + "/dispersion", "must not exceed range")
    return RegularitySpec(range=rng, dispersion=dispersion,
                          distribution=distribution, axes=axes)


def _build_lattice(obj: Any, path: str) -> LatticeSpec:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("dimensionality", "cell", "transform", "positional_regularity"), path)
    cell = _build_cell(obj.get("cell"), path + "/cell")
    dim = obj.get("dimensionality", 1 if cell.is_1d else 2)
    if dim not in (1, 2):
        raise SpecError(path + "/dimensionality", "must be 1 or 2")
    if dim == 1 and not cell.is_1d:
        raise SpecError(path + "/dimensionality",
                        "1D lattices require a segment cell (only parameter a)")
    if dim == 2 and cell.is_1d:
        raise SpecError(path + "/dimensionality", "segment cells are 1D")
    transform = _build_affine(obj.get("transform", {}), path + "/transform")
    reg = _build_regularity(obj.get("positional_regularity", {"range": 0.0}),
                            path + "/positional_regularity", positional=True)
    if dim == 2 and reg.axes == "along-line":
        raise SpecError(path + "/positional_regularity/axes",
                        "along-line axes require a 1D lattice")
    if dim == 1 and reg.axes == "v-only":
        raise SpecError(path + "/positional_regularity/axes",
                        "1D lattices have no v axis")
    return LatticeSpec(dimensionality=dim, cell=cell, transform=transform,
                       positional_regularity=reg)


def _build_record(obj: Any, path: str) -> dict[str, object]:
    obj = _obj(obj, path)
    if "x" not in obj or "y" not in obj:
        raise SpecError(path, "records require x and y")
    rec: dict[str, object] = {}
    for key, value in obj.items():
        if key in ("x", "y"):
            rec[key] = _num(value, f"{path}/{key}")
        elif isinstance(value, bool) or isinstance(value, (int, float)):
            rec[key] = _num(value, f"{path}/{key}")
        elif isinstance(value, str):
            rec[key] = value
        else:
            raise SpecError(f"{path}/{key}", "attributes must be numbers or strings")
    return rec


def _build_data(obj: Any, path: str) -> DataPlacementSpec:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("mode", "records", "projection", "grid_cell",
                          "min_separation", "channel_map"), path)
    mode = _enum(obj.get("mode"), DATA_MODES, path + "/mode")
    raw_records = obj.get("records")
    if not isinstance(raw_records, list):
        raise SpecError(path + "/records", "expected an array of records")
    records = tuple(_build_record(r, f"{path}/records/{i}")
                    for i, r in enumerate(raw_records))
    projection = _build_affine(obj.get("projection", {}), path + "/projection")
    grid_cell = None
    min_separation = None
    if mode == "gridded":
        if "grid_cell" not in obj:
            raise SpecError(path + "/grid_cell", "required for gridded mode")
        grid_cell = _num(obj["grid_cell"], path + "/grid_cell", positive=True)
    elif "grid_cell" in obj:
        raise SpecError(path + "/grid_cell", "only valid for gridded mode")
    if mode == "displaced":
        if "min_separation" not in obj:
            raise SpecError(path + "/min_separation", "required for displaced mode")
        min_separation = _num(obj["min_separation"], path + "/min_separation",
                              positive=True)
    elif "min_separation" in obj:
        raise SpecError(path + "/min_separation", "only valid for displaced mode")

    channel_map: dict[str, str] = {}
    for attr, var in _obj(obj.get("channel_map", {}), path + "/channel_map").items():
        if var == "value":
            var = "lightness"
        if var not in CHANNEL_VARIABLES:
            raise SpecError(f"{path}/channel_map/{attr}",
                            f"expected one of {', '.join(CHANNEL_VARIABLES)}")
        channel_map[attr] = var
    return DataPlacementSpec(mode=mode, records=records, projection=projection,
                             grid_cell=grid_cell, min_separation=min_separation,
                             channel_map=channel_map)


def _build_arrangement(obj: Any, path: str) -> ArrangementSpec:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("kind", "lattice", "data"), path)
    kind = _enum(obj.get("kind"), ("lattice", "data-driven"), path + "/kind")
    if kind == "lattice":
        if "data" in obj:
            raise SpecError(path + "/data", "not valid when kind is lattice")
        if "lattice" not in obj:
            raise SpecError(path + "/lattice", "required when kind is lattice")
        return ArrangementSpec(kind=kind,
                               lattice=_build_lattice(obj["lattice"], path + "/lattice"))
    if "lattice" in obj:
        raise SpecError(path + "/lattice", "not valid when kind is data-driven")
    if "data" not in obj:
        raise SpecError(path + "/data", "required when kind is data-driven")
    return ArrangementSpec(kind=kind, data=_build_data(obj["data"], path + "/data"))


def _build_grouping(obj: Any, path: str, k: int) -> GroupingSpec:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("count", "ratios", "distribution_style", "cluster_size"), path)
    count = obj.get("count", k)
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise SpecError(path + "/count", "must be a positive integer")
    if count != k:
        raise SpecError(path + "/count", f"must equal the number of groups ({k})")

    raw_ratios = obj.get("ratios", [1.0] * k)
    if not isinstance(raw_ratios, list) or len(raw_ratios) != k:
        raise SpecError(path + "/ratios", f"expected exactly {k} positive weights")
    weights = [_num(r, f"{path}/ratios/{i}", positive=True)
               for i, r in enumerate(raw_ratios)]
    total = sum(weights)
    if abs(total - 1.0) <= 1e-9:
        # Already normalized; renormalizing would perturb the last bits and
        # break canonical-form idempotence.
        ratios = tuple(weights)
    else:
        ratios = tuple(w / total for w in weights)

    style = _enum(obj.get("distribution_style", "interspersed"),
                  DISTRIBUTION_STYLES, path + "/distribution_style")
    cluster_size = None
    if style == "clustered":
        if "cluster_size" not in obj:
            raise SpecError(path + "/cluster_size", "required for clustered style")
        cluster_size = obj["cluster_size"]
        if isinstance(cluster_size, bool) or not isinstance(cluster_size, int) or cluster_size < 1:
            raise SpecError(path + "/cluster_size", "must be a positive integer")
    elif "cluster_size" in obj:
        raise SpecError(path + "/cluster_size", "only valid for clustered style")
    return GroupingSpec(count=count, ratios=ratios, distribution_style=style,
                        cluster_size=cluster_size)


def _build_color(obj: Any, path: str) -> HSL:
    obj = _obj(obj, path)
    if "value" in obj:
        _reject_unknown(obj, ("value",), path)
        v = _num(obj["value"], path + "/value")
        if not 0.0 <= v <= 1.0:
            raise SpecError(path + "/value", "must lie in [0, 1]")
        return HSL(0.0, 0.0, v)
    _reject_unknown(obj, ("h", "s", "l"), path)
    for key in ("h", "s", "l"):
        if key not in obj:
            raise SpecError(f"{path}/{key}", "required")
    h = _num(obj["h"], path + "/h") % 360.0
    s = _num(obj["s"], path + "/s")
    l = _num(obj["l"], path + "/l")
    if not 0.0 <= s <= 1.0:
        raise SpecError(path + "/s", "must lie in [0, 1]")
    if not 0.0 <= l <= 1.0:
        raise SpecError(path + "/l", "must lie in [0, 1]")
    return HSL(h, s, l)


def parse_glyph(data: str, path: str = "") -> tuple[tuple[tuple[float, float], ...], ...]:
    """Parse a glyph path: M/L/Z subpaths only, absolute coordinates.

    Returns closed polygons in glyph-local units. Curves are out of scope
    for the v1 wire format.
    """
    tokens = data.replace(",", " ").split()
    polygons: list[tuple[tuple[float, float], ...]] = []
    current: list[tuple[float, float]] = []
    i = 0

    def read_pair(cmd: str) -> tuple[float, float]:
        nonlocal i
        if i + 1 >= len(tokens):
            raise SpecError(path, f"glyph: {cmd} needs two coordinates")
        try:
            x, y = float(tokens[i]), float(tokens[i + 1])
        except ValueError:
            raise SpecError(path, f"glyph: bad coordinates near '{tokens[i]}'") from None
        i += 2
        return (x, y)

    while i < len(tokens):
        cmd = tokens[i]
        i += 1
        if cmd == "M":
            if len(current) >= 3:
                polygons.append(tuple(current))
            current = [read_pair("M")]
        elif cmd == "L":
            if not current:
                raise SpecError(path, "glyph: L before M")
            current.append(read_pair("L"))
        elif cmd == "Z":
            if len(current) >= 3:
                polygons.append(tuple(current))
            current = []
        else:
            raise SpecError(path, f"glyph: unsupported command '{cmd}' (M/L/Z only)")
    if len(current) >= 3:
        polygons.append(tuple(current))
    if not polygons:
        raise SpecError(path, "glyph: no closed subpath with >= 3 points")
    return tuple(polygons)


def _build_group(obj: Any, path: str, depth: int, max_depth: int) -> GroupStyle:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("shape", "size", "orientation", "color", "regularity",
                          "nested_spec", "shape_alternatives", "glyph"), path)
    shape = _enum(obj.get("shape"), PRIMITIVE_SHAPES, path + "/shape")

    raw_size = obj.get("size")
    if not isinstance(raw_size, list) or not 1 <= len(raw_size) <= 2:
        raise SpecError(path + "/size", "expected [w] or [w, h]")
    w = _num(raw_size[0], path + "/size/0", positive=True)
    h = _num(raw_size[1], path + "/size/1", positive=True) if len(raw_size) == 2 else w
    if shape == "square" and abs(w - h) > 1e-9:
        raise SpecError(path + "/size", "square primitives require w = h")
    if shape == "circle" and len(raw_size) == 1:
        h = w

    orientation = _num(obj.get("orientation", 0.0), path + "/orientation") % 360.0
    color = _build_color(obj.get("color", {"h": 0, "s": 0, "l": 0}), path + "/color")

    regularity: dict[str, RegularitySpec] = {}
    for var, reg_obj in _obj(obj.get("regularity", {}), path + "/regularity").items():
        if var not in RETINAL_VARIABLES:
            raise SpecError(f"{path}/regularity/{var}",
                            f"expected one of {', '.join(RETINAL_VARIABLES)}")
        regularity[var] = _build_regularity(reg_obj, f"{path}/regularity/{var}",
                                            positional=False)

    alternatives: tuple[str, ...] = ()
    if "shape_alternatives" in obj:
        raw_alts = obj["shape_alternatives"]
        if not isinstance(raw_alts, list):
            raise SpecError(path + "/shape_alternatives", "expected an array")
        alternatives = tuple(
            _enum(alt, SHAPE_ALTERNATIVE_POOL, f"{path}/shape_alternatives/{i}")
            for i, alt in enumerate(raw_alts))
    if "shape" in regularity and regularity["shape"].range > 0 and not alternatives:
        raise SpecError(path + "/shape_alternatives",
                        "shape regularity needs a non-empty alternatives list")

    glyph = None
    if shape == "glyph-path":
        if "glyph" not in obj:
            raise SpecError(path + "/glyph", "required for glyph-path primitives")
        glyph = obj["glyph"]
        if not isinstance(glyph, str):
            raise SpecError(path + "/glyph", "expected a path string")
        parse_glyph(glyph, path + "/glyph")
    elif "glyph" in obj:
        raise SpecError(path + "/glyph", "only valid for glyph-path primitives")

    nested = None
    if shape == "nested":
        if "nested_spec" not in obj:
            raise SpecError(path + "/nested_spec", "required for nested primitives")
        if depth + 1 > max_depth:
            raise NestingDepthExceeded(
                path + "/nested_spec",
                f"nesting depth exceeded (max {max_depth})")
        nested = _build_spec(obj["nested_spec"], path + "/nested_spec",
                             depth + 1, max_depth, top=False)
    elif "nested_spec" in obj:
        raise SpecError(path + "/nested_spec", "only valid for nested primitives")

    return GroupStyle(shape=shape, size=(w, h), orientation=orientation,
                      color=color, regularity=regularity, nested_spec=nested,
                      shape_alternatives=alternatives, glyph=glyph)


def _build_fit(obj: Any, path: str) -> FitSpec:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("mode", "halo", "pattern_offset", "stretch",
                          "stretch_geometry"), path)
    mode = _enum(obj.get("mode", "clip"), FIT_MODES, path + "/mode")
    halo = _num(obj.get("halo", 0.0), path + "/halo", nonneg=True)
    offset = _vec2(obj.get("pattern_offset", [0.0, 0.0]), path + "/pattern_offset")
    stretch = None
    if "stretch" in obj and obj["stretch"] is not None:
        stretch = _build_affine(obj["stretch"], path + "/stretch")
    stretch_geometry = obj.get("stretch_geometry", False)
    if not isinstance(stretch_geometry, bool):
        raise SpecError(path + "/stretch_geometry", "expected a boolean")
    return FitSpec(mode=mode, halo=halo, pattern_offset=offset,
                   stretch=stretch, stretch_geometry=stretch_geometry)


def _build_spec(obj: Any, path: str, depth: int, max_depth: int,
                *, top: bool) -> PatternSpec:
    obj = _obj(obj, path)
    _reject_unknown(obj, ("spec_version", "seed", "arrangement", "grouping",
                          "groups", "fit", "variable_groupings"), path)
    if top:
        if "spec_version" not in obj:
            raise SpecError(path + "/spec_version", "required")
        if obj["spec_version"] != 1:
            raise SpecError(path + "/spec_version", "supported version is 1")
    elif "spec_version" in obj and obj["spec_version"] != 1:
        raise SpecError(path + "/spec_version", "supported version is 1")

    seed = obj.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= _MAX_SEED:
        raise SpecError(path + "/seed", "seed must be a 64-bit unsigned integer")

    raw_groups = obj.get("groups")
    if not isinstance(raw_groups, list) or not raw_groups:
        raise SpecError(path + "/groups", "at least one group style is required")
    groups = tuple(_build_group(g, f"{path}/groups/{i}", depth, max_depth)
                   for i, g in enumerate(raw_groups))
    k = len(groups)

    arrangement = _build_arrangement(obj.get("arrangement"), path + "/arrangement")
    grouping = _build_grouping(obj.get("grouping", {}), path + "/grouping", k)
    fit = _build_fit(obj.get("fit", {}), path + "/fit")

    variable_groupings: dict[str, GroupingSpec] = {}
    for var, vg in _obj(obj.get("variable_groupings", {}),
                        path + "/variable_groupings").items():
        if var not in GROUPABLE_VARIABLES:
            raise SpecError(f"{path}/variable_groupings/{var}",
                            f"expected one of {', '.join(GROUPABLE_VARIABLES)}")
        variable_groupings[var] = _build_grouping(
            vg, f"{path}/variable_groupings/{var}", k)

    return PatternSpec(arrangement=arrangement, grouping=grouping, groups=groups,
                       fit=fit, seed=seed, variable_groupings=variable_groupings)


def parse_spec(data: bytes | str, *, max_depth: int = DEFAULT_MAX_NESTING_DEPTH) -> PatternSpec:
    """Parse and validate a UTF-8 JSON pattern spec.

    Raises SpecError with a JSON-pointer path for malformed JSON, schema
    violations, cross-field invariant violations, and excessive nesting.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpecError("", f"input is not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SpecError("", f"malformed JSON: {exc.msg} at line {exc.lineno}") from exc
    return build_spec(obj, max_depth=max_depth)


def build_spec(obj: Any, *, max_depth: int = DEFAULT_MAX_NESTING_DEPTH) -> PatternSpec:
    """Validate an already-decoded JSON object into a PatternSpec."""
    error = jsonschema.exceptions.best_match(
        _validator().iter_errors(obj))
    if error is not None:
        pointer = "/" + "/".join(str(p) for p in error.absolute_path)
        raise SpecError("" if pointer == "/" else pointer, error.message)
    return _build_spec(obj, "", 1, max_depth, top=True)


_SCHEMA_VALIDATOR = None


def _validator():
    global _SCHEMA_VALIDATOR
    if _SCHEMA_VALIDATOR is None:
        schema = load_schema()
        jsonschema.Draft7Validator.check_schema(schema)
        _SCHEMA_VALIDATOR = jsonschema.Draft7Validator(schema)
    return _SCHEMA_VALIDATOR


# --- canonical serialization ------------------------------------------------

def _affine_dict(t: Affine2D) -> dict[str, Any]:
    return {
        "scale_x": t.scale_x, "scale_y": t.scale_y, "rotation": t.rotation,
        "shear": t.shear, "translate": [t.translate[0], t.translate[1]],
    }


def _regularity_dict(r: RegularitySpec) -> dict[str, Any]:
    return {"range": r.range, "dispersion": r.dispersion,
            "distribution": r.distribution, "axes": r.axes}


def _grouping_dict(g: GroupingSpec) -> dict[str, Any]:
    out: dict[str, Any] = {
        "count": g.count, "ratios": list(g.ratios),
        "distribution_style": g.distribution_style,
    }
    if g.cluster_size is not None:
        out["cluster_size"] = g.cluster_size
    return out


def spec_to_dict(spec: PatternSpec, *, top: bool = True) -> dict[str, Any]:
    """Plain-JSON form of a spec with defaults materialized."""
    arr: dict[str, Any] = {"kind": spec.arrangement.kind}
    if spec.arrangement.kind == "lattice":
        lat = spec.arrangement.lattice
        cell: dict[str, Any] = {"shape": lat.cell.shape, "a": lat.cell.a}
        if lat.cell.shape in ("rectangular", "oblique"):
            cell["b"] = lat.cell.b
        if lat.cell.shape == "oblique":
            cell["theta"] = lat.cell.theta
        arr["lattice"] = {
            "dimensionality": lat.dimensionality,
            "cell": cell,
            "transform": _affine_dict(lat.transform),
            "positional_regularity": _regularity_dict(lat.positional_regularity),
        }
    else:
        data = spec.arrangement.data
        d: dict[str, Any] = {
            "mode": data.mode,
            "records": [dict(r) for r in data.records],
            "projection": _affine_dict(data.projection),
        }
        if data.grid_cell is not None:
            d["grid_cell"] = data.grid_cell
        if data.min_separation is not None:
            d["min_separation"] = data.min_separation
        if data.channel_map:
            d["channel_map"] = dict(data.channel_map)
        arr["data"] = d

    groups = []
    for grp in spec.groups:
        g: dict[str, Any] = {
            "shape": grp.shape,
            "size": [grp.size[0], grp.size[1]],
            "orientation": grp.orientation,
            "color": {"h": grp.color.h, "s": grp.color.s, "l": grp.color.l},
        }
        if grp.regularity:
            g["regularity"] = {var: _regularity_dict(r)
                               for var, r in grp.regularity.items()}
        if grp.shape_alternatives:
            g["shape_alternatives"] = list(grp.shape_alternatives)
        if grp.glyph is not None:
            g["glyph"] = grp.glyph
        if grp.nested_spec is not None:
            g["nested_spec"] = spec_to_dict(grp.nested_spec, top=False)
        groups.append(g)

    fit: dict[str, Any] = {
        "mode": spec.fit.mode,
        "halo": spec.fit.halo,
        "pattern_offset": [spec.fit.pattern_offset[0], spec.fit.pattern_offset[1]],
        "stretch_geometry": spec.fit.stretch_geometry,
    }
    if spec.fit.stretch is not None:
        fit["stretch"] = _affine_dict(spec.fit.stretch)

    out: dict[str, Any] = {
        "arrangement": arr,
        "grouping": _grouping_dict(spec.grouping),
        "groups": groups,
        "fit": fit,
        "seed": spec.seed,
    }
    if top:
        out["spec_version"] = 1
    if spec.variable_groupings:
        out["variable_groupings"] = {var: _grouping_dict(g)
                                     for var, g in spec.variable_groupings.items()}
    return out


def serialize_spec(spec: PatternSpec) -> str:
    """Canonical JSON text: sorted keys, compact separators."""
    return json.dumps(spec_to_dict(spec), sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


# --- host symbols -------------------------------------------------------------

def parse_host(data: bytes | str | Mapping[str, Any]) -> HostSymbol:
    """Parse and validate a host symbol from JSON text or a decoded object."""
    if isinstance(data, (bytes, str)):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SpecError("", f"malformed host JSON: {exc.msg}") from exc
    else:
        obj = data
    obj = _obj(obj, "")
    kind = _enum(obj.get("kind"), ("area", "line", "point"), "/kind")
    host_id = obj.get("id", "host")
    if not isinstance(host_id, str) or not host_id:
        raise SpecError("/id", "expected a non-empty string")

    if kind == "area":
        _reject_unknown(obj, ("kind", "id", "polygon"), "")
        raw = obj.get("polygon")
        if not isinstance(raw, list) or len(raw) < 3:
            raise SpecError("/polygon", "expected >= 3 [x, y] points")
        polygon = tuple(_vec2(p, f"/polygon/{i}") for i, p in enumerate(raw))
        from .geometry import polygon_is_simple
        if not polygon_is_simple(polygon):
            raise SpecError("/polygon", "polygon must be simple (non-self-intersecting)")
        return HostSymbol(kind=kind, id=host_id, polygon=polygon)
    if kind == "line":
        _reject_unknown(obj, ("kind", "id", "path", "width"), "")
        raw = obj.get("path")
        if not isinstance(raw, list) or len(raw) < 2:
            raise SpecError("/path", "expected >= 2 [x, y] points")
        path = tuple(_vec2(p, f"/path/{i}") for i, p in enumerate(raw))
        width = _num(obj.get("width"), "/width", positive=True) if "width" in obj else None
        if width is None:
            raise SpecError("/width", "required")
        return HostSymbol(kind=kind, id=host_id, path=path, width=width)
    _reject_unknown(obj, ("kind", "id", "center", "radius"), "")
    if "center" not in obj:
        raise SpecError("/center", "required")
    if "radius" not in obj:
        raise SpecError("/radius", "required")
    center = _vec2(obj["center"], "/center")
    radius = _num(obj["radius"], "/radius", positive=True)
    return HostSymbol(kind=kind, id=host_id, center=center, radius=radius)


def host_to_dict(host: HostSymbol) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": host.kind, "id": host.id}
    if host.kind == "area":
        out["polygon"] = [[p[0], p[1]] for p in host.polygon]
    elif host.kind == "line":
        out["path"] = [[p[0], p[1]] for p in host.path]
        out["width"] = host.width
    else:
        out["center"] = [host.center[0], host.center[1]]
        out["radius"] = host.radius
    return out


# --- advisory validation ------------------------------------------------------

def validate_spec(spec: PatternSpec, host: HostSymbol,
                  *, sparse_minimum: int = SPARSE_COUNT_MINIMUM) -> list[SpecWarning]:
    """Advisory checks that never fail and never change rendering.

    Flags solid-fill risk (primitive extent >= lattice spacing), orientation
    variation on round primitives (perceptually void), and sparse patterns
    (expected primitive count in the host below `sparse_minimum`).
    """
    warnings: list[SpecWarning] = []

    if spec.arrangement.kind == "lattice":
        lat = spec.arrangement.lattice
        from .lattice import generate_lattice

        b1, b2 = _transformed_basis(lat)
        spacing = math.hypot(*b1)
        if b2 is not None:
            spacing = min(spacing, math.hypot(*b2))

        max_extent = max(max(g.size) for g in spec.groups
                         if g.shape != "infinite-line") if any(
            g.shape != "infinite-line" for g in spec.groups) else 0.0
        if max_extent >= spacing > 0:
            warnings.append(SpecWarning(
                "solid-fill-risk",
                f"primitive extent {max_extent:g} >= lattice spacing {spacing:g}; "
                "the pattern may saturate into a solid fill"))

        region = host.bbox()
        if region.width > 0 and region.height > 0:
            pts = generate_lattice(lat.cell, lat.transform, region)
            in_host = sum(1 for x, y in pts.points
                          if region.contains(float(x), float(y), tol=1e-9))
            if in_host < sparse_minimum:
                warnings.append(SpecWarning(
                    "sparse",
                    f"expected primitive count {in_host} < {sparse_minimum}; "
                    "the pattern may be hard to perceive"))

    for i, grp in enumerate(spec.groups):
        reg = grp.regularity.get("orientation")
        if grp.shape == "circle" and reg is not None and reg.range > 0:
            warnings.append(SpecWarning(
                "orientation-on-round-primitive",
                f"group {i}: orientation variation on circles is not perceivable"))

    return warnings


def _transformed_basis(lat: LatticeSpec):
    from .lattice import basis_vectors
    v1, v2 = basis_vectors(lat.cell)
    b1 = lat.transform.apply_linear(*v1)
    b2 = lat.transform.apply_linear(*v2) if v2 is not None else None
    return b1, b2
