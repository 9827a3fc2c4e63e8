"""Shared fixtures and spec-building helpers."""

from __future__ import annotations

import json

import pytest

from pattern_forge import build_spec, rect_host


def make_spec(*, a=10.0, cell_shape="square", groups=None, grouping=None,
              seed=1, fit=None, transform=None, regularity=None,
              dimensionality=None, variable_groupings=None, b=None, theta=None):
    """Convenience builder for lattice specs in tests."""
    cell = {"shape": cell_shape, "a": a}
    if b is not None:
        cell["b"] = b
    if theta is not None:
        cell["theta"] = theta
    lattice = {"cell": cell}
    if dimensionality is not None:
        lattice["dimensionality"] = dimensionality
    if transform is not None:
        lattice["transform"] = transform
    if regularity is not None:
        lattice["positional_regularity"] = regularity
    obj = {
        "spec_version": 1,
        "seed": seed,
        "arrangement": {"kind": "lattice", "lattice": lattice},
        "groups": groups or [{"shape": "circle", "size": [4]}],
    }
    if grouping is not None:
        obj["grouping"] = grouping
    if fit is not None:
        obj["fit"] = fit
    if variable_groupings is not None:
        obj["variable_groupings"] = variable_groupings
    return build_spec(obj)


def data_spec(records, *, mode="accurate", seed=1, groups=None, fit=None,
              channel_map=None, grid_cell=None, min_separation=None,
              projection=None):
    data = {"mode": mode, "records": records}
    if channel_map:
        data["channel_map"] = channel_map
    if grid_cell is not None:
        data["grid_cell"] = grid_cell
    if min_separation is not None:
        data["min_separation"] = min_separation
    if projection is not None:
        data["projection"] = projection
    obj = {
        "spec_version": 1,
        "seed": seed,
        "arrangement": {"kind": "data-driven", "data": data},
        "groups": groups or [{"shape": "circle", "size": [4]}],
    }
    if fit is not None:
        obj["fit"] = fit
    return build_spec(obj)


@pytest.fixture
def host100():
    return rect_host(100, 100)


@pytest.fixture
def host200():
    return rect_host(200, 200)


def spec_json(**kwargs) -> str:
    """Raw JSON text for parse-level tests."""
    obj = {
        "spec_version": 1,
        "seed": 1,
        "arrangement": {"kind": "lattice",
                        "lattice": {"cell": {"shape": "square", "a": 10}}},
        "groups": [{"shape": "circle", "size": [4]}],
    }
    obj.update(kwargs)
    return json.dumps(obj)
