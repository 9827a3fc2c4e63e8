"""pattern-forge: declarative lattice-pattern synthesis for vector graphics.

Compile a JSON pattern spec onto a host symbol, render deterministic SVG,
and measure the emergent ink ratio and regional shade.
"""

from .fitting import ResolvedPattern, along_line_lattice, fit_pattern
from .grouping import GroupAssignment, assign_groups, target_counts
from .lattice import LatticePoints, basis_vectors, generate_lattice
from .metrics import (
    PatternMetrics,
    check_value_preservation,
    compute_metrics,
    ink_ratio,
    regional_shade,
)
from .model import (
    HSL,
    Affine2D,
    ArrangementSpec,
    AxisMismatch,
    DataPlacementSpec,
    DegenerateTransform,
    FitSpec,
    GroupStyle,
    GroupingSpec,
    HostSymbol,
    LatticeSpec,
    NestingDepthExceeded,
    PatternError,
    PatternSpec,
    ProjectionDegenerate,
    RegularitySpec,
    SpecError,
    SpecWarning,
    UnitCell,
    rect_host,
)
from .pipeline import compile_pattern
from .placement import DataPlacement, apply_jitter, place_from_data
from .render import SvgDocument, render_svg
from .specio import (
    build_spec,
    host_to_dict,
    load_schema,
    parse_host,
    parse_spec,
    serialize_spec,
    spec_to_dict,
    validate_spec,
)
from .styling import (
    CovariationReport,
    ResolvedPrimitive,
    covariation_report,
    resolve_styles,
)

__version__ = "0.1.0"

__all__ = [
    "HSL", "Affine2D", "ArrangementSpec", "AxisMismatch", "CovariationReport",
    "DataPlacement", "DataPlacementSpec", "DegenerateTransform", "FitSpec",
    "GroupAssignment", "GroupStyle", "GroupingSpec", "HostSymbol",
    "LatticePoints", "LatticeSpec", "NestingDepthExceeded", "PatternError",
    "PatternMetrics", "PatternSpec", "ProjectionDegenerate", "RegularitySpec",
    "ResolvedPattern", "ResolvedPrimitive", "SpecError", "SpecWarning",
    "SvgDocument", "UnitCell", "along_line_lattice", "apply_jitter",
    "assign_groups", "basis_vectors", "build_spec", "check_value_preservation",
    "compile_pattern", "compute_metrics", "covariation_report", "fit_pattern",
    "generate_lattice", "host_to_dict", "ink_ratio", "load_schema",
    "parse_host", "parse_spec", "place_from_data", "rect_host",
    "regional_shade", "render_svg", "resolve_styles", "serialize_spec",
    "spec_to_dict", "target_counts", "validate_spec",
]
