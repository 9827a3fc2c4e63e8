"""Byte-deterministic SVG 1.1 output for a fitted pattern.

The host outline is emitted first, then one container element per group
in ascending index order. Clip mode becomes an SVG clip path on the
containers; omit-incomplete and overflow emit geometry as-is. There is no
global state: the same input always produces the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fitting import ResolvedPattern
from .model import HSL, HostSymbol
from .styling import ResolvedPrimitive

DEFAULT_PADDING = 10.0
DEFAULT_PRECISION = 3


@dataclass(frozen=True)
class SvgDocument:
    text: str
    stats: dict[str, int]

    @property
    def data(self) -> bytes:
        return self.text.encode("utf-8")


def _escape(value: str) -> str:
    return (value.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


class _Sink:
    def __init__(self, precision: int) -> None:
        self.parts: list[str] = []
        self.precision = precision
        self.stats: dict[str, int] = {}

    def fmt(self, x: float) -> str:
        text = f"{x:.{self.precision}f}".rstrip("0").rstrip(".")
        if text in ("-0", ""):
            return "0"
        return text

    def color(self, c: HSL) -> str:
        return f"hsl({self.fmt(c.h)}, {self.fmt(c.s * 100)}%, {self.fmt(c.l * 100)}%)"

    def tag(self, name: str, attrs: dict[str, str], *, close: bool = True) -> None:
        self.stats[name] = self.stats.get(name, 0) + 1
        pieces = [f"<{name}"]
        for key, value in attrs.items():
            pieces.append(f' {key}="{_escape(value)}"')
        pieces.append("/>" if close else ">")
        self.parts.append("".join(pieces))

    def open(self, name: str, attrs: dict[str, str]) -> None:
        self.tag(name, attrs, close=False)

    def close(self, name: str) -> None:
        self.parts.append(f"</{name}>")


def _host_path(sink: _Sink, host: HostSymbol) -> str:
    if host.kind == "area":
        cmds = [f"M {sink.fmt(host.polygon[0][0])} {sink.fmt(host.polygon[0][1])}"]
        for x, y in host.polygon[1:]:
            cmds.append(f"L {sink.fmt(x)} {sink.fmt(y)}")
        cmds.append("Z")
        return " ".join(cmds)
    cmds = [f"M {sink.fmt(host.path[0][0])} {sink.fmt(host.path[0][1])}"]
    for x, y in host.path[1:]:
        cmds.append(f"L {sink.fmt(x)} {sink.fmt(y)}")
    return " ".join(cmds)


def _emit_host_outline(sink: _Sink, host: HostSymbol) -> None:
    if host.kind == "area":
        sink.tag("path", {"d": _host_path(sink, host), "fill": "none",
                          "stroke": "hsl(0, 0%, 0%)", "stroke-width": "1"})
    elif host.kind == "line":
        sink.tag("path", {"d": _host_path(sink, host), "fill": "none",
                          "stroke": "hsl(0, 0%, 92%)",
                          "stroke-width": sink.fmt(host.width),
                          "stroke-linecap": "round", "stroke-linejoin": "round"})
    else:
        sink.tag("circle", {"cx": sink.fmt(host.center[0]),
                            "cy": sink.fmt(host.center[1]),
                            "r": sink.fmt(host.radius), "fill": "none",
                            "stroke": "hsl(0, 0%, 0%)", "stroke-width": "1"})


def _emit_clip_shape(sink: _Sink, host: HostSymbol) -> None:
    if host.kind == "area":
        sink.tag("path", {"d": _host_path(sink, host)})
    elif host.kind == "line":
        sink.tag("path", {"d": _host_path(sink, host), "fill": "none",
                          "stroke": "hsl(0, 0%, 0%)",
                          "stroke-width": sink.fmt(host.width),
                          "stroke-linecap": "round", "stroke-linejoin": "round"})
    else:
        sink.tag("circle", {"cx": sink.fmt(host.center[0]),
                            "cy": sink.fmt(host.center[1]),
                            "r": sink.fmt(host.radius)})


def _emit_primitive(sink: _Sink, prim: ResolvedPrimitive, span: float,
                    clip_prefix: str, depth: int) -> None:
    x, y = prim.position
    w, h = prim.size
    fill = sink.color(prim.color)
    kind = prim.shape.kind

    if kind == "nested":
        transform = f"translate({sink.fmt(x)}, {sink.fmt(y)})"
        if prim.orientation:
            transform += f" rotate({sink.fmt(prim.orientation)})"
        sink.open("g", {"transform": transform, "data-nested": "1"})
        _emit_pattern_body(sink, prim.nested, f"{clip_prefix}n", depth + 1)
        sink.close("g")
        return

    if kind == "circle":
        if abs(w - h) <= 1e-12:
            sink.tag("circle", {"cx": sink.fmt(x), "cy": sink.fmt(y),
                                "r": sink.fmt(w / 2.0), "fill": fill})
        else:
            attrs = {"cx": sink.fmt(x), "cy": sink.fmt(y),
                     "rx": sink.fmt(w / 2.0), "ry": sink.fmt(h / 2.0),
                     "fill": fill}
            if prim.orientation:
                attrs["transform"] = f"rotate({sink.fmt(prim.orientation)} {sink.fmt(x)} {sink.fmt(y)})"
            sink.tag("ellipse", attrs)
    elif kind in ("square", "rectangle"):
        attrs = {"x": sink.fmt(x - w / 2.0), "y": sink.fmt(y - h / 2.0),
                 "width": sink.fmt(w), "height": sink.fmt(h), "fill": fill}
        if prim.orientation:
            attrs["transform"] = f"rotate({sink.fmt(prim.orientation)} {sink.fmt(x)} {sink.fmt(y)})"
        sink.tag("rect", attrs)
    elif kind in ("line-segment", "infinite-line"):
        length = w if kind == "line-segment" else span
        phi = math.radians(prim.orientation)
        dx = math.cos(phi) * length / 2.0
        dy = math.sin(phi) * length / 2.0
        sink.tag("line", {"x1": sink.fmt(x - dx), "y1": sink.fmt(y - dy),
                          "x2": sink.fmt(x + dx), "y2": sink.fmt(y + dy),
                          "stroke": fill, "stroke-width": sink.fmt(h)})
    elif kind == "glyph-path":
        cmds: list[str] = []
        for poly in prim.shape.glyph:
            first = True
            for gx, gy in poly:
                cmds.append(f"{'M' if first else 'L'} {sink.fmt(gx * w)} {sink.fmt(gy * h)}")
                first = False
            cmds.append("Z")
        transform = f"translate({sink.fmt(x)}, {sink.fmt(y)})"
        if prim.orientation:
            transform += f" rotate({sink.fmt(prim.orientation)})"
        sink.tag("path", {"d": " ".join(cmds), "fill": fill,
                          "fill-rule": "evenodd", "transform": transform})
    else:
        raise ValueError(f"unsupported shape for rendering: {kind}")


def _emit_pattern_body(sink: _Sink, resolved: ResolvedPattern,
                       clip_prefix: str, depth: int) -> None:
    host = resolved.host
    box = host.bbox()
    span = 4.0 * math.hypot(box.width, box.height) + 1.0

    _emit_host_outline(sink, host)

    clip_id = None
    if resolved.clip_to_host:
        clip_id = f"{clip_prefix}-clip"
        sink.open("defs", {})
        sink.open("clipPath", {"id": clip_id})
        _emit_clip_shape(sink, host)
        sink.close("clipPath")
        sink.close("defs")

    k = max(resolved.group_count,
            1 + max((p.group for p in resolved.primitives), default=-1))
    by_group: dict[int, list[ResolvedPrimitive]] = {}
    for prim in resolved.primitives:
        by_group.setdefault(prim.group, []).append(prim)

    for g in range(k):
        attrs = {"data-group": str(g)}
        if clip_id is not None:
            attrs["clip-path"] = f"url(#{clip_id})"
        sink.open("g", attrs)
        for idx, prim in enumerate(by_group.get(g, [])):
            _emit_primitive(sink, prim, span, f"{clip_prefix}g{g}i{idx}", depth)
        sink.close("g")


def render_svg(resolved: ResolvedPattern, *, padding: float = DEFAULT_PADDING,
               background: HSL | None = None,
               precision: int = DEFAULT_PRECISION) -> SvgDocument:
    """Render a fitted pattern to a standalone SVG 1.1 document."""
    sink = _Sink(precision)
    box = resolved.host.bbox().expanded(padding)

    sink.parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    sink.open("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "viewBox": f"{sink.fmt(box.min_x)} {sink.fmt(box.min_y)} "
                   f"{sink.fmt(box.width)} {sink.fmt(box.height)}",
    })
    if background is not None:
        sink.tag("rect", {"x": sink.fmt(box.min_x), "y": sink.fmt(box.min_y),
                          "width": sink.fmt(box.width),
                          "height": sink.fmt(box.height),
                          "fill": sink.color(background)})
    host_id = "".join(ch if ch.isalnum() or ch in "-_" else "-"
                      for ch in resolved.host.id) or "host"
    _emit_pattern_body(sink, resolved, host_id, 1)
    sink.close("svg")

    return SvgDocument(text="\n".join(sink.parts) + "\n", stats=dict(sink.stats))
