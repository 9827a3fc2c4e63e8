"""HSL <-> sRGB <-> linear-light conversions (standard formulas)."""

from __future__ import annotations

from .model import HSL


def hsl_to_rgb(color: HSL) -> tuple[float, float, float]:
    """Gamma-encoded sRGB components in [0, 1]."""
    h = color.h % 360.0
    c = (1.0 - abs(2.0 * color.l - 1.0)) * color.s
    x = c * (1.0 - abs((h / 60.0) % 2.0 - 1.0))
    m = color.l - c / 2.0
    sector = int(h // 60.0) % 6
    r, g, b = [(c, x, 0.0), (x, c, 0.0), (0.0, c, x),
               (0.0, x, c), (x, 0.0, c), (c, 0.0, x)][sector]
    return (r + m, g + m, b + m)


def rgb_to_hsl(r: float, g: float, b: float) -> HSL:
    mx, mn = max(r, g, b), min(r, g, b)
    l = (mx + mn) / 2.0
    if mx == mn:
        return HSL(0.0, 0.0, l)
    c = mx - mn
    s = c / (1.0 - abs(2.0 * l - 1.0))
    if mx == r:
        h = 60.0 * (((g - b) / c) % 6.0)
    elif mx == g:
        h = 60.0 * ((b - r) / c + 2.0)
    else:
        h = 60.0 * ((r - g) / c + 4.0)
    return HSL(h % 360.0, min(s, 1.0), l)


def srgb_to_linear(u: float) -> float:
    if u <= 0.04045:
        return u / 12.92
    return ((u + 0.055) / 1.055) ** 2.4


def linear_to_srgb(u: float) -> float:
    if u <= 0.0031308:
        return 12.92 * u
    return 1.055 * u ** (1.0 / 2.4) - 0.055


def hsl_to_linear(color: HSL) -> tuple[float, float, float]:
    r, g, b = hsl_to_rgb(color)
    return (srgb_to_linear(r), srgb_to_linear(g), srgb_to_linear(b))


def linear_to_hsl(r: float, g: float, b: float) -> HSL:
    return rgb_to_hsl(linear_to_srgb(max(0.0, min(1.0, r))),
                      linear_to_srgb(max(0.0, min(1.0, g))),
                      linear_to_srgb(max(0.0, min(1.0, b))))
