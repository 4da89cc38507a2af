"""SVG rendering of disc balls: tiles as hyperbolic polygons, optional
highlighted tile path.  Edges are drawn as circular arcs through their
endpoints orthogonal to the unit circle (straight chords below 0.5 px of
sagitta)."""

from __future__ import annotations

import math
from typing import Sequence

from .grid import GridBall, TileId

_STATUS_FILL = {0: "#f3e8c8", 2: "#d7e7f5", 3: "#e9f2e3"}


def _edge_path(z1: complex, z2: complex, scale: float) -> str:
    """SVG path fragment from z1 to z2 along the hyperbolic line."""
    det = z1.real * z2.imag - z2.real * z1.imag
    x2, y2 = z2.real * scale, z2.imag * scale
    if abs(det) < 1e-12:
        return f"L {x2:.3f} {y2:.3f}"
    a = abs(z1) ** 2 + 1.0
    b = abs(z2) ** 2 + 1.0
    cx = (a * z2.imag - b * z1.imag) / (2.0 * det)
    cy = (b * z1.real - a * z2.real) / (2.0 * det)
    r = math.sqrt(cx * cx + cy * cy - 1.0)
    # sagitta of the chord on the arc, in pixels
    chord = abs(z2 - z1)
    half = chord / 2.0
    sagitta = (r - math.sqrt(max(r * r - half * half, 0.0))) * scale
    if sagitta < 0.5:
        return f"L {x2:.3f} {y2:.3f}"
    cross = (z1.real - cx) * (z2.imag - cy) - (z1.imag - cy) * (z2.real - cx)
    sweep = 1 if cross > 0 else 0
    rp = r * scale
    return f"A {rp:.3f} {rp:.3f} 0 0 {sweep} {x2:.3f} {y2:.3f}"


def render_ball(
    ball: GridBall,
    highlight: Sequence[TileId] = (),
    size: int = 900,
    labels: bool = False,
) -> str:
    """SVG document of the ball; `highlight` draws a polyline of centres."""
    if not ball.corners:
        raise ValueError("ball carries no geometry (was it deserialized?)")
    scale = size / 2.2
    half = size / 2
    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    )
    parts.append(f'<rect width="{size}" height="{size}" fill="white"/>')
    parts.append(
        f'<g transform="translate({half},{half}) scale(1,-1)">'
    )
    parts.append(
        f'<circle cx="0" cy="0" r="{scale:.3f}" fill="none" stroke="#999" stroke-width="1"/>'
    )
    for tile in ball.tiles:
        verts = ball.corners[tile]
        status = 0 if tile.sector == 0 else int(ball.status(tile))
        fill = _STATUS_FILL[status]
        d = [f"M {verts[0].real * scale:.3f} {verts[0].imag * scale:.3f}"]
        for i in range(len(verts)):
            z1 = verts[i]
            z2 = verts[(i + 1) % len(verts)]
            d.append(_edge_path(z1, z2, scale))
        d.append("Z")
        parts.append(
            f'<path d="{" ".join(d)}" fill="{fill}" stroke="#444" stroke-width="0.6"/>'
        )
    if labels:
        parts.append('<g font-size="8" font-family="sans-serif">')
        for tile in ball.tiles:
            z = ball.centers[tile]
            parts.append(
                f'<text x="{z.real * scale:.2f}" y="{z.imag * scale:.2f}" '
                f'text-anchor="middle" transform="scale(1,-1) '
                f'translate(0,{-2 * z.imag * scale:.2f})">{tile.text()}</text>'
            )
        parts.append("</g>")
    if highlight:
        pts = " ".join(
            f"{ball.centers[t].real * scale:.3f},{ball.centers[t].imag * scale:.3f}"
            for t in highlight
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#c0392b" stroke-width="2.2"/>'
        )
        for t in (highlight[0], highlight[-1]):
            z = ball.centers[t]
            parts.append(
                f'<circle cx="{z.real * scale:.3f}" cy="{z.imag * scale:.3f}" r="3.5" '
                f'fill="#c0392b"/>'
            )
    parts.append("</g></svg>")
    return "\n".join(parts) + "\n"
