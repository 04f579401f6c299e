"""Static SVG scatter plots of labeled point clouds."""

from __future__ import annotations

import numpy as np

__all__ = ["svg_scatter", "PALETTE"]

# fixed ten-color palette; class j uses PALETTE[j % 10]
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

_SIZE = 800


def svg_scatter(path, points, classes, boundary=None) -> None:
    """Write an 800x800 SVG scatter plot.

    The view box fits the data bounds plus a 5% margin; class colors come
    from the fixed palette and labeled vertices are ringed in red.
    """
    points = np.asarray(points, dtype=np.float64)
    classes = np.asarray(classes, dtype=np.intp).ravel()
    if points.ndim != 2 or points.shape[1] < 2:
        raise ValueError("svg_scatter needs 2-D points")
    if classes.size != points.shape[0]:
        raise ValueError("classes length must match point count")
    xy = points[:, :2]
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    lo = lo - 0.05 * span
    span = 1.10 * span
    scale = _SIZE / span.max()

    def to_px(p):
        x = (p[0] - lo[0]) * scale
        y = _SIZE - (p[1] - lo[1]) * scale  # SVG y grows downward
        return x, y

    radius = 0.008 * _SIZE
    ring = set(np.asarray(boundary, dtype=np.intp).tolist()) if boundary is not None else set()
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
    ]
    for i in range(points.shape[0]):
        x, y = to_px(xy[i])
        color = PALETTE[int(classes[i]) % len(PALETTE)]
        lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius:.2f}" fill="{color}"/>')
    for i in sorted(ring):
        x, y = to_px(xy[i])
        lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{1.8 * radius:.2f}" '
                     f'fill="none" stroke="red" stroke-width="2"/>')
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
