"""Deterministic SVG rendering of closed curves with optional markers."""

import numpy as np

MARGIN = 0.05
STROKE = 0.005
MARKER = 0.012


def _fmt(x):
    return f"{x:.9g}"


def distinct_points(points, tol):
    """Greedy clustering of complex points; returns one representative per cluster.

    Representatives keep the order in which their clusters first appear.
    """
    reps = []
    for w in np.asarray(points, dtype=complex).ravel():
        if not any(abs(w - r) <= tol for r in reps):
            reps.append(complex(w))
    return reps


def render_svg(points, markers=(), title=None):
    """SVG 1.1 text drawing the closed polyline ``points`` and circular markers.

    The view box is the bounding box of curve and markers padded by 5% of
    the larger side; the stroke is 0.5% of that side.  The y axis is flipped
    so the picture has the usual mathematical orientation.  All numbers are
    written with 9 significant digits, so equal input gives equal bytes.
    """
    z = np.asarray(points, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("nothing to render")
    marks = np.asarray(list(markers), dtype=complex).ravel()
    allz = np.concatenate([z, marks])
    x0, x1 = float(allz.real.min()), float(allz.real.max())
    y0, y1 = float(allz.imag.min()), float(allz.imag.max())
    extent = max(x1 - x0, y1 - y0) or 1.0
    pad = MARGIN * extent
    vx, vy = x0 - pad, -y1 - pad
    vw, vh = (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad
    stroke = STROKE * extent
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">',
    ]
    if title:
        lines.append(f"<title>{_escape(title)}</title>")
    coords = " ".join(f"{_fmt(w.real)},{_fmt(-w.imag)}" for w in z)
    lines.append(
        f'<path d="M {coords} Z" fill="none" stroke="black" '
        f'stroke-width="{_fmt(stroke)}" stroke-linejoin="round"/>'
    )
    r = MARKER * extent
    for w in marks:
        lines.append(
            f'<circle class="crossing" cx="{_fmt(w.real)}" cy="{_fmt(-w.imag)}" r="{_fmt(r)}" '
            f'fill="red" stroke="none"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
