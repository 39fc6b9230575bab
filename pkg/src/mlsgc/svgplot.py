"""Self-contained SVG rendering for sweep outputs.

No plotting dependency: sweeps emit CSV as ground truth and these helpers
derive the figures from the rows. Rendering is deterministic, so the same
rows regenerate byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

# Anchor colors for mapping detectability in [0, 1] to a perceptual ramp.
_STOPS = [
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
]

_FONT = 'font-family="Helvetica,Arial,sans-serif"'


def _color(v: float) -> str:
    v = min(max(v, 0.0), 1.0)
    for (a, ca), (b, cb) in zip(_STOPS[:-1], _STOPS[1:]):
        if v <= b:
            f = 0.0 if b == a else (v - a) / (b - a)
            rgb = [round(x + f * (y - x)) for x, y in zip(ca, cb)]
            return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"
    return "#fde725"


def _f(x: float) -> str:
    return f"{x:.2f}"


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else float("nan")


def _clip_line(a: float, b: float, t: float, lo: float, hi: float):
    """Intersect a*x + b*y = t with the [lo, hi]^2 square; None if it misses."""
    pts = []
    if abs(b) > 1e-15:
        for x in (lo, hi):
            y = (t - a * x) / b
            if lo - 1e-9 <= y <= hi + 1e-9:
                pts.append((x, min(max(y, lo), hi)))
    if abs(a) > 1e-15:
        for y in (lo, hi):
            x = (t - b * y) / a
            if lo - 1e-9 <= x <= hi + 1e-9:
                pts.append((min(max(x, lo), hi), y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort()
    return uniq[0], uniq[-1]


def _heatmap_panel(parts, rows, px, py, size, title, value_key, overlays):
    p1s = sorted({r["p1"] for r in rows})
    p2s = sorted({r["p2"] for r in rows})
    lo = min(p1s[0], p2s[0])
    hi = max(p1s[-1], p2s[-1])
    span = (hi - lo) or 1.0
    ncell = max(len(p1s), len(p2s))
    cell = size / ncell
    # Map a parameter value to the center of its cell.
    def cx(p):
        return px + ((p - lo) / span) * (size - cell) + cell / 2

    def cy(p):
        return py + size - (((p - lo) / span) * (size - cell) + cell / 2)

    value = {(r["p1"], r["p2"]): r[value_key] for r in rows}
    for p1 in p1s:
        for p2 in p2s:
            v = value.get((p1, p2))
            if v is None:
                continue
            parts.append(
                f'<rect x="{_f(cx(p1) - cell / 2)}" y="{_f(cy(p2) - cell / 2)}" '
                f'width="{_f(cell)}" height="{_f(cell)}" fill="{_color(v)}"/>'
            )
    for a, b, t, style in overlays:
        if t != t:  # NaN guard
            continue
        seg = _clip_line(a, b, t, lo, hi)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = seg
        parts.append(
            f'<line x1="{_f(cx(x1))}" y1="{_f(cy(y1))}" '
            f'x2="{_f(cx(x2))}" y2="{_f(cy(y2))}" {style}/>'
        )
    parts.append(
        f'<rect x="{_f(px)}" y="{_f(py)}" width="{_f(size)}" height="{_f(size)}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{_f(px + size / 2)}" y="{_f(py - 8)}" {_FONT} font-size="13" '
        f'text-anchor="middle">{title}</text>'
    )
    for p in (lo, (lo + hi) / 2, hi):
        parts.append(
            f'<text x="{_f(cx(p))}" y="{_f(py + size + 16)}" {_FONT} font-size="10" '
            f'text-anchor="middle">{p:g}</text>'
        )
        parts.append(
            f'<text x="{_f(px - 6)}" y="{_f(cy(p) + 3)}" {_FONT} font-size="10" '
            f'text-anchor="end">{p:g}</text>'
        )
    parts.append(
        f'<text x="{_f(px + size / 2)}" y="{_f(py + size + 32)}" {_FONT} font-size="12" '
        'text-anchor="middle">p1</text>'
    )
    parts.append(
        f'<text x="{_f(px - 32)}" y="{_f(py + size / 2)}" {_FONT} font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 {_f(px - 32)} {_f(py + size / 2)})">p2</text>'
    )


def _colorbar(parts, x, y, height):
    steps = 40
    for i in range(steps):
        v = 1.0 - i / (steps - 1)
        parts.append(
            f'<rect x="{_f(x)}" y="{_f(y + i * height / steps)}" width="14" '
            f'height="{_f(height / steps + 0.5)}" fill="{_color(v)}"/>'
        )
    parts.append(
        f'<rect x="{_f(x)}" y="{_f(y)}" width="14" height="{_f(height)}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    for v, label in ((1.0, "1"), (0.5, "0.5"), (0.0, "0")):
        parts.append(
            f'<text x="{_f(x + 18)}" y="{_f(y + (1 - v) * height + 3)}" {_FONT} '
            f'font-size="10">{label}</text>'
        )


def _svg(width: int, height: int, parts: list[str]) -> str:
    body = "\n".join(parts)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>\n'
        f"{body}\n</svg>\n"
    )


def render_noise_heatmap(rows: list[dict], path) -> str:
    """Detectability heatmaps over the (p1, p2) grid, one panel per w1.

    Each panel overlays the mean critical-bound lines
    w1*p1 + (1-w1)*p2 = t_lb (dashed white) and = t_ub (solid white), plus
    the weight-independent reliable square (dotted). Returns the SVG text.
    """
    w1s = sorted({r["w1"] for r in rows})
    size, margin, gap = 240, 56, 36
    width = margin + len(w1s) * (size + gap) + 60
    height = size + 2 * margin
    parts: list[str] = []
    for i, w1 in enumerate(w1s):
        sub = [r for r in rows if r["w1"] == w1]
        t_lb = _mean(r["t_lb"] for r in sub)
        t_ub = _mean(r["t_ub"] for r in sub)
        u_lb = _mean(r["universal_lb"] for r in sub)
        overlays = [
            (w1, 1.0 - w1, t_lb, 'stroke="#ffffff" stroke-width="2" stroke-dasharray="6,4"'),
            (w1, 1.0 - w1, t_ub, 'stroke="#ffffff" stroke-width="2"'),
            (1.0, 0.0, u_lb, 'stroke="#ff5555" stroke-width="1.5" stroke-dasharray="2,3"'),
            (0.0, 1.0, u_lb, 'stroke="#ff5555" stroke-width="1.5" stroke-dasharray="2,3"'),
        ]
        _heatmap_panel(
            parts,
            sub,
            margin + i * (size + gap),
            margin,
            size,
            f"w1 = {w1:g}",
            "detect_mean",
            overlays,
        )
    _colorbar(parts, width - 50, margin, size)
    text = _svg(width, height, parts)
    Path(path).write_text(text, encoding="utf-8")
    return text


def render_geomean_heatmap(rows: list[dict], path) -> str:
    """Heatmap of the geometric-mean detectability across weight vectors."""
    size, margin = 240, 56
    width = margin + size + 96
    height = size + 2 * margin
    parts: list[str] = []
    u_lb = _mean(r["universal_lb"] for r in rows)
    overlays = [
        (1.0, 0.0, u_lb, 'stroke="#ff5555" stroke-width="1.5" stroke-dasharray="2,3"'),
        (0.0, 1.0, u_lb, 'stroke="#ff5555" stroke-width="1.5" stroke-dasharray="2,3"'),
    ]
    _heatmap_panel(
        parts, rows, margin, margin, size, "geometric mean over w1", "detect_geomean", overlays
    )
    _colorbar(parts, width - 50, margin, size)
    text = _svg(width, height, parts)
    Path(path).write_text(text, encoding="utf-8")
    return text


def render_weight_curve(rows: list[dict], path) -> str:
    """Detectability versus w1 with the predicted critical weight marked."""
    size, margin = 300, 56
    width = size + 2 * margin
    height = size + 2 * margin
    parts: list[str] = []
    x0, y0 = margin, margin

    def cx(w):
        return x0 + w * size

    def cy(v):
        return y0 + size - min(max(v, 0.0), 1.0) * size

    for v in (0.0, 0.25, 0.5, 0.75, 1.0):
        parts.append(
            f'<line x1="{_f(x0)}" y1="{_f(cy(v))}" x2="{_f(x0 + size)}" y2="{_f(cy(v))}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_f(x0 - 6)}" y="{_f(cy(v) + 3)}" {_FONT} font-size="10" '
            f'text-anchor="end">{v:g}</text>'
        )
    ordered = sorted(rows, key=lambda r: r["w1"])
    w1_star = next(
        (r["w1_star_pred"] for r in ordered if r.get("w1_star_pred") is not None), None
    )
    if w1_star is not None:
        parts.append(
            f'<line x1="{_f(cx(w1_star))}" y1="{_f(y0)}" x2="{_f(cx(w1_star))}" '
            f'y2="{_f(y0 + size)}" stroke="#cc3333" stroke-width="1.5" '
            'stroke-dasharray="6,4"/>'
        )
        parts.append(
            f'<text x="{_f(cx(w1_star) + 4)}" y="{_f(y0 + 14)}" {_FONT} font-size="11" '
            f'fill="#cc3333">w1* = {w1_star:.3f}</text>'
        )
    for r in ordered:
        std = r.get("detect_std", 0.0) or 0.0
        if std > 0:
            parts.append(
                f'<line x1="{_f(cx(r["w1"]))}" y1="{_f(cy(r["detect_mean"] - std))}" '
                f'x2="{_f(cx(r["w1"]))}" y2="{_f(cy(r["detect_mean"] + std))}" '
                'stroke="#888888" stroke-width="1"/>'
            )
    points = " ".join(f"{_f(cx(r['w1']))},{_f(cy(r['detect_mean']))}" for r in ordered)
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="#2166ac" stroke-width="2"/>'
    )
    for r in ordered:
        parts.append(
            f'<circle cx="{_f(cx(r["w1"]))}" cy="{_f(cy(r["detect_mean"]))}" r="3" '
            'fill="#2166ac"/>'
        )
    for w in (0.0, 0.5, 1.0):
        parts.append(
            f'<text x="{_f(cx(w))}" y="{_f(y0 + size + 16)}" {_FONT} font-size="10" '
            f'text-anchor="middle">{w:g}</text>'
        )
    parts.append(
        f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(size)}" height="{_f(size)}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{_f(x0 + size / 2)}" y="{_f(y0 + size + 32)}" {_FONT} font-size="12" '
        'text-anchor="middle">w1</text>'
    )
    parts.append(
        f'<text x="{_f(x0 - 36)}" y="{_f(y0 + size / 2)}" {_FONT} font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 {_f(x0 - 36)} {_f(y0 + size / 2)})">'
        "detectability</text>"
    )
    text = _svg(width, height, parts)
    Path(path).write_text(text, encoding="utf-8")
    return text
