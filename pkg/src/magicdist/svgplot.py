"""Minimal self-contained SVG line/step plots.

No external assets, no timestamps: byte content depends only on the data
and labels.  The raw data table is embedded in a <metadata> element so a
plot file remains machine-readable.
"""
from __future__ import annotations

import math

WIDTH, HEIGHT = 760, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 28, 44


def _fmt(v: float) -> str:
    return format(float(v), ".6g")


def _nice_ticks(lo: float, hi: float, target: int = 6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


class _Frame:
    def __init__(self, xlim, ylim, log_y):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        self.log_y = log_y
        if log_y:
            self.y0 = math.log10(max(self.y0, 1e-12))
            self.y1 = math.log10(max(self.y1, 1e-12))

    def px(self, x):
        w = WIDTH - MARGIN_L - MARGIN_R
        return MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * w

    def py(self, y):
        if self.log_y:
            y = math.log10(max(y, 10.0**self.y0))
        h = HEIGHT - MARGIN_T - MARGIN_B
        return HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * h


def _axes(frame: _Frame, xlabel: str, ylabel: str, title: str) -> list[str]:
    parts = [
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{WIDTH - MARGIN_L - MARGIN_R}" '
        f'height="{HEIGHT - MARGIN_T - MARGIN_B}" fill="none" stroke="#404040"/>'
    ]
    for t in _nice_ticks(frame.x0, frame.x1):
        x = frame.px(t)
        parts.append(
            f'<line x1="{x:.2f}" y1="{HEIGHT - MARGIN_B}" x2="{x:.2f}" '
            f'y2="{HEIGHT - MARGIN_B + 5}" stroke="#404040"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{HEIGHT - MARGIN_B + 18}" font-size="11" '
            f'text-anchor="middle">{_fmt(t)}</text>'
        )
    y_ticks = _nice_ticks(frame.y0, frame.y1)
    for t in y_ticks:
        label = 10.0**t if frame.log_y else t
        y = HEIGHT - MARGIN_B - (t - frame.y0) / (frame.y1 - frame.y0) * (
            HEIGHT - MARGIN_T - MARGIN_B
        )
        parts.append(
            f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" '
            f'stroke="#404040"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" font-size="11" '
            f'text-anchor="end">{_fmt(label)}</text>'
        )
    parts.append(
        f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) / 2}" y="{HEIGHT - 10}" font-size="12" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{(MARGIN_T + HEIGHT - MARGIN_B) / 2}" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 14 '
        f'{(MARGIN_T + HEIGHT - MARGIN_B) / 2})">{ylabel}</text>'
    )
    parts.append(
        f'<text x="{WIDTH / 2}" y="18" font-size="13" text-anchor="middle">{title}</text>'
    )
    return parts


def _polyline(frame: _Frame, xs, ys, color: str, dash: str = "") -> str:
    pts = " ".join(f"{frame.px(x):.2f},{frame.py(y):.2f}" for x, y in zip(xs, ys))
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{extra} points="{pts}"/>'


def plot_svg(
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "density",
    marks=(),
    log_y: bool = False,
    data_table: str = "",
) -> str:
    """Compose an SVG document from (xs, ys, color, style) series.

    ``style`` is "line" or "step" (step interprets xs as bin edges, one
    longer than ys).  Vertical dashed markers are drawn at ``marks``.
    """
    all_x, all_y = [], []
    for xs, ys, _color, style in series:
        all_x.extend([min(xs), max(xs)])
        vals = [v for v in ys if (v > 0 if log_y else True)]
        if vals:
            all_y.extend([min(vals), max(vals)])
    if not all_y:
        all_y = [0.0, 1.0]
    y_lo = min(all_y) if log_y else 0.0
    y_hi = max(all_y) * 1.06
    frame = _Frame((min(all_x), max(all_x)), (y_lo, y_hi), log_y)

    body = _axes(frame, xlabel, ylabel, title)
    for xs, ys, color, style in series:
        if style == "step":
            sx, sy = [], []
            for i, v in enumerate(ys):
                sx.extend([xs[i], xs[i + 1]])
                sy.extend([v, v])
            body.append(_polyline(frame, sx, sy, color))
        else:
            body.append(_polyline(frame, xs, ys, color))
    for m in marks:
        x = frame.px(m)
        body.append(
            f'<line x1="{x:.2f}" y1="{MARGIN_T}" x2="{x:.2f}" y2="{HEIGHT - MARGIN_B}" '
            f'stroke="#b03030" stroke-dasharray="4,3"/>'
        )
    meta = ""
    if data_table:
        # CSV payload carries no "]]>", so CDATA embeds it verbatim
        meta = f"<metadata><![CDATA[\n{data_table}]]></metadata>\n"
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">\n'
        f"{meta}" + "\n".join(body) + "\n</svg>\n"
    )
