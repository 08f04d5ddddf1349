"""Minimal deterministic SVG plotting (no plotting stack, byte-stable output)."""
from __future__ import annotations

import math

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 64, 16, 28, 44
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, log: bool):
    if log:
        lo_e = math.floor(math.log10(lo))
        hi_e = math.ceil(math.log10(hi))
        return [10.0**e for e in range(lo_e, hi_e + 1)]
    span = hi - lo
    if span <= 0:
        return [lo]
    step = 10.0 ** math.floor(math.log10(span / 4))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= 6:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(t)
        t += step
    return out


class _Axis:
    def __init__(self, lo, hi, pix_lo, pix_hi, log):
        if log:
            lo = max(lo, 1e-300)
            hi = max(hi, lo * 10)
        if hi <= lo:
            hi = lo + 1.0
        self.lo, self.hi, self.log = lo, hi, log
        self.pix_lo, self.pix_hi = pix_lo, pix_hi

    def to_pix(self, v):
        if self.log:
            v = max(v, self.lo)
            f = (math.log10(v) - math.log10(self.lo)) / (math.log10(self.hi) - math.log10(self.lo))
        else:
            f = (v - self.lo) / (self.hi - self.lo)
        return self.pix_lo + f * (self.pix_hi - self.pix_lo)


def line_plot(path, series, *, title="", xlabel="", ylabel="", logx=False, logy=False):
    """Write a polyline plot.  `series` is a list of (label, xs, ys)."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys if not (logy and y <= 0)]
    if not xs_all or not ys_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    ax = _Axis(min(xs_all), max(xs_all), _ML, _W - _MR, logx)
    ay = _Axis(min(ys_all), max(ys_all), _H - _MB, _MT, logy)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="monospace" font-size="11">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="16" text-anchor="middle" font-size="13">{title}</text>',
    ]
    for t in _ticks(ax.lo, ax.hi, logx):
        px = ax.to_pix(t)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{_H - _MB}" x2="{_fmt(px)}" y2="{_MT}" '
            f'stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{_H - _MB + 16}" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in _ticks(ay.lo, ay.hi, logy):
        py = ay.to_pix(t)
        parts.append(
            f'<line x1="{_ML}" y1="{_fmt(py)}" x2="{_W - _MR}" y2="{_fmt(py)}" '
            f'stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{_ML - 6}" y="{_fmt(py + 4)}" text-anchor="end">{_fmt(t)}</text>'
        )
    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        f'fill="none" stroke="black"/>'
    )
    parts.append(
        f'<text x="{_W // 2}" y="{_H - 8}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{_H // 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {_H // 2})">{ylabel}</text>'
    )
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(
            f"{_fmt(ax.to_pix(x))},{_fmt(ay.to_pix(y))}"
            for x, y in zip(xs, ys)
            if not (logy and y <= 0)
        )
        if pts:
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        ly = _MT + 16 + 16 * i
        parts.append(
            f'<line x1="{_W - _MR - 150}" y1="{ly - 4}" x2="{_W - _MR - 126}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{_W - _MR - 120}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def heatmap(path, xs, ts, values, *, title="", xlabel="", ylabel=""):
    """Write a simple rectangle heatmap for a regular grid of values."""
    nx, nt = len(xs), len(ts)
    vmin = min(values)
    vmax = max(values)
    span = vmax - vmin or 1.0
    ax = _Axis(min(xs), max(xs), _ML, _W - _MR, False)
    ay = _Axis(min(ts), max(ts), _H - _MB, _MT, False)
    cw = (_W - _ML - _MR) / nx
    ch = (_H - _MT - _MB) / nt
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="monospace" font-size="11">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="16" text-anchor="middle" font-size="13">{title}</text>',
    ]
    idx = 0
    for j, t in enumerate(ts):
        for i, x in enumerate(xs):
            f = (values[idx] - vmin) / span
            r = int(255 * f)
            b = int(255 * (1 - f))
            px = ax.to_pix(x) - cw / 2
            py = ay.to_pix(t) - ch / 2
            parts.append(
                f'<rect x="{_fmt(px)}" y="{_fmt(py)}" width="{_fmt(cw + 0.5)}" '
                f'height="{_fmt(ch + 0.5)}" fill="rgb({r},40,{b})"/>'
            )
            idx += 1
    parts.append(
        f'<text x="{_W // 2}" y="{_H - 8}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{_H // 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {_H // 2})">{ylabel}</text>'
    )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
