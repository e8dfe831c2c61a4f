"""CSV and SVG writers for sweep results."""

from __future__ import annotations

import io
import math
from typing import Sequence

from .spectra import SpectrumTable

CSV_HEADER = ("x", "T", "G", "re_tau", "im_tau", "re_r", "im_r", "singular")


def fmt(v: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return "%.17g" % v


def table_to_csv(table: SpectrumTable) -> str:
    buf = io.StringIO()
    header = CSV_HEADER + (("discrepancy",) if table.discrepancy is not None else ())
    buf.write(",".join(header) + "\n")
    for row in table.rows():
        cells = [fmt(v) for v in row[:7]] + ["1" if row[7] else "0"]
        if len(row) > 8:
            cells.append(fmt(row[8]))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def columns_to_csv(names: Sequence[str], columns: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in zip(*columns):
        buf.write(",".join(fmt(float(v)) for v in row) + "\n")
    return buf.getvalue()


_COLORS = ("#1f4fd1", "#d12b1f", "#222222", "#2a9d3a", "#9b30c9")
_DASHES = ("", "8,4", "2,3,8,3", "4,4", "1,3")


def line_chart_svg(x: Sequence[float], series: Sequence[tuple[str, Sequence[float]]],
                   title: str = "", xlabel: str = "x", ylabel: str = "G (2e²/h)",
                   width: int = 640, height: int = 420) -> str:
    """Minimal self-contained SVG 1.1 line chart.  Non-finite points break the line."""
    ml, mr, mt, mb = 70, 20, 40, 55
    pw, ph = width - ml - mr, height - mt - mb
    xs = [float(v) for v in x]
    ys_all = [float(v) for _, ys in series for v in ys if math.isfinite(float(v))]
    x0, x1 = min(xs), max(xs)
    y0, y1 = (min(ys_all), max(ys_all)) if ys_all else (0.0, 1.0)
    y0 = min(y0, 0.0)
    if y1 - y0 <= 0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y1 += pad

    def px(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def py(v):
        return mt + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{px(xv):.2f}" y="{mt + ph + 18}" font-size="11" '
                   f'text-anchor="middle">{xv:.3g}</text>')
        out.append(f'<text x="{ml - 6}" y="{py(yv) + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{yv:.3g}</text>')
    out.append(f'<text x="{ml + pw / 2:.2f}" y="{height - 12}" font-size="13" '
               f'text-anchor="middle">{_esc(xlabel)}</text>')
    out.append(f'<text x="16" y="{mt + ph / 2:.2f}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 16 {mt + ph / 2:.2f})">{_esc(ylabel)}</text>')
    if title:
        out.append(f'<text x="{ml + pw / 2:.2f}" y="24" font-size="14" '
                   f'text-anchor="middle">{_esc(title)}</text>')
    for n, (label, ys) in enumerate(series):
        color, dash = _COLORS[n % len(_COLORS)], _DASHES[n % len(_DASHES)]
        style = f'fill="none" stroke="{color}" stroke-width="1.5"'
        if dash:
            style += f' stroke-dasharray="{dash}"'
        segment = []
        for xv, yv in zip(xs, ys):
            yv = float(yv)
            if math.isfinite(yv):
                segment.append(f"{px(xv):.2f},{py(yv):.2f}")
            elif segment:
                out.append(f'<polyline {style} points="{" ".join(segment)}"/>')
                segment = []
        if segment:
            out.append(f'<polyline {style} points="{" ".join(segment)}"/>')
        ly = mt + 16 + 16 * n
        out.append(f'<line x1="{ml + pw - 120}" y1="{ly - 4}" x2="{ml + pw - 95}" y2="{ly - 4}" {style}/>')
        out.append(f'<text x="{ml + pw - 90}" y="{ly}" font-size="11">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
