"""File formats: generator set files, CSV/JSON reports and a minimal SVG line chart."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np


def read_set_file(path) -> list[int]:
    """One decimal generator per line; ``#`` starts a comment."""
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            out.append(int(text))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not an integer: {text!r}") from None
    return out


def write_set_file(path, generators, comment: str | None = None):
    lines = [f"# {comment}"] if comment else []
    lines += [str(int(a)) for a in generators]
    Path(path).write_text("\n".join(lines) + "\n")


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator, "float": float(obj)}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_json(payload) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def svg_line_chart(xs, ys, *, title: str = "", width: int = 640, height: int = 400,
                   x_label: str = "log10 x", y_label: str = "|value|") -> str:
    """Polyline of (log10 x, y) with plain axes and min/max tick labels."""
    lx = [math.log10(x) for x in xs]
    ys = [float(y) for y in ys]
    left, right, top, bottom = 60, 20, 30, 40
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = min(lx), max(lx)
    y0, y1 = 0.0, max(ys + [0.0])
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y1 = y0 + 1.0

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(lx, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
        f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle" font-size="12">'
        f"{escape(x_label)}</text>",
        f'<text x="14" y="{top + ph / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {top + ph / 2})">{escape(y_label)}</text>',
        f'<text x="{left}" y="{top + ph + 16}" font-size="10" text-anchor="middle">{x0:g}</text>',
        f'<text x="{left + pw}" y="{top + ph + 16}" font-size="10" text-anchor="middle">{x1:g}</text>',
        f'<text x="{left - 4}" y="{top + ph}" font-size="10" text-anchor="end">{y0:g}</text>',
        f'<text x="{left - 4}" y="{top + 4}" font-size="10" text-anchor="end">{y1:.3g}</text>',
        f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="2"/>',
    ]
    parts += [f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="3" fill="steelblue"/>'
              for a, b in zip(lx, ys)]
    if title:
        parts.append(f'<text x="{width / 2}" y="18" text-anchor="middle" font-size="14">'
                     f"{escape(title)}</text>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
