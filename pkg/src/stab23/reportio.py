"""Deterministic report writers: JSON is the contract, text and SVG render it."""

from __future__ import annotations

import json
from pathlib import Path


def write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, separators=(",", ": "))
        fh.write("\n")


def write_text(path: Path, lines) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def render_chart_text(chart) -> list:
    """Plain-text chart: filtration vertical, stem horizontal."""
    cells = chart.cells()
    if not cells:
        smax = 0
    else:
        smax = max(s for (s, _) in cells)
    lo, hi = chart.stem_range
    lines = [f"group {chart.group}  page {chart.page}  stems {lo}..{hi}"]
    counts = {}
    for (s, t), classes in cells.items():
        n = t - s
        if lo <= n <= hi:
            counts[(s, n)] = sum(d for _, d in classes)
    for s in range(min(smax, 12), -1, -1):
        row = [f"s={s:>2} |"]
        for n in range(lo, hi + 1):
            if s == 0:
                r = chart.zero_line.get(n, 0)
                row.append("o" if r else ".")
            else:
                c = counts.get((s, n), 0)
                row.append(str(c) if 0 < c < 10 else ("." if c == 0 else "#"))
        lines.append(" ".join(row))
    axis = ["      |"] + [("|" if n % 10 == 0 else " ") for n in range(lo, hi + 1)]
    lines.append(" ".join(axis))
    return lines


def render_chart_svg(chart) -> str:
    cells = chart.cells()
    lo, hi = chart.stem_range
    smax = max([s for (s, _) in cells] + [4])
    w, h, pad, step = (hi - lo + 2) * 14, (min(smax, 14) + 2) * 14, 20, 14
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w + 2 * pad}" '
        f'height="{h + 2 * pad}" font-size="8">',
        f'<text x="{pad}" y="12">{chart.group} page {chart.page} '
        f"stems {lo}..{hi}</text>",
    ]
    for (s, t), classes in sorted(cells.items()):
        n = t - s
        if not (lo <= n <= hi) or s > 14:
            continue
        x = pad + (n - lo) * step
        y = pad + h - (s + 1) * step
        dim = sum(d for _, d in classes)
        parts.append(f'<circle cx="{x}" cy="{y}" r="{2 + dim}" fill="black"/>')
        parts.append(
            f'<text x="{x + 4}" y="{y - 3}">{classes[0][0]}</text>'
        )
    for n in range(lo, hi + 1):
        if chart.zero_line.get(n, 0):
            x = pad + (n - lo) * step
            y = pad + h - step
            parts.append(f'<rect x="{x - 2}" y="{y - 2}" width="4" height="4"/>')
        if n % 10 == 0:
            parts.append(
                f'<text x="{pad + (n - lo) * step}" y="{pad + h + 12}">{n}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
