"""Result tables and their CSV / SVG renderings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row!r} does not have {len(self.columns)} columns")

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    if hasattr(v, "dtype"):
        return format_value(v.item())
    return str(v)


def render_csv(table: ResultTable) -> str:
    lines = [f"# {k}={v}" for k, v in table.metadata]
    lines.append(",".join(table.columns))
    lines.extend(",".join(format_value(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def emit_csv(table: ResultTable, path) -> None:
    Path(path).write_text(render_csv(table), encoding="utf-8")


def read_metadata(path) -> list[tuple[str, str]]:
    """The ``# key=value`` lines at the top of a CSV written by :func:`emit_csv`."""
    meta = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition("=")
        meta.append((key, value))
    return meta


_Y_COLUMNS = ("probability", "edge_probability", "T", "simulated")


def _is_number(v) -> bool:
    try:
        return math.isfinite(float(v))
    except (TypeError, ValueError):
        return False


def emit_svg_histogram(table: ResultTable, path, x: str | None = None, y: str | None = None) -> None:
    """Bar chart of ``y`` against ``x`` as a standalone SVG file."""
    if y is None:
        y = next((c for c in _Y_COLUMNS if c in table.columns), None)
    if x is None:
        x = "label" if "label" in table.columns and all(map(_is_number, table.column("label"))) else "index"
        if x not in table.columns:
            x = table.columns[0]
    if y is None or y not in table.columns or x not in table.columns:
        raise ValueError(f"table has no plottable ({x}, {y}) columns")
    xs = [float(v) for v in table.column(x)]
    ys = [float(v) for v in table.column(y)]

    width, height, pad = 800, 400, 50
    plot_w, plot_h = width - 2 * pad, height - 2 * pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if xs:
        x0, x1 = min(xs), max(xs)
        span = (x1 - x0) or 1.0
        ymax = max(ys) or 1.0
        bar_w = max(plot_w / max(len(xs), 1), 1.0)
        for xv, yv in zip(xs, ys):
            px = pad + (xv - x0) / span * (plot_w - bar_w) if len(xs) > 1 else pad
            h = yv / ymax * plot_h
            parts.append(
                f'<rect x="{px:.2f}" y="{pad + plot_h - h:.2f}" width="{bar_w:.2f}" '
                f'height="{h:.2f}" fill="steelblue"/>'
            )
        parts.append(f'<text x="{pad}" y="{height - 15}" font-size="12">{escape(f"{x0:g}")}</text>')
        parts.append(
            f'<text x="{width - pad}" y="{height - 15}" font-size="12" text-anchor="end">{escape(f"{x1:g}")}</text>'
        )
        parts.append(f'<text x="5" y="{pad}" font-size="12">{escape(f"{ymax:.3g}")}</text>')
    parts += [
        f'<line x1="{pad}" y1="{pad + plot_h}" x2="{pad + plot_w}" y2="{pad + plot_h}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{pad + plot_h}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 5}" font-size="14" text-anchor="middle">{escape(x)}</text>',
        f'<text x="15" y="{height / 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 15 {height / 2})">{escape(y)}</text>',
        "</svg>",
    ]
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
