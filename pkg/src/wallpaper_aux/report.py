"""Byte-stable rendering of study tables: markdown, CSV and an SVG bar chart."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from xml.sax.saxutils import escape

from .study import AggregateReport, Frequency, format_value

FORMATS = ("markdown", "csv", "svg")
FILENAMES = {"markdown": "report.md", "csv": "report.csv", "svg": "frequency.svg"}


def render_markdown(tables: dict[str, dict[str, AggregateReport]], freq: Frequency) -> str:
    out = ["# Symmetry and Poisson's ratio", ""]
    for ds_name, reports in tables.items():
        out += [f"## Dataset: {ds_name}", ""]
        for rep in reports.values():
            out += [f"### {rep.title}", ""]
            if not rep.buckets:
                out += ["(no records)", ""]
                continue
            out += ["| bucket | n | values | mean |", "|---|---|---|---|"]
            for b in rep.buckets:
                vals = ", ".join(format_value(v, rep.decimals) for v in b.exact_values)
                out.append(f"| {b.label} | {b.n} | {vals} | {format_value(b.exact_mean, rep.decimals)} |")
            out.append("")
    out += ["## Group frequency", "", "| group | count |", "|---|---|"]
    out += [f"| {g.value} | {c} |" for g, c in freq.nonzero()]
    out += ["", "| highest rotation | count |", "|---|---|"]
    out += [f"| {cat.value} | {c} |" for cat, c in freq.by_category.items()]
    return "\n".join(out) + "\n"


def render_csv(tables: dict[str, dict[str, AggregateReport]], freq: Frequency) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dataset", "table", "bucket", "n", "values", "mean"])
    for ds_name, reports in tables.items():
        for rep in reports.values():
            for b in rep.buckets:
                vals = ";".join(format_value(v, rep.decimals) for v in b.exact_values)
                w.writerow([ds_name, rep.name, b.label, b.n, vals,
                            format_value(b.exact_mean, rep.decimals)])
    for g, c in freq.nonzero():
        w.writerow(["all", "frequency", g.value, c, "", ""])
    return buf.getvalue()


def render_svg(freq: Frequency, bar: int = 40, gap: int = 12, height: int = 240) -> str:
    items = freq.nonzero()
    top = max((c for _, c in items), default=1)
    margin = 30
    width = margin * 2 + len(items) * (bar + gap)
    plot = height - 2 * margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
    ]
    for k, (g, c) in enumerate(items):
        h = round(plot * c / top, 2)
        x = margin + gap // 2 + k * (bar + gap)
        y = round(height - margin - h, 2)
        label = escape(g.value)
        parts.append(
            f'<rect class="bar" data-group="{label}" data-count="{c}" x="{x}" y="{y}" '
            f'width="{bar}" height="{h}" fill="#4a78b5"/>'
        )
        cx = x + bar / 2
        parts.append(f'<text x="{cx}" y="{y - 4}" font-size="11" text-anchor="middle">{c}</text>')
        parts.append(f'<text x="{cx}" y="{height - margin + 14}" font-size="11" '
                     f'text-anchor="middle">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(tables, freq: Frequency, out_dir, formats=FORMATS) -> list[Path]:
    """Write the requested formats under ``out_dir``; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "markdown":
            text = render_markdown(tables, freq)
        elif fmt == "csv":
            text = render_csv(tables, freq)
        elif fmt == "svg":
            text = render_svg(freq)
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        path = out / FILENAMES[fmt]
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)
    return written
