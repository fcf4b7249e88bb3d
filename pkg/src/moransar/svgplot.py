"""Standalone SVG rendering of normalized scatterplots.

The output is an 800x600 document with axes, tick labels, one circle
per observation, up to two trend lines, and a legend stating each
line's equation. Trend lines carry machine-readable data-slope and
data-intercept attributes so tests (and downstream tools) can parse the
fitted coefficients back out of the picture. Two lines that coincide
within 1e-12 are drawn once.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from .autocorr import ScatterDataset, TrendLine
from .errors import InputError

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT = 80, 190
MARGIN_TOP, MARGIN_BOTTOM = 50, 70
PLOT_W = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
PLOT_H = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
N_TICKS = 5
COINCIDENT_TOL = 1e-12

_LINE_STYLE = [
    {"stroke": "#888888", "stroke-dasharray": "7,5"},   # theoretical
    {"stroke": "#1f6fb4", "stroke-dasharray": "none"},  # empirical
]


def _span(values) -> tuple[float, float]:
    lo = float(min(values))
    hi = float(max(values))
    if hi == lo:
        lo -= 1.0
        hi += 1.0
    pad = 0.06 * (hi - lo)
    return lo - pad, hi + pad


def _merge_lines(dataset: ScatterDataset) -> list[tuple[TrendLine, int]]:
    """Distinct lines with their style index; coincident pairs collapse."""
    lines: list[tuple[TrendLine, int]] = []
    if dataset.theoretical_line is not None:
        lines.append((dataset.theoretical_line, 0))
    emp = dataset.empirical_line
    for existing, _style in lines:
        if (
            abs(existing.slope - emp.slope) <= COINCIDENT_TOL
            and abs(existing.intercept - emp.intercept) <= COINCIDENT_TOL
        ):
            merged = TrendLine(
                slope=existing.slope,
                intercept=existing.intercept,
                label=f"{existing.label} = {emp.label}",
            )
            return [(merged, 1)]
    lines.append((emp, 1))
    return lines


def _clip_line(slope: float, intercept: float, xlo, xhi, ylo, yhi):
    """Segment of y = slope*x + intercept inside the data window, or None."""
    if slope == 0.0:
        if not (ylo <= intercept <= yhi):
            return None
        return xlo, intercept, xhi, intercept
    xa = (ylo - intercept) / slope
    xb = (yhi - intercept) / slope
    lo = max(xlo, min(xa, xb))
    hi = min(xhi, max(xa, xb))
    if lo > hi:
        return None
    return lo, slope * lo + intercept, hi, slope * hi + intercept


def render_svg(dataset: ScatterDataset, path: str | Path) -> None:
    """Write the scatterplot for one dataset as a standalone SVG file.

    Raises:
        InputError: if the dataset has no points.
        OSError: if the file cannot be written.
    """
    if dataset.n == 0:
        raise InputError("cannot render an empty dataset")

    xs = dataset.points[:, 0]
    ys = dataset.points[:, 1]
    xlo, xhi = _span(xs)
    ylo, yhi = _span(ys)

    def sx(x: float) -> float:
        return MARGIN_LEFT + (x - xlo) / (xhi - xlo) * PLOT_W

    def sy(y: float) -> float:
        return MARGIN_TOP + PLOT_H - (y - ylo) / (yhi - ylo) * PLOT_H

    root = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(WIDTH),
        height=str(HEIGHT),
        viewBox=f"0 0 {WIDTH} {HEIGHT}",
    )
    ET.SubElement(root, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT),
                  fill="white")
    ET.SubElement(
        root, "text", x=str(WIDTH / 2), y="28",
        attrib={"text-anchor": "middle", "font-size": "18", "font-family": "sans-serif"},
    ).text = f"normalized scatterplot ({dataset.mode})"

    axes = ET.SubElement(root, "g", attrib={"class": "axes", "stroke": "black",
                                            "stroke-width": "1"})
    x_axis_y = MARGIN_TOP + PLOT_H
    ET.SubElement(axes, "line", x1=str(MARGIN_LEFT), y1=str(x_axis_y),
                  x2=str(MARGIN_LEFT + PLOT_W), y2=str(x_axis_y))
    ET.SubElement(axes, "line", x1=str(MARGIN_LEFT), y1=str(MARGIN_TOP),
                  x2=str(MARGIN_LEFT), y2=str(x_axis_y))

    labels = ET.SubElement(root, "g", attrib={"class": "tick-labels",
                                              "font-size": "12",
                                              "font-family": "sans-serif"})
    for k in range(N_TICKS):
        frac = k / (N_TICKS - 1)
        xv = xlo + frac * (xhi - xlo)
        px = sx(xv)
        ET.SubElement(axes, "line", x1=str(px), y1=str(x_axis_y),
                      x2=str(px), y2=str(x_axis_y + 6))
        ET.SubElement(labels, "text", x=str(px), y=str(x_axis_y + 22),
                      attrib={"text-anchor": "middle"}).text = f"{xv:.3g}"
        yv = ylo + frac * (yhi - ylo)
        py = sy(yv)
        ET.SubElement(axes, "line", x1=str(MARGIN_LEFT - 6), y1=str(py),
                      x2=str(MARGIN_LEFT), y2=str(py))
        ET.SubElement(labels, "text", x=str(MARGIN_LEFT - 10), y=str(py + 4),
                      attrib={"text-anchor": "end"}).text = f"{yv:.3g}"

    ET.SubElement(
        labels, "text", x=str(MARGIN_LEFT + PLOT_W / 2), y=str(x_axis_y + 45),
        attrib={"text-anchor": "middle", "font-size": "14"},
    ).text = dataset.x_label
    y_label = ET.SubElement(
        labels, "text", x="22", y=str(MARGIN_TOP + PLOT_H / 2),
        attrib={
            "text-anchor": "middle",
            "font-size": "14",
            "transform": f"rotate(-90 22 {MARGIN_TOP + PLOT_H / 2})",
        },
    )
    y_label.text = dataset.y_label

    trend_group = ET.SubElement(root, "g", attrib={"class": "trend-lines",
                                                   "stroke-width": "2",
                                                   "fill": "none"})
    legend_entries = []
    for line, style_index in _merge_lines(dataset):
        style = _LINE_STYLE[style_index]
        segment = _clip_line(line.slope, line.intercept, xlo, xhi, ylo, yhi)
        legend_entries.append((line, style))
        if segment is None:
            continue
        x1, y1, x2, y2 = segment
        ET.SubElement(
            trend_group, "line",
            x1=f"{sx(x1):.3f}", y1=f"{sy(y1):.3f}",
            x2=f"{sx(x2):.3f}", y2=f"{sy(y2):.3f}",
            attrib={
                "class": "trend",
                "stroke": style["stroke"],
                "stroke-dasharray": style["stroke-dasharray"],
                "data-slope": repr(line.slope),
                "data-intercept": repr(line.intercept),
                "data-label": line.label,
            },
        )

    point_group = ET.SubElement(root, "g", attrib={"class": "points",
                                                   "fill": "#d43f3f",
                                                   "stroke": "none"})
    for x, y in dataset.points:
        ET.SubElement(point_group, "circle", cx=f"{sx(float(x)):.3f}",
                      cy=f"{sy(float(y)):.3f}", r="4",
                      attrib={"class": "point"})

    legend = ET.SubElement(root, "g", attrib={"class": "legend",
                                              "font-size": "12",
                                              "font-family": "sans-serif"})
    lx = MARGIN_LEFT + PLOT_W + 14
    ly = MARGIN_TOP + 10
    for line, style in legend_entries:
        ET.SubElement(legend, "line", x1=str(lx), y1=str(ly - 4),
                      x2=str(lx + 26), y2=str(ly - 4),
                      attrib={"stroke": style["stroke"],
                              "stroke-width": "2",
                              "stroke-dasharray": style["stroke-dasharray"]})
        ET.SubElement(legend, "text", x=str(lx), y=str(ly + 12)).text = line.label
        ET.SubElement(
            legend, "text", x=str(lx), y=str(ly + 28)
        ).text = f"y = {line.slope:.6g}x + {line.intercept:.6g}"
        ly += 52

    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="unicode", xml_declaration=True)
