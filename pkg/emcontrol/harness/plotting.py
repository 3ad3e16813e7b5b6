"""Dependency-free SVG line plots of binned learning curves"""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from emcontrol.core.exceptions import UsageError


PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")

WIDTH = 720
HEIGHT = 440
MARGIN_LEFT = 70
MARGIN_RIGHT = 170
MARGIN_TOP = 40
MARGIN_BOTTOM = 55
TICKS = 5


def _nice_ticks(low: float, high: float, count: int = TICKS) -> np.ndarray:
    if high == low:
        low, high = low - 1.0, high + 1.0
    raw = (high - low) / count
    magnitude = 10 ** np.floor(np.log10(raw))
    step = min((m * magnitude for m in (1, 2, 2.5, 5, 10) if m * magnitude >= raw), default=raw)
    return np.arange(np.floor(low / step) * step, high + step * 0.5, step)


def _fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


class SvgPlot:
    """Accumulates SVG elements for one line chart"""

    def __init__(self, x_range: tuple[float, float], y_ticks: np.ndarray):
        self.x_low, self.x_high = x_range
        if self.x_high == self.x_low:
            self.x_high = self.x_low + 1.0
        self.y_ticks = y_ticks
        self.y_low, self.y_high = float(y_ticks[0]), float(y_ticks[-1])
        self.parts: list[str] = []

    def x(self, value: float) -> float:
        span = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        return MARGIN_LEFT + (value - self.x_low) / (self.x_high - self.x_low) * span

    def y(self, value: float) -> float:
        span = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        return HEIGHT - MARGIN_BOTTOM - (value - self.y_low) / (self.y_high - self.y_low) * span

    def add(self, element: str) -> None:
        self.parts.append(element)

    def axes(self, x_label: str, y_label: str, title: str | None) -> None:
        left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        for tick in self.y_ticks:
            y = self.y(tick)
            stroke = "#999999" if abs(tick) < 1e-9 * (self.y_high - self.y_low) else "#e0e0e0"
            self.add(f'<line x1="{left}" y1="{y:.2f}" x2="{right}" y2="{y:.2f}" stroke="{stroke}" stroke-width="1"/>')
            self.add(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="11">{_fmt(tick)}</text>')
        for tick in _nice_ticks(self.x_low, self.x_high):
            if not self.x_low <= tick <= self.x_high:
                continue
            x = self.x(tick)
            self.add(
                f'<text x="{x:.2f}" y="{HEIGHT - MARGIN_BOTTOM + 18}" text-anchor="middle" font-size="11">'
                f"{_fmt(tick)}</text>"
            )
        bottom = HEIGHT - MARGIN_BOTTOM
        self.add(f'<rect x="{left}" y="{MARGIN_TOP}" width="{right - left}" height="{bottom - MARGIN_TOP}" '
                 'fill="none" stroke="#333333" stroke-width="1"/>')
        self.add(f'<text x="{(left + right) / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle" font-size="13">'
                 f"{escape(x_label)}</text>")
        self.add(f'<text x="18" y="{(MARGIN_TOP + bottom) / 2:.2f}" text-anchor="middle" font-size="13" '
                 f'transform="rotate(-90 18 {(MARGIN_TOP + bottom) / 2:.2f})">{escape(y_label)}</text>')
        if title:
            self.add(f'<text x="{(left + right) / 2:.2f}" y="24" text-anchor="middle" font-size="15">'
                     f"{escape(title)}</text>")

    def series(self, index: int, label: str, xs: np.ndarray, ys: np.ndarray) -> None:
        color = PALETTE[index % len(PALETTE)]
        points = " ".join(f"{self.x(x):.2f},{self.y(y):.2f}" for x, y in zip(xs, ys))
        self.add(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{points}"/>')
        legend_x = WIDTH - MARGIN_RIGHT + 15
        legend_y = MARGIN_TOP + 10 + 20 * index
        self.add(f'<line x1="{legend_x}" y1="{legend_y}" x2="{legend_x + 20}" y2="{legend_y}" '
                 f'stroke="{color}" stroke-width="2"/>')
        self.add(f'<text x="{legend_x + 26}" y="{legend_y + 4}" font-size="12">{escape(label)}</text>')

    def render(self) -> str:
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
        )
        return header + "\n".join(self.parts) + "\n</svg>\n"


def render_svg(
    curves: dict[str, tuple[np.ndarray, np.ndarray]],
    x_label: str = "Episode",
    y_label: str = "Total reward per episode",
    title: str | None = None,
) -> str:
    """
    SVG text for named (x, y) series, drawn in insertion order.

    Output depends only on the data and labels, so identical inputs give
    identical bytes.
    """
    if not curves:
        raise UsageError("Need at least one series to plot")
    for label, (xs, ys) in curves.items():
        if len(xs) == 0 or len(xs) != len(ys):
            raise UsageError(f"Series {label!r} is empty or has mismatched x/y lengths")

    all_x = np.concatenate([np.asarray(xs, dtype=float) for xs, _ in curves.values()])
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, ys in curves.values()])
    y_ticks = _nice_ticks(min(float(all_y.min()), 0.0), max(float(all_y.max()), 0.0))

    plot = SvgPlot((float(all_x.min()), float(all_x.max())), y_ticks)
    plot.axes(x_label, y_label, title)
    for index, (label, (xs, ys)) in enumerate(curves.items()):
        plot.series(index, label, np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    return plot.render()


def plot_svg(
    curves: dict[str, tuple[np.ndarray, np.ndarray]],
    path: str | Path,
    x_label: str = "Episode",
    y_label: str = "Total reward per episode",
    title: str | None = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(curves, x_label, y_label, title), encoding="utf-8")
    return path
