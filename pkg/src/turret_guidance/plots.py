"""Static SVG plots of engagement logs, written without external tooling.

Three figures mirror the usual presentation of such engagements: the XY
trajectory with line-of-sight and turret-pointing rays, the two command
histories, and the normalized range / orientation errors against their
capture bounds.
"""

from __future__ import annotations

import math

from .linearize import wrap_angle
from .sim import TrajectoryLog

__all__ = [
    "write_trajectory_svg",
    "write_command_svg",
    "write_error_svg",
]

_WIDTH = 720
_HEIGHT = 540
_MARGIN = 50
_RAY_COUNT = 24


class _Frame:
    """Maps data coordinates into an SVG pixel box (y axis flipped)."""

    def __init__(self, x_min, x_max, y_min, y_max, width=_WIDTH,
                 height=_HEIGHT, margin=_MARGIN):
        pad_x = 0.05 * (x_max - x_min) or 1.0
        pad_y = 0.05 * (y_max - y_min) or 1.0
        self.x_min, self.x_max = x_min - pad_x, x_max + pad_x
        self.y_min, self.y_max = y_min - pad_y, y_max + pad_y
        self.width, self.height, self.margin = width, height, margin

    def x(self, value):
        span = self.x_max - self.x_min
        return self.margin + (value - self.x_min) / span * (self.width - 2 * self.margin)

    def y(self, value):
        span = self.y_max - self.y_min
        return self.height - self.margin - (value - self.y_min) / span * (self.height - 2 * self.margin)

    def point(self, x, y):
        return f"{self.x(x):.2f},{self.y(y):.2f}"


def _polyline(frame, xs, ys, color, width=1.5, dash=None):
    points = " ".join(frame.point(x, y) for x, y in zip(xs, ys))
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<polyline fill="none" stroke="{color}" stroke-width="{width}"'
            f'{dash_attr} points="{points}"/>')


def _line(frame, x0, y0, x1, y1, color, width=1.0, dash=None):
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<line x1="{frame.x(x0):.2f}" y1="{frame.y(y0):.2f}" '
            f'x2="{frame.x(x1):.2f}" y2="{frame.y(y1):.2f}" '
            f'stroke="{color}" stroke-width="{width}"{dash_attr}/>')


def _text(x, y, content, size=13, color="#333"):
    return f'<text x="{x}" y="{y}" font-size="{size}" fill="{color}" font-family="sans-serif">{content}</text>'


def _document(elements, title):
    body = "\n".join(elements)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
            f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">\n'
            f'<rect width="100%" height="100%" fill="white"/>\n'
            f'{_text(_MARGIN, 24, title, size=15)}\n{body}\n</svg>\n')


def _axes(frame, x_label, y_label):
    elems = [
        _line(frame, frame.x_min, frame.y_min, frame.x_max, frame.y_min, "#888"),
        _line(frame, frame.x_min, frame.y_min, frame.x_min, frame.y_max, "#888"),
        _text(_WIDTH // 2, _HEIGHT - 12, x_label),
        _text(8, 40, y_label),
        _text(frame.x(frame.x_min), _HEIGHT - _MARGIN + 18, f"{frame.x_min:.4g}", 11),
        _text(frame.x(frame.x_max) - 30, _HEIGHT - _MARGIN + 18, f"{frame.x_max:.4g}", 11),
        _text(4, frame.y(frame.y_min), f"{frame.y_min:.4g}", 11),
        _text(4, frame.y(frame.y_max) + 10, f"{frame.y_max:.4g}", 11),
    ]
    return elems


def _ray_indices(count):
    if count <= _RAY_COUNT:
        return range(count)
    stride = max(1, count // _RAY_COUNT)
    return range(0, count, stride)


def write_trajectory_svg(log: TrajectoryLog, r_max: float, fov: float, path):
    """XY trajectories with LOS rays and turret-pointing rays of length R."""
    x_p, y_p = log.column("x_p"), log.column("y_p")
    x_t, y_t = log.column("x_t"), log.column("y_t")
    psi = log.column("psi")
    xs_all = list(x_p) + list(x_t)
    ys_all = list(y_p) + list(y_t)
    frame = _Frame(min(xs_all), max(xs_all), min(ys_all), max(ys_all))
    elems = _axes(frame, "x [m]", "y [m]")
    for i in _ray_indices(len(log)):
        elems.append(_line(frame, x_p[i], y_p[i], x_t[i], y_t[i],
                           "#2ca02c", 0.6))
        elems.append(_line(frame, x_p[i], y_p[i],
                           x_p[i] + r_max * math.cos(psi[i]),
                           y_p[i] + r_max * math.sin(psi[i]),
                           "#d62728", 0.6))
    last = len(log) - 1
    for side in (-1.0, 1.0):
        angle = psi[last] + side * fov
        elems.append(_line(frame, x_p[last], y_p[last],
                           x_p[last] + r_max * math.cos(angle),
                           y_p[last] + r_max * math.sin(angle),
                           "#1f77b4", 1.2, dash="6,4"))
    elems.append(_polyline(frame, x_p, y_p, "#1f77b4", 2.0))
    elems.append(_polyline(frame, x_t, y_t, "#000000", 2.0))
    elems.append(f'<circle cx="{frame.x(x_p[0]):.2f}" cy="{frame.y(y_p[0]):.2f}" '
                 f'r="5" fill="#1f77b4"/>')
    elems.append(f'<rect x="{frame.x(x_t[0]) - 5:.2f}" y="{frame.y(y_t[0]) - 5:.2f}" '
                 f'width="10" height="10" fill="#000000"/>')
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(_document(elems, "Engagement trajectory"))


def _series_panel(t, series, labels, colors, title, path, hlines=()):
    frame = _Frame(float(t[0]), float(t[-1]),
                   min(min(s) for s in series), max(max(s) for s in series))
    elems = _axes(frame, "t [s]", "")
    for level in hlines:
        elems.append(_line(frame, frame.x_min, level, frame.x_max, level,
                           "#1f77b4", 1.0, dash="6,4"))
    for values, label, color, offset in zip(series, labels, colors,
                                            range(len(series))):
        elems.append(_polyline(frame, t, values, color, 1.6))
        elems.append(_text(_WIDTH - 190, 40 + 16 * offset, label, 12, color))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(_document(elems, title))


def write_command_svg(log: TrajectoryLog, path):
    """Realized lateral acceleration and turret torque over time."""
    t = log.column("t")
    _series_panel(t, [log.column("a_p"), log.column("u1")],
                  ["a_p realized", "u1 commanded"],
                  ["#1f77b4", "#888888"],
                  "Pursuer acceleration [m/s^2]",
                  str(path).replace(".svg", "_accel.svg"))
    _series_panel(t, [log.column("tau"), log.column("u2")],
                  ["tau realized", "u2 commanded"],
                  ["#d62728", "#888888"],
                  "Turret torque [rad/s^2]",
                  str(path).replace(".svg", "_torque.svg"))


def write_error_svg(log: TrajectoryLog, r_max: float, fov: float, path):
    """Normalized range and orientation histories with the capture bounds."""
    t = log.column("t")
    norm_range = log.column("r") / r_max
    gamma = log.column("gamma")
    psi = log.column("psi")
    norm_orient = [wrap_angle(g - p) / fov for g, p in zip(gamma, psi)]
    _series_panel(t, [list(norm_range), norm_orient],
                  ["r / R", "(gamma - psi) / fov"],
                  ["#2ca02c", "#d62728"],
                  "Normalized capture errors", path,
                  hlines=(-1.0, 1.0))
