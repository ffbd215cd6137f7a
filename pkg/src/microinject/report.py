"""Trace and metrics emission: CSV, JSON and self-contained SVG charts.

All numeric output uses 17 significant digits so values round-trip through
text exactly; identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Dict, Iterable, List, Sequence, Tuple

from .sim import RunMetrics, TraceRow

TRACE_HEADER = "t,x,y,xdot,ydot,xd,yd,fex,fey,taux,tauy,taux_oracle,tauy_oracle"
FREE_RESPONSE_HEADER = "t,x_closed,y_closed,x_rk4,y_rk4,err_x,err_y"


def fmt(value: float) -> str:
    """Round-trippable decimal rendering of a float."""
    return "%.17g" % value


def write_csv(path: str, header: str, rows: Iterable[Sequence[float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def trace_row_values(row: TraceRow) -> Tuple[float, ...]:
    return (
        row.t, row.x, row.y, row.xdot, row.ydot, row.xd, row.yd,
        row.fex, row.fey, row.taux, row.tauy, row.taux_oracle, row.tauy_oracle,
    )


def write_trace_csv(path: str, rows: Sequence[TraceRow]) -> None:
    write_csv(path, TRACE_HEADER, (trace_row_values(r) for r in rows))


def metrics_to_dict(metrics: RunMetrics) -> Dict[str, object]:
    return {
        "rms_tracking_error": [
            metrics.rms_tracking_error.a0,
            metrics.rms_tracking_error.a1,
        ],
        "max_impedance_residual": metrics.max_impedance_residual,
        "torque_divergence_rms": metrics.torque_divergence_rms,
        "samples": metrics.samples,
        "diverged": metrics.diverged,
    }


def write_metrics_json(path: str, payload: Dict[str, object]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- SVG charts -----------------------------------------------------------

_SVG_W = 800
_SVG_H = 480
_PANEL_MARGIN = 46
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _panel_polylines(
    series: Sequence[Tuple[str, List[float], bool]],
    ts: List[float],
    x0: float, y0: float, w: float, h: float,
) -> List[str]:
    lo = min((min(v) for _, v, _ in series if v), default=0.0)
    hi = max((max(v) for _, v, _ in series if v), default=1.0)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        lo, hi = 0.0, 1.0
    if hi - lo < 1e-300:
        lo -= 0.5
        hi += 0.5
    t_lo, t_hi = ts[0], ts[-1]
    if t_hi - t_lo < 1e-300:
        t_hi = t_lo + 1.0
    parts = [
        f'<rect x="{x0:.1f}" y="{y0:.1f}" width="{w:.1f}" height="{h:.1f}" '
        'fill="none" stroke="#888" stroke-width="1"/>',
        f'<text x="{x0:.1f}" y="{y0 - 6:.1f}" font-size="11" fill="#444">'
        f"[{lo:.4g}, {hi:.4g}]</text>",
    ]
    for idx, (label, values, dashed) in enumerate(series):
        pts = []
        for t, v in zip(ts, values):
            px = x0 + (t - t_lo) / (t_hi - t_lo) * w
            py = y0 + h - (v - lo) / (hi - lo) * h
            pts.append(f"{px:.2f},{py:.2f}")
        color = _COLORS[idx % len(_COLORS)]
        dash = ' stroke-dasharray="5,3"' if dashed else ""
        parts.append(
            f'<polyline points="{" ".join(pts)}" fill="none" '
            f'stroke="{color}" stroke-width="1.2"{dash}/>'
        )
        parts.append(
            f'<text x="{x0 + w - 90:.1f}" y="{y0 + 14 + 13 * idx:.1f}" '
            f'font-size="11" fill="{color}">{label}</text>'
        )
    return parts


def write_trace_svg(path: str, rows: Sequence[TraceRow], title: str) -> None:
    """Two stacked panels (positions, torques) at a fixed 800x480 viewport."""
    finite = [r for r in rows if r.is_finite()]
    if not finite:
        finite = rows[:1]
    stride = max(1, len(finite) // 800)
    sampled = list(finite[::stride])
    if sampled[-1] is not finite[-1]:
        sampled.append(finite[-1])
    ts = [r.t for r in sampled]

    panel_w = _SVG_W - 2 * _PANEL_MARGIN
    panel_h = (_SVG_H - 3 * _PANEL_MARGIN) / 2
    top = _panel_polylines(
        [
            ("x", [r.x for r in sampled], False),
            ("y", [r.y for r in sampled], False),
            ("xd", [r.xd for r in sampled], True),
            ("yd", [r.yd for r in sampled], True),
        ],
        ts, _PANEL_MARGIN, _PANEL_MARGIN, panel_w, panel_h,
    )
    bottom = _panel_polylines(
        [
            ("taux", [r.taux for r in sampled], False),
            ("tauy", [r.tauy for r in sampled], False),
            ("taux_oracle", [r.taux_oracle for r in sampled], True),
            ("tauy_oracle", [r.tauy_oracle for r in sampled], True),
        ],
        ts, _PANEL_MARGIN, 2 * _PANEL_MARGIN + panel_h, panel_w, panel_h,
    )
    body = "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" '
            f'height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
            f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
            f'<text x="{_PANEL_MARGIN}" y="24" font-size="14" fill="#000">'
            f"{title}</text>",
        ]
        + top
        + bottom
        + ["</svg>"]
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(body + "\n")
