"""CSV writers and a small static SVG line chart."""

import csv
import io
import math
from xml.sax.saxutils import escape

TRAJECTORY_TAIL = ("distance",)
CONDITIONS_HEADER = ("kind", "k", "alpha", "gamma", "beta", "margin", "satisfied")
STABILITY_HEADER = ("model", "mode_index", "k", "alpha", "gamma", "dom_re", "dom_im", "verdict")
FIG3_HEADER = ("beta", "condition", "gamma_star", "error")
SUMMARY_HEADER = (
    "run_id", "k", "alpha", "gamma", "n_outer", "steps_run", "initial_distance",
    "final_distance", "ratio", "overflow", "verdict", "boundary",
)


def fnum(v):
    """Locale-free shortest round-trip float text; ``None`` becomes empty."""
    return "" if v is None else repr(float(v))


def render_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def trajectory_header(half_dim, time_column=False):
    xs = [f"x{i}" for i in range(half_dim)]
    ys = [f"y{i}" for i in range(half_dim)]
    return ("run_id", "time" if time_column else "step", *xs, *ys, *TRAJECTORY_TAIL)


def trajectory_rows(run_id, record):
    for step, (z, d) in enumerate(zip(record.points, record.distances)):
        yield (str(run_id), str(step), *(fnum(v) for v in z), fnum(d))


def continuous_rows(run_id, traj):
    for t, z, d in zip(traj.times, traj.z, traj.distances):
        yield (str(run_id), fnum(t), *(fnum(v) for v in z), fnum(d))


def summary_row(res, n_outer):
    rec = res.record
    first, last = rec.initial_distance, rec.final_distance
    ratio = last / first if first > 0 else None
    return (
        str(res.run_id), str(res.k), fnum(res.alpha), fnum(res.gamma), str(n_outer),
        str(len(rec.points) - 1), fnum(first), fnum(last), fnum(ratio),
        "true" if rec.overflow else "false", res.verdict, "true" if res.boundary else "false",
    )


def condition_row(rep):
    row = rep.to_row()
    return tuple(row[h] for h in CONDITIONS_HEADER)


def pole_row(p):
    return (
        p.model, str(p.mode_index), str(p.k), fnum(p.alpha), fnum(p.gamma),
        fnum(p.dom.real), fnum(p.dom.imag), p.verdict,
    )


def fig3_row(r):
    return (fnum(r.beta), r.condition, fnum(r.gamma_star), fnum(r.error))


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def line_chart(series, title="", xlabel="", ylabel="", asinh_y=True, width=640, height=400):
    """Render ``{name: (xs, ys)}`` as an SVG 1.1 document.

    With ``asinh_y`` the y values are drawn on an ``asinh`` scale, which is
    linear near zero and logarithmic far from it, so signed errors spanning
    many decades stay readable.  Non-finite or missing points break the line.
    """
    left, right, top, bottom = 70, 150, 40, 50
    pw, ph = width - left - right, height - top - bottom
    tf = math.asinh if asinh_y else (lambda v: v)
    pts = [
        (x, tf(y)) for xs, ys in series.values() for x, y in zip(xs, ys)
        if y is not None and math.isfinite(y)
    ]
    if pts:
        x_lo, x_hi = min(p[0] for p in pts), max(p[0] for p in pts)
        y_lo, y_hi = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0

    def sx(x):
        return left + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return top + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x_lo + i * (x_hi - x_lo) / 4
        yv = y_lo + i * (y_hi - y_lo) / 4
        ylab = math.sinh(yv) if asinh_y else yv
        out.append(
            f'<text x="{sx(xv):.1f}" y="{top + ph + 16}" text-anchor="middle" font-size="11">{xv:.3g}</text>'
        )
        out.append(
            f'<text x="{left - 6}" y="{sy(yv) + 4:.1f}" text-anchor="end" font-size="11">{ylab:.3g}</text>'
        )
    if y_lo < 0 < y_hi:
        out.append(
            f'<line x1="{left}" y1="{sy(0):.1f}" x2="{left + pw}" y2="{sy(0):.1f}" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>'
    )
    ytitle = f"{ylabel} (asinh scale)" if asinh_y else ylabel
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(ytitle)}</text>'
    )
    for i, (name, (xs, ys)) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        segments, cur = [], []
        for x, y in zip(xs, ys):
            if y is None or not math.isfinite(y):
                if cur:
                    segments.append(cur)
                cur = []
                continue
            cur.append(f"{sx(x):.2f},{sy(tf(y)):.2f}")
        if cur:
            segments.append(cur)
        for seg in segments:
            out.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(seg)}"/>'
            )
        ly = top + 14 + 18 * i
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 32}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 38}" y="{ly + 4}" font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
