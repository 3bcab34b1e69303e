"""Tabulation of d_k(t) = int_0^{1/2} G_-^t - G_+^t for arbitrary k.

These numbers are evidence, not proof.  Every row carries a quadrature
error bound and a reliability flag that is raised whenever the bound is
not smaller than the value, in which case the sign of the value says
nothing.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .extrema import BudgetExhausted
from .interval import DomainError
from .kernels import KernelSpec, h_xx_bound, lemma_route_bound
from .quadrature import error_bound, midpoint_sum
from .trigpoly import CaseId, build_G, evaluate

__all__ = ["TabRow", "ShapeCurve", "steps_from_spacing", "t_grid", "tabulate", "shape", "rows_to_csv", "write_svg"]


@dataclass(frozen=True)
class TabRow:
    t: float
    d: float
    error_bound: float
    bound_kind: str  # "certified", "estimated" or "none"

    @property
    def unreliable(self) -> bool:
        return not self.error_bound < abs(self.d)


@dataclass(frozen=True)
class ShapeCurve:
    k: int
    s: tuple[float, ...]
    f: tuple[float, ...]
    argmax_s: float
    max_d: float


def steps_from_spacing(step: float) -> int:
    """Node spacing ``step`` on [0, 1/2] means N = 1/(2 step) midpoint nodes."""
    if step <= 0:
        raise ValueError("step must be positive")
    return max(1, round(1 / (2 * step)))


def t_grid(t_min: float, t_max: float, density: float) -> list[Fraction]:
    """Decimal grid t_min, t_min + density, ... up to t_max, in exact rationals."""
    if density <= 0:
        raise ValueError("density must be positive")
    a, b, h = (Fraction(str(v)) for v in (t_min, t_max, density))
    if b < a:
        raise ValueError("t_max must not be below t_min")
    count = math.floor((b - a) / h)
    return [a + i * h for i in range(count + 1)]


def _power_integral(case: CaseId, t: float, N: int) -> float:
    G = build_G(case)
    return midpoint_sum(lambda x: np.power(evaluate(G, x), t), N)


def _h2_bound(case: CaseId, t: Fraction, exploratory: bool) -> tuple[float, str]:
    try:
        return lemma_route_bound(case, t, 0).value, "certified"
    except (DomainError, BudgetExhausted):
        pass
    if exploratory:
        return h_xx_bound(KernelSpec(case, float(t), 0), exploratory=True).value, "estimated"
    return math.inf, "none"


def tabulate(
    k: int, t_min: float, t_max: float, step: float = 0.001, density: float = 0.01, exploratory: bool = False
) -> list[TabRow]:
    """d_k on a t-grid with per-point error bounds.

    The H'' bound for j = 0 comes from the certified log-variable route
    whenever min G is provably positive.  Otherwise it is a grid estimate
    if ``exploratory`` is set and absent (infinite) if not.
    """
    N = steps_from_spacing(step)
    rows = []
    for t in t_grid(t_min, t_max, density):
        if t < 1:
            raise ValueError("t must be at least 1")
        tf = float(t)
        d = _power_integral(CaseId(k, -1), tf, N) - _power_integral(CaseId(k, 1), tf, N)
        bounds = [_h2_bound(CaseId(k, s), t, exploratory) for s in (1, -1)]
        kind = "none" if any(b[1] == "none" for b in bounds) else (
            "estimated" if any(b[1] == "estimated" for b in bounds) else "certified")
        err = 2 * error_bound(max(b[0] for b in bounds), None, N) if kind != "none" else math.inf
        rows.append(TabRow(tf, d, err, kind))
    return rows


def shape(k_list: Iterable[int], step: float = 0.001, density: float = 0.01) -> list[ShapeCurve]:
    """Normalized curves f_k(s) = d(k + s) / max d over s in [0, 1]."""
    out = []
    for k in k_list:
        if k < 1:
            raise ValueError("shape needs k >= 1")
        N = steps_from_spacing(step)
        ts = t_grid(k, k + 1, density)
        d = np.array([_power_integral(CaseId(k, -1), float(t), N) - _power_integral(CaseId(k, 1), float(t), N)
                      for t in ts])
        i = int(np.argmax(d))
        m = float(d[i])
        out.append(ShapeCurve(k, tuple(float(t - k) for t in ts), tuple(float(v) / m for v in d),
                              float(ts[i] - k), m))
    return out


def rows_to_csv(rows: Sequence[TabRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "d", "error_bound", "bound_kind", "unreliable"])
    for r in rows:
        w.writerow([repr(r.t), repr(r.d), repr(r.error_bound), r.bound_kind, int(r.unreliable)])
    return buf.getvalue()


def write_svg(series: dict[str, tuple[Sequence[float], Sequence[float]]], title: str = "",
              width: int = 640, height: int = 400) -> str:
    """Static line plot; every input point also appears as a circle carrying its exact values."""
    pad = 50
    xs = [x for xv, _ in series.values() for x in xv]
    ys = [y for _, yv in series.values() for y in yv]
    if not xs:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(min(ys), 0.0), max(max(ys), 0.0)
    sx = (width - 2 * pad) / ((x1 - x0) or 1.0)
    sy = (height - 2 * pad) / ((y1 - y0) or 1.0)

    def px(x, y):
        return pad + (x - x0) * sx, height - pad - (y - y0) * sy

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    zx0, zy = px(x0, 0.0)
    zx1, _ = px(x1, 0.0)
    lines.append(f'<line x1="{zx0:.2f}" y1="{zy:.2f}" x2="{zx1:.2f}" y2="{zy:.2f}" stroke="#999"/>')
    for i, (label, (xv, yv)) in enumerate(series.items()):
        c = colors[i % len(colors)]
        pts = " ".join("{:.2f},{:.2f}".format(*px(x, y)) for x, y in zip(xv, yv))
        lines.append(f'<g data-label="{escape(label)}">')
        lines.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}"/>')
        for x, y in zip(xv, yv):
            cx, cy = px(x, y)
            lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="1.5" fill="{c}" data-x="{x!r}" data-y="{y!r}"/>')
        lines.append("</g>")
        lines.append(f'<text x="{width - pad:.0f}" y="{40 + 16 * i}" text-anchor="end" fill="{c}" font-size="12">'
                     f"{escape(label)}</text>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
