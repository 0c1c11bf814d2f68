"""Orbit (bifurcation) diagrams by direct iteration, with CSV and SVG output."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from xml.sax.saxutils import escape as xml_escape

import numpy as np

from . import kernels
from .algebraic import AlgebraicRoot
from .families import MapFamily

ESCAPE_BOUND = 1e6
TRANSIENT = 1000
KEEP = 200
N_PARAMS = 1000


class EmptyDataset(ValueError):
    pass


@dataclass
class DiagramDataset:
    family: str
    param_name: str
    params: np.ndarray
    samples: list  # one float array per parameter, escaped samples removed
    settings: dict = field(default_factory=dict)
    escaped: np.ndarray | None = None  # escaped seeds per parameter (sidecar statistic)

    @property
    def n_samples(self) -> int:
        return int(sum(len(s) for s in self.samples))

    @property
    def escaped_total(self) -> int:
        return 0 if self.escaped is None else int(self.escaped.sum())

    def points(self):
        for t, xs in zip(self.params, self.samples):
            for x in xs:
                yield float(t), float(x)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("param,x\n")
        for t, x in self.points():
            buf.write(f"{t:.17g},{x:.17g}\n")
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {
            "family": self.family,
            "settings": self.settings,
            "n_params": int(len(self.params)),
            "n_samples": self.n_samples,
            "escaped_seeds": self.escaped_total,
            "params_with_escape": int(np.count_nonzero(self.escaped)) if self.escaped is not None else 0,
        }


def _float_rule_rows(f: MapFamily, params: np.ndarray) -> np.ndarray:
    """Ascending float coefficients of the map, one row per parameter."""
    if f.rule is None:
        # T family at irrational a: (a - c) - c*x^2
        a = f.fixed_value("a")
        a = float(a) if isinstance(a, AlgebraicRoot) else float(a)
        return np.stack([a - params, np.zeros_like(params), -params], axis=1)
    rows = [f.rule.float_coeffs(float(t)) for t in params]
    width = max(len(r) for r in rows)
    out = np.zeros((len(rows), width))
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


def _seeds(f: MapFamily, params: np.ndarray, x0_policy) -> list[np.ndarray]:
    """One seed array per seeding pass (the cubic gets one pass per critical point)."""
    if x0_policy != "critical-point":
        return [np.full(len(params), float(x0_policy))]
    if f.rule is None or f.rule.degree <= 2:
        return [np.zeros(len(params))]
    crit = [f.critical_points(float(t)) for t in params]
    k = max(len(c) for c in crit)
    passes = []
    for j in range(k):
        passes.append(np.array([c[j] if j < len(c) else (c[-1] if c else 0.0) for c in crit]))
    return passes


def orbit_diagram(f: MapFamily, t_range, n_params: int = N_PARAMS, transient: int = TRANSIENT,
                  keep: int = KEEP, x0_policy="critical-point") -> DiagramDataset:
    """Iterate from the seed, drop ``transient`` iterates, record ``keep`` more."""
    if n_params < 2 and float(t_range[0]) != float(t_range[1]):
        raise ValueError("n_params must be at least 2")
    if transient < 0 or keep < 1:
        raise ValueError("need transient >= 0 and keep >= 1")
    lo, hi = float(t_range[0]), float(t_range[1])
    params = np.linspace(lo, hi, n_params) if n_params > 1 else np.array([lo])
    coeffs = _float_rule_rows(f, params)
    seeds = _seeds(f, params, x0_policy)
    blocks, escaped = [], np.zeros(len(params), dtype=int)
    for x0 in seeds:
        out = np.empty((len(params), keep))
        kernels.iterate_block(np.ascontiguousarray(coeffs), np.ascontiguousarray(x0, dtype=float),
                              transient, keep, ESCAPE_BOUND, out)
        escaped += np.isnan(out[:, -1]).astype(int)
        blocks.append(out)
    merged = np.concatenate(blocks, axis=1)
    samples = [row[~np.isnan(row)] for row in merged]
    settings = {
        "t_range": [lo, hi],
        "n_params": n_params,
        "transient": transient,
        "keep": keep,
        "x0_policy": x0_policy if isinstance(x0_policy, str) else float(x0_policy),
        "escape_bound": ESCAPE_BOUND,
        "backend": kernels.BACKEND,
    }
    return DiagramDataset(f.descriptor, f.param_name, params, samples, settings, escaped)


def count_bands(xs, diameter: float = 1e-3) -> int | None:
    """Number of clusters when the samples split into groups narrower than
    ``diameter``, else None."""
    xs = np.sort(np.asarray(xs, dtype=float))
    if xs.size == 0:
        return 0
    breaks = np.flatnonzero(np.diff(xs) >= diameter)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [xs.size - 1]))
    if np.any(xs[ends] - xs[starts] >= diameter):
        return None
    return int(starts.size)


# -- SVG ----------------------------------------------------------------------

def _ticks(lo: float, hi: float, k: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    raw = (hi - lo) / k
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    first = np.ceil(lo / step) * step
    return [float(v) for v in np.arange(first, hi + step * 1e-9, step)]


def render_svg(d: DiagramDataset, width: int = 800, height: int = 600, dot: float = 0.6) -> str:
    """Self-contained SVG scatter of every (param, x) sample."""
    pts = np.array(list(d.points()), dtype=float).reshape(-1, 2)
    if pts.size == 0:
        raise EmptyDataset("no finite samples to plot")
    left, right, top, bottom = 70, 20, 30, 50
    pw, ph = width - left - right, height - top - bottom

    def span(v):
        lo, hi = float(v.min()), float(v.max())
        if hi == lo:
            pad = abs(lo) * 0.02 or 1.0
        else:
            pad = 0.02 * (hi - lo)
        return lo - pad, hi + pad

    (x0, x1), (y0, y1) = span(pts[:, 0]), span(pts[:, 1])

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = io.StringIO()
    out.write(f'<?xml version="1.0" encoding="UTF-8"?>\n'
              f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
              f'viewBox="0 0 {width} {height}">\n')
    out.write(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n')
    out.write(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-family="sans-serif" '
              f'font-size="14">{xml_escape(d.family)}</text>\n')
    out.write(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>\n')
    out.write('<g font-family="sans-serif" font-size="11">\n')
    for v in _ticks(x0, x1):
        X = sx(v)
        out.write(f'<line x1="{X:.1f}" y1="{top + ph}" x2="{X:.1f}" y2="{top + ph + 5}" stroke="black"/>'
                  f'<text x="{X:.1f}" y="{top + ph + 18}" text-anchor="middle">{v:.4g}</text>\n')
    for v in _ticks(y0, y1):
        Y = sy(v)
        out.write(f'<line x1="{left - 5}" y1="{Y:.1f}" x2="{left}" y2="{Y:.1f}" stroke="black"/>'
                  f'<text x="{left - 8}" y="{Y + 4:.1f}" text-anchor="end">{v:.4g}</text>\n')
    out.write(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">'
              f'{xml_escape(d.param_name)}</text>\n')
    out.write(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
              f'transform="rotate(-90 16 {top + ph / 2:.1f})">x</text>\n')
    out.write("</g>\n")
    out.write('<g fill="black" fill-opacity="0.6">\n')
    for px, py in zip(sx(pts[:, 0]), sy(pts[:, 1])):
        out.write(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{dot}"/>\n')
    out.write("</g>\n</svg>\n")
    return out.getvalue()
