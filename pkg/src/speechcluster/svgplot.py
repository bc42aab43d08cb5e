"""Minimal deterministic SVG plotting: embedding scatters, elbow curves, and
local-explanation panels. No plotting backend required; output bytes depend
only on the inputs."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import LABELS

PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)

_W, _H = 640, 480
_MARGIN = 54


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Scale:
    def __init__(self, lo: float, hi: float, out_lo: float, out_hi: float):
        if hi <= lo:
            lo, hi = lo - 1.0, hi + 1.0
        pad = 0.05 * (hi - lo)
        self.lo, self.hi = lo - pad, hi + pad
        self.out_lo, self.out_hi = out_lo, out_hi

    def __call__(self, v: float) -> float:
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.out_lo + frac * (self.out_hi - self.out_lo)


def _header(title: str) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_W / 2:.0f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_escape(title)}</text>'
        )
    return parts


def _escape(text: str) -> str:
    return (
        str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _axes(xlabel: str, ylabel: str) -> list[str]:
    right, bottom = _W - _MARGIN, _H - _MARGIN
    return [
        f'<line x1="{_MARGIN}" y1="{bottom}" x2="{right}" y2="{bottom}" '
        f'stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" y2="{bottom}" '
        f'stroke="black"/>',
        f'<text x="{(_MARGIN + right) / 2:.0f}" y="{_H - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{_escape(xlabel)}</text>',
        f'<text x="16" y="{(_MARGIN + bottom) / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(_MARGIN + bottom) / 2:.0f})">'
        f"{_escape(ylabel)}</text>",
    ]


def _series_order(coloring) -> list:
    values = list(dict.fromkeys(coloring))
    if all(isinstance(v, str) for v in values):
        ordered = [lab for lab in LABELS if lab in values]
        ordered += sorted(v for v in values if v not in LABELS)
        return ordered
    return sorted(values)


def render_embedding_plot(embedding, coloring, path, title: str = "") -> Path:
    """Component-1 vs component-2 scatter, one color series per value.

    ``coloring`` is either diagnosis labels or cluster indices (one per
    sample); colors are assigned deterministically by label order HC, AD, MCI,
    Depr and then by ascending cluster index.
    """
    coords = np.asarray(
        embedding.coords if hasattr(embedding, "coords") else embedding, dtype=float
    )
    if coords.shape[0] == 0:
        raise ValueError("cannot plot an empty embedding")
    coloring = list(coloring)
    if len(coloring) != coords.shape[0]:
        raise ValueError("coloring length does not match embedding rows")
    xy = coords[:, :2] if coords.shape[1] >= 2 else np.column_stack(
        [coords[:, 0], np.zeros(coords.shape[0])]
    )

    sx = _Scale(xy[:, 0].min(), xy[:, 0].max(), _MARGIN, _W - _MARGIN)
    sy = _Scale(xy[:, 1].min(), xy[:, 1].max(), _H - _MARGIN, _MARGIN)

    parts = _header(title)
    parts += _axes("component 1", "component 2")
    order = _series_order(coloring)
    for si, value in enumerate(order):
        color = PALETTE[si % len(PALETTE)]
        name = value if isinstance(value, str) else f"cluster {value}"
        pts = [
            f'<circle cx="{_fmt(sx(xy[i, 0]))}" cy="{_fmt(sy(xy[i, 1]))}" r="3" '
            f'fill="{color}" fill-opacity="0.7"/>'
            for i in range(xy.shape[0])
            if coloring[i] == value
        ]
        parts.append(f'<g class="series" data-name="{_escape(name)}">')
        parts.extend(pts)
        parts.append("</g>")
    # legend
    for si, value in enumerate(order):
        color = PALETTE[si % len(PALETTE)]
        name = value if isinstance(value, str) else f"cluster {value}"
        y = _MARGIN + 6 + 18 * si
        parts.append(
            f'<g class="legend-entry">'
            f'<rect x="{_W - _MARGIN - 110}" y="{y}" width="12" height="12" '
            f'fill="{color}"/>'
            f'<text x="{_W - _MARGIN - 92}" y="{y + 10}" font-family="sans-serif" '
            f'font-size="12">{_escape(name)}</text></g>'
        )
    parts.append("</svg>")
    return _write(path, parts)


def render_elbow_plot(curve, path, title: str = "") -> Path:
    """Inertia vs K polyline with the chosen K highlighted."""
    ks = np.asarray(curve.k_values, dtype=float)
    inertias = np.asarray(curve.inertias, dtype=float)
    sx = _Scale(ks.min(), ks.max(), _MARGIN, _W - _MARGIN)
    sy = _Scale(inertias.min(), inertias.max(), _H - _MARGIN, _MARGIN)

    parts = _header(title or "elbow curve")
    parts += _axes("K", "inertia")
    pts = " ".join(f"{_fmt(sx(k))},{_fmt(sy(v))}" for k, v in zip(ks, inertias))
    parts.append(
        f'<polyline points="{pts}" fill="none" stroke="{PALETTE[0]}" '
        f'stroke-width="2"/>'
    )
    for k, v in zip(ks, inertias):
        parts.append(
            f'<circle cx="{_fmt(sx(k))}" cy="{_fmt(sy(v))}" r="3" '
            f'fill="{PALETTE[0]}"/>'
        )
    ci = list(curve.k_values).index(curve.chosen_k)
    parts.append(
        f'<circle cx="{_fmt(sx(ks[ci]))}" cy="{_fmt(sy(inertias[ci]))}" r="6" '
        f'fill="none" stroke="{PALETTE[3]}" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{_fmt(sx(ks[ci]) + 8)}" y="{_fmt(sy(inertias[ci]) - 8)}" '
        f'font-family="sans-serif" font-size="12">K={curve.chosen_k}</text>'
    )
    parts.append("</svg>")
    return _write(path, parts)


def render_explanation_panel(explanation, embedding, path, title: str = "") -> Path:
    """Neighborhood scatter with the fitted local axes plus one weight bar
    chart per embedding axis, each annotated with its R^2."""
    coords = np.asarray(embedding.coords, dtype=float)
    ids = list(embedding.sample_ids or [])
    index = {sid: i for i, sid in enumerate(ids)}
    rows = [index[sid] for sid in explanation.neighborhood_ids if sid in index]
    if not rows:
        raise ValueError("no neighborhood samples found in the embedding")
    inst = index[explanation.instance_id]
    xy = coords[rows][:, :2]

    half = _W // 2
    sx = _Scale(xy[:, 0].min(), xy[:, 0].max(), _MARGIN, half - 20)
    sy = _Scale(xy[:, 1].min(), xy[:, 1].max(), _H - _MARGIN, _MARGIN)

    parts = _header(title or f"local explanation: {explanation.instance_id}")
    parts.append('<g class="neighborhood">')
    for i in rows:
        parts.append(
            f'<circle cx="{_fmt(sx(coords[i, 0]))}" cy="{_fmt(sy(coords[i, 1]))}" '
            f'r="3" fill="{PALETTE[0]}" fill-opacity="0.6"/>'
        )
    parts.append("</g>")
    cx, cy = sx(coords[inst, 0]), sy(coords[inst, 1])
    # Local axes through the instance, annotated with each fit's R^2.
    parts.append(
        f'<line x1="{_MARGIN}" y1="{_fmt(cy)}" x2="{half - 20}" y2="{_fmt(cy)}" '
        f'stroke="{PALETTE[3]}" stroke-dasharray="4 3"/>'
    )
    parts.append(
        f'<line x1="{_fmt(cx)}" y1="{_MARGIN}" x2="{_fmt(cx)}" '
        f'y2="{_H - _MARGIN}" stroke="{PALETTE[2]}" stroke-dasharray="4 3"/>'
    )
    parts.append(
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="5" fill="{PALETTE[3]}"/>'
    )
    for axis, ax in enumerate(explanation.per_axis[:2]):
        color = PALETTE[3] if axis == 0 else PALETTE[2]
        parts.append(
            f'<text x="{_MARGIN}" y="{_MARGIN - 8 + 14 * axis}" '
            f'font-family="sans-serif" font-size="11" fill="{color}">'
            f"W{axis + 1}: R^2 = {ax.r2:.3f}</text>"
        )

    bar_left = half + 30
    bar_width = _W - _MARGIN - bar_left
    n_axes = len(explanation.per_axis)
    block = (_H - 2 * _MARGIN) / max(n_axes, 1)
    name_to_idx = {n: i for i, n in enumerate(explanation.feature_names)}
    for axis, ax in enumerate(explanation.per_axis):
        top = explanation.top_features[axis]
        y0 = _MARGIN + axis * block
        parts.append(
            f'<text x="{bar_left}" y="{_fmt(y0 + 12)}" font-family="sans-serif" '
            f'font-size="12">axis {axis + 1} (R^2 = {ax.r2:.3f})</text>'
        )
        weights = [abs(float(ax.weights[name_to_idx[n]])) for n in top]
        wmax = max(weights) if weights else 1.0
        for bi, name in enumerate(top):
            w = weights[bi] / wmax if wmax > 0 else 0.0
            y = y0 + 20 + bi * 16
            parts.append(
                f'<rect x="{bar_left}" y="{_fmt(y)}" '
                f'width="{_fmt(max(w * (bar_width - 120), 1.0))}" height="10" '
                f'fill="{PALETTE[axis % len(PALETTE)]}"/>'
            )
            parts.append(
                f'<text x="{bar_left + 4}" y="{_fmt(y + 9)}" '
                f'font-family="sans-serif" font-size="9" fill="black">'
                f"{_escape(name)}</text>"
            )
    parts.append("</svg>")
    return _write(path, parts)


def _write(path, parts: list[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return path
