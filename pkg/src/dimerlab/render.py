"""SVG drawings of a dimer on its fundamental domain.

Vertices are placed by a periodic harmonic (Tutte) layout: each arrow is
treated as a spring whose far end is shifted by the arrow's homology label,
and the positions minimising total squared length are found by least squares.
The result is deterministic and needs no random seed.
"""

from __future__ import annotations

import json
from typing import Mapping

import numpy as np

from .dimer import DimerQuiver, homology_labels

STYLES = {
    "solid": "",
    "dotted": ' stroke-dasharray="1.5,3"',
    "dashed": ' stroke-dasharray="6,4"',
    "double": "",
}
FACE_FILL = {"+": "#dbe8f6", "-": "#f6e3d6"}
SIZE = 400
MARGIN = 30


def harmonic_layout(d: DimerQuiver) -> tuple[dict[str, np.ndarray], dict[str, tuple[int, int]]]:
    """Positions in the unit square and the lattice shift of every arrow."""
    hl = homology_labels(d)
    verts = sorted(d.vertices)
    idx = {v: k for k, v in enumerate(verts)}
    n = len(verts)
    rows, rhs = [], []
    for a in sorted(d.arrows, key=lambda a: a.id):
        if a.tail == a.head:
            continue
        row = np.zeros(n)
        row[idx[a.head]] += 1.0
        row[idx[a.tail]] -= 1.0
        rows.append(row)
        rhs.append(-np.array(hl.labels[a.id], dtype=float))
    anchor = np.zeros(n)
    anchor[0] = 1.0
    rows.append(anchor)
    rhs.append(np.zeros(2))
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    # the lattice is spanned by the two generators; map it to the unit square
    pos = {v: sol[idx[v]] for v in verts}
    shifted = {}
    offsets = {}
    for v in verts:
        p = pos[v]
        base = np.floor(p + 1e-9)
        shifted[v] = p - base
        offsets[v] = base
    shift = {}
    for a in d.arrows:
        lab = np.array(hl.labels[a.id], dtype=float)
        s = lab + offsets[a.head] - offsets[a.tail]
        shift[a.id] = (int(round(s[0])), int(round(s[1])))
    return shifted, shift


def _xy(p) -> tuple[float, float]:
    scale = SIZE - 2 * MARGIN
    return MARGIN + float(p[0]) * scale, MARGIN + (1.0 - float(p[1])) * scale


def _f(x: float) -> str:
    return f"{x:.2f}"


def load_styles(path) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        return json.load(fh)


def render(d: DimerQuiver, styles: Mapping | None = None) -> str:
    """Return an SVG document; ``styles`` maps arrow ids to solid, dotted,
    dashed or double and may set ``"default"``."""
    styles = dict(styles or {})
    arrow_style = dict(styles.get("arrows", {}))
    default = styles.get("default", "solid")
    pos, shift = harmonic_layout(d)
    amap = d.arrow_map
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           '<defs>',
           f'<clipPath id="domain"><rect x="{MARGIN}" y="{MARGIN}" width="{SIZE - 2 * MARGIN}" '
           f'height="{SIZE - 2 * MARGIN}"/></clipPath>',
           '<marker id="tip" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" '
           'orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker>',
           '</defs>',
           '<g clip-path="url(#domain)">']
    copies = [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)]
    for k, f in enumerate(d.faces):
        corners = []
        cur = np.array(pos[amap[f.arrows[0]].tail])
        for a in f.arrows:
            corners.append(cur.copy())
            t, h = amap[a].tail, amap[a].head
            cur = cur + (pos[h] + np.array(shift[a]) - pos[t])
        for i, j in copies:
            pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in (_xy(c + np.array([i, j])) for c in corners))
            out.append(f'<polygon class="face" data-face="{k}" data-sign="{f.sign}" points="{pts}" '
                       f'fill="{FACE_FILL[f.sign]}" stroke="none"/>')
    for a in sorted(d.arrows, key=lambda a: a.id):
        start = pos[a.tail]
        vec = pos[a.head] + np.array(shift[a.id]) - start
        style = arrow_style.get(a.id, default)
        dash = STYLES.get(style, "")
        width = 3.5 if style == "double" else 1.4
        for i, j in copies:
            x1, y1 = _xy(start + np.array([i, j]))
            x2, y2 = _xy(start + vec * 0.92 + np.array([i, j]))
            if a.tail == a.head and not any(shift[a.id]):
                continue
            out.append(f'<line class="arrow" data-arrow="{a.id}" x1="{_f(x1)}" y1="{_f(y1)}" '
                       f'x2="{_f(x2)}" y2="{_f(y2)}" stroke="#333" stroke-width="{width}"{dash} '
                       f'marker-end="url(#tip)"/>')
            if style == "double":
                out.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                           f'stroke="#fff" stroke-width="1.2"/>')
    out.append('</g>')
    out.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE - 2 * MARGIN}" height="{SIZE - 2 * MARGIN}" '
               'fill="none" stroke="#888" stroke-dasharray="4,3"/>')
    for v in sorted(d.vertices):
        x, y = _xy(pos[v])
        out.append(f'<circle class="vertex" data-vertex="{v}" cx="{_f(x)}" cy="{_f(y)}" r="4" fill="#111"/>')
        out.append(f'<text x="{_f(x + 6)}" y="{_f(y - 6)}" font-size="10" font-family="sans-serif">{v}</text>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
