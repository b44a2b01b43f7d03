"""Minimal self-contained SVG line plots: polylines, a shaded band, axes.

Coordinates are emitted at 9 significant digits so identical data produces
byte-identical files.
"""

import numpy as np

WIDTH, HEIGHT = 720, 460
MARGIN = 60
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f"]


def _fmt(v):
    return f"{float(v):.9g}"


def _esc(s):
    return (str(s).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


class _Mapper:
    def __init__(self, xs, ys, logy):
        self.logy = logy
        xs = np.concatenate([np.asarray(x, float) for x in xs])
        ys = np.concatenate([np.asarray(y, float) for y in ys])
        if logy:
            ys = np.log10(np.maximum(ys, 1e-300))
        self.x0, self.x1 = float(xs.min()), float(xs.max())
        self.y0, self.y1 = float(ys.min()), float(ys.max())
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0

    def px(self, x):
        return MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)

    def py(self, y):
        if self.logy:
            y = np.log10(max(float(y), 1e-300)) if np.isscalar(y) else \
                np.log10(np.maximum(y, 1e-300))
        return HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * \
            (HEIGHT - 2 * MARGIN)


def _polyline(xs, ys, mapper, color, width=1.5, dash=None):
    pts = " ".join(f"{_fmt(mapper.px(x))},{_fmt(mapper.py(y))}"
                   for x, y in zip(xs, ys))
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<polyline fill="none" stroke="{color}" '
            f'stroke-width="{width}"{dash_attr} points="{pts}"/>')


def svg_plot(path, curves, band=None, title="", xlabel="", ylabel="",
             logy=False):
    """curves: list of (xs, ys, label) triples; band: (xs, lo, hi, label)."""
    all_x = [c[0] for c in curves]
    all_y = [c[1] for c in curves]
    if band is not None:
        all_x.append(band[0])
        all_y.extend([band[1], band[2]])
    m = _Mapper(all_x, all_y, logy)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'width="{WIDTH}" height="{HEIGHT}" '
             f'viewBox="0 0 {WIDTH} {HEIGHT}">',
             f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" '
             f'fill="white"/>']
    if band is not None:
        bx, blo, bhi, blabel = band
        fwd = [f"{_fmt(m.px(x))},{_fmt(m.py(y))}" for x, y in zip(bx, bhi)]
        rev = [f"{_fmt(m.px(x))},{_fmt(m.py(y))}"
               for x, y in zip(bx[::-1], np.asarray(blo)[::-1])]
        parts.append(f'<polygon fill="#1f77b4" fill-opacity="0.2" '
                     f'stroke="none" points="{" ".join(fwd + rev)}"/>')
    for i, (xs, ys, label) in enumerate(curves):
        parts.append(_polyline(xs, ys, m, PALETTE[i % len(PALETTE)]))
    # frame and tick labels
    parts.append(f'<rect x="{MARGIN}" y="{MARGIN}" '
                 f'width="{WIDTH - 2*MARGIN}" height="{HEIGHT - 2*MARGIN}" '
                 f'fill="none" stroke="black"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = m.x0 + frac * (m.x1 - m.x0)
        yv = m.y0 + frac * (m.y1 - m.y0)
        yl = 10**yv if logy else yv
        parts.append(f'<text x="{_fmt(m.px(xv))}" y="{HEIGHT - MARGIN + 18}" '
                     f'font-size="11" text-anchor="middle">{_fmt(xv)}</text>')
        parts.append(f'<text x="{MARGIN - 8}" '
                     f'y="{_fmt(HEIGHT - MARGIN - frac*(HEIGHT - 2*MARGIN) + 4)}" '
                     f'font-size="11" text-anchor="end">{_fmt(yl)}</text>')
    if title:
        parts.append(f'<text x="{WIDTH//2}" y="{MARGIN - 20}" font-size="14" '
                     f'text-anchor="middle">{_esc(title)}</text>')
    if xlabel:
        parts.append(f'<text x="{WIDTH//2}" y="{HEIGHT - 12}" font-size="12" '
                     f'text-anchor="middle">{_esc(xlabel)}</text>')
    if ylabel:
        parts.append(f'<text x="16" y="{HEIGHT//2}" font-size="12" '
                     f'text-anchor="middle" '
                     f'transform="rotate(-90 16 {HEIGHT//2})">'
                     f'{_esc(ylabel)}</text>')
    # legend
    ly = MARGIN + 14
    for i, (_, _, label) in enumerate(curves):
        if not label:
            continue
        color = PALETTE[i % len(PALETTE)]
        parts.append(f'<line x1="{WIDTH - MARGIN - 150}" y1="{ly}" '
                     f'x2="{WIDTH - MARGIN - 125}" y2="{ly}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{WIDTH - MARGIN - 118}" y="{ly + 4}" '
                     f'font-size="11">{_esc(label)}</text>')
        ly += 16
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
