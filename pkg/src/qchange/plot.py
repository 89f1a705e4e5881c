"""Tiny dependency-free SVG line chart for score series."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

W, H, PAD = 720, 300, 40


def _axis_values(ts: np.ndarray) -> np.ndarray:
    if ts.dtype.kind == "M":
        return ts.astype("datetime64[s]").astype(np.int64).astype(float)
    return ts.astype(float)


def score_svg(timestamps, scores, threshold=None, shade=None, title="") -> str:
    """Render scores vs. time; ``shade`` is an optional (start, end) interval."""
    ts = np.asarray(timestamps)
    x = _axis_values(ts)
    y = np.asarray(scores, dtype=float)
    x0, x1 = (x.min(), x.max()) if x.size else (0.0, 1.0)
    lo = min(y.min() if y.size else 0.0, threshold if threshold is not None else np.inf)
    hi = max(y.max() if y.size else 1.0, threshold if threshold is not None else -np.inf)
    if x1 == x0:
        x1 = x0 + 1.0
    if hi == lo:
        hi = lo + 1.0

    def px(v):
        return PAD + (v - x0) / (x1 - x0) * (W - 2 * PAD)

    def py(v):
        return H - PAD - (v - lo) / (hi - lo) * (H - 2 * PAD)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    if shade is not None:
        a, b = _axis_values(np.asarray(shade, dtype=ts.dtype))
        parts.append(
            f'<rect x="{px(a):.2f}" y="{PAD}" width="{max(px(b) - px(a), 1):.2f}" '
            f'height="{H - 2 * PAD}" fill="#f4cccc"/>'
        )
    parts.append(
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>'
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>'
    )
    pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
    parts.append(f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{pts}"/>')
    if threshold is not None:
        parts.append(
            f'<line x1="{PAD}" y1="{py(threshold):.2f}" x2="{W - PAD}" y2="{py(threshold):.2f}" '
            'stroke="#d62728" stroke-dasharray="4 3"/>'
        )
    parts.append(f'<text x="{PAD}" y="{PAD - 12}" font-size="13">{escape(title)}</text>')
    parts.append(f'<text x="4" y="{PAD + 4}" font-size="10">{hi:.3g}</text>')
    parts.append(f'<text x="4" y="{H - PAD}" font-size="10">{lo:.3g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
