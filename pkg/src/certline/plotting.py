"""SVG emission: data scatter with fitted-line overlays and a multiplier heatmap.

Rendering avoids pyplot's global state and pins the SVG hash salt plus an
empty Date field, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .geometry import Dataset, LineParams

# legend color per overlay role; unknown labels cycle through the tail
_ROLE_COLORS = {
    "truth": ("tab:blue", "--"),
    "tls": ("tab:red", "-"),
    "irls": ("tab:purple", "-"),
    "sdp": ("tab:green", "-"),
    "oracle": ("tab:olive", ":"),
    "candidate": ("tab:orange", "-"),
}
_FALLBACK_COLORS = ["tab:brown", "tab:pink", "tab:gray", "tab:cyan"]


def _line_segment(line: LineParams, xlim, ylim):
    a, b, c = line.a, line.b, line.c
    if abs(b) >= abs(a):
        xs = np.linspace(xlim[0], xlim[1], 2)
        ys = (c - a * xs) / b
    else:
        ys = np.linspace(ylim[0], ylim[1], 2)
        xs = (c - b * ys) / a
    return xs, ys


def render_plot(
    d: Dataset,
    overlays,
    out_path,
    gamma=None,
    outlier_mask=None,
) -> None:
    """Write an SVG: point scatter, line overlays, optional Gamma panel.

    ``overlays`` is a sequence of (label, LineParams).  ``gamma``, when
    given, is rendered as a heatmap in a second panel.
    """
    import matplotlib

    matplotlib.rcParams["svg.hashsalt"] = "certline"
    from matplotlib.figure import Figure

    ncols = 2 if gamma is not None else 1
    fig = Figure(figsize=(6.0 * ncols, 5.0))
    axes = fig.subplots(1, ncols)
    ax = axes[0] if ncols == 2 else axes

    if d.n:
        pad = 0.5 + 0.1 * (float(np.max(np.abs(d.x))) + float(np.max(np.abs(d.y))))
        xlim = (float(np.min(d.x)) - pad, float(np.max(d.x)) + pad)
        ylim = (float(np.min(d.y)) - pad, float(np.max(d.y)) + pad)
    else:
        xlim = (-1.0, 1.0)
        ylim = (-1.0, 1.0)

    if outlier_mask is not None:
        mask = np.asarray(outlier_mask, dtype=bool)
        ax.scatter(d.x[~mask], d.y[~mask], c="k", s=25, label="inliers")
        ax.scatter(
            d.x[mask], d.y[mask], c="k", s=40, marker="x", label="outliers"
        )
    else:
        ax.scatter(d.x, d.y, c="k", s=25, label="points")

    fallback = iter(_FALLBACK_COLORS * 8)
    for label, line in overlays:
        color, style = _ROLE_COLORS.get(label, (next(fallback), "-"))
        xs, ys = _line_segment(line, xlim, ylim)
        ax.plot(xs, ys, style, color=color, label=label)

    ax.set_xlim(*xlim)
    ax.set_ylim(*ylim)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="box")
    ax.legend(loc="best", fontsize=8)

    if gamma is not None:
        gax = axes[1]
        g = np.asarray(gamma, dtype=float)
        vmax = float(np.max(np.abs(g))) or 1.0
        im = gax.imshow(g, cmap="RdBu_r", vmin=-vmax, vmax=vmax)
        gax.set_title("multiplier matrix")
        fig.colorbar(im, ax=gax, shrink=0.8)

    fig.savefig(out_path, format="svg", metadata={"Date": None})
