"""Figure rendering for scan output: sector-plane scatter plus region edges."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .regions import RegionSpec, enumerate_vertices


def _ordered_polygon(points):
    """Order 2-D vertices counterclockwise around their centroid."""
    pts = np.array(points, dtype=float)
    center = pts.mean(axis=0)
    angles = np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0])
    return pts[np.argsort(angles)]


def render_scan(
    samples: np.ndarray,
    path: str,
    region: RegionSpec | None = None,
    title: str | None = None,
) -> None:
    """Scatter sampled (S_1, S_2[, S_3]) points, overlaying region vertices.

    Two columns give a plane plot with the polytope outline; three give a
    3-D scatter with the vertex skeleton.
    """
    samples = np.asarray(samples, dtype=float)
    dims = samples.shape[1] if samples.size else 2
    if dims == 2:
        fig, ax = plt.subplots(figsize=(5.0, 4.0))
        if samples.size:
            ax.scatter(samples[:, 0], samples[:, 1], s=6, alpha=0.5, lw=0)
        if region is not None:
            verts = [tuple(map(float, v)) for v in enumerate_vertices(region)]
            if len(verts) >= 3:
                poly = _ordered_polygon(verts)
                closed = np.vstack([poly, poly[:1]])
                ax.plot(closed[:, 0], closed[:, 1], "k-", lw=1.2)
            ax.scatter(*zip(*verts), marker="s", c="k", s=25, zorder=3)
        ax.set_xlabel(r"$S_1$")
        ax.set_ylabel(r"$S_2$")
    elif dims == 3:
        fig = plt.figure(figsize=(5.5, 4.5))
        ax = fig.add_subplot(projection="3d")
        if samples.size:
            ax.scatter(samples[:, 0], samples[:, 1], samples[:, 2], s=5, alpha=0.4)
        if region is not None:
            verts = np.array(
                [tuple(map(float, v)) for v in enumerate_vertices(region)]
            )
            ax.scatter(verts[:, 0], verts[:, 1], verts[:, 2], marker="s", c="k", s=30)
        ax.set_xlabel(r"$S_1$")
        ax.set_ylabel(r"$S_2$")
        ax.set_zlabel(r"$S_3$")
    else:
        raise ValueError(f"can only plot 2 or 3 sector coordinates, got {dims}")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
