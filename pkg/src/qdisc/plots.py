"""Bloch-sphere renderings of an ensemble and its measurement strategy.

Two panels: a 3D sphere with state arrows (solid) and element directions
(dashed), and the view down the latitude axis showing the state longitudes
against the equatorial element directions.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .ensembles import Ensemble  # noqa: E402
from .operators import orthonormal_frame  # noqa: E402


def _sphere_wireframe(ax):
    u = np.linspace(0.0, 2.0 * math.pi, 25)
    w = np.linspace(0.0, math.pi, 13)
    x = np.outer(np.cos(u), np.sin(w))
    y = np.outer(np.sin(u), np.sin(w))
    z = np.outer(np.ones_like(u), np.cos(w))
    ax.plot_wireframe(x, y, z, color="0.85", linewidth=0.4)
    for axis in np.eye(3):
        ax.plot(*zip(-axis, axis), color="0.6", linewidth=0.6)


def render_bloch_figure(e: Ensemble, elements, path: str):
    """Write a PNG of the ensemble and its measurement directions.

    ``elements`` is a list of (index, unit direction, weight) triples; pass
    an empty list to draw the states alone.
    """
    fig = plt.figure(figsize=(9.2, 4.4))
    ax3 = fig.add_subplot(1, 2, 1, projection="3d")
    _sphere_wireframe(ax3)
    for j in range(e.size):
        b = e.bloch(j)
        ax3.quiver(0, 0, 0, *b, color="tab:blue", linewidth=1.6,
                   arrow_length_ratio=0.08)
        ax3.text(*(1.08 * b), f"$\\rho_{{{j}}}$", color="tab:blue", fontsize=9)
    for k, d, _ in elements:
        d = np.asarray(d)
        ax3.quiver(0, 0, 0, *d, color="tab:red", linewidth=1.2,
                   linestyle="dashed", arrow_length_ratio=0.08)
        ax3.text(*(1.16 * d), f"$\\Pi_{{{k}}}$", color="tab:red", fontsize=9)
    ax3.set_box_aspect((1, 1, 1))
    ax3.set_axis_off()
    ax3.set_title("Bloch sphere")

    ax2 = fig.add_subplot(1, 2, 2)
    circle = np.linspace(0.0, 2.0 * math.pi, 181)
    ax2.plot(np.cos(circle), np.sin(circle), color="0.8", linewidth=0.8)
    # View down the mean state axis (or the z axis when states average to 0).
    mean = e.bloch_matrix().mean(axis=0)
    axis = mean / np.linalg.norm(mean) if np.linalg.norm(mean) > 1e-9 \
        else np.array([0.0, 0.0, 1.0])
    e1, e2 = orthonormal_frame(axis)
    for j in range(e.size):
        b = e.bloch(j)
        ax2.plot([0.0, float(b @ e1)], [0.0, float(b @ e2)],
                 color="tab:blue", linewidth=1.6)
        ax2.annotate(str(j), (float(b @ e1), float(b @ e2)),
                     color="tab:blue", fontsize=9)
    for _, d, weight in elements:
        d = np.asarray(d)
        ax2.plot([0.0, weight * float(d @ e1)], [0.0, weight * float(d @ e2)],
                 color="tab:red", linewidth=1.2, linestyle="--")
    ax2.set_aspect("equal")
    ax2.set_xlim(-1.3, 1.3)
    ax2.set_ylim(-1.3, 1.3)
    ax2.set_xticks([])
    ax2.set_yticks([])
    ax2.set_title("view along the latitude axis")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
