"""Diagnostic figures for the command-line reports.

Import this module only when figures are wanted: it selects the Agg
backend at import time so the commands never need a display.  Every
function writes one PNG and closes its figure; none of them return
anything.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

DPI = 150


def surface_png(x, path, title=""):
    """3d wire-shaded view of a sampled patch x of shape (nu, nv, 3)."""
    x = np.asarray(x, dtype=float)
    fig = plt.figure(figsize=(6.0, 5.0))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(x[..., 0], x[..., 1], x[..., 2],
                    rcount=min(64, x.shape[0]), ccount=min(64, x.shape[1]),
                    cmap="viridis", linewidth=0.0, antialiased=True)
    if title:
        ax.set_title(title)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def profile_png(curve, path, title=""):
    """Ambient coordinates of a profile curve against its parameter."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for idx, label in enumerate(("x", "y", "z")):
        ax.plot(curve.us, curve.points[:, idx], label=label)
    ax.set_xlabel("u")
    ax.legend()
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def phi_png(bs, vals, targets, solutions, path, title=""):
    """Closure function over the scan window with targets and roots."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(bs, vals, label="Phi + 1/2")
    for t in targets:
        ax.axhline(t, color="gray", linestyle="--", linewidth=0.8)
    if solutions:
        ax.plot([s.b for s in solutions],
                [s.q / s.p for s in solutions],
                "o", color="crimson", label="solutions")
    ax.set_xlabel("b")
    ax.set_ylabel("Phi + 1/2")
    ax.legend()
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def residual_png(residual, du, dv, path, title=""):
    """Heatmap of a per-cell residual field over the parameter patch."""
    residual = np.asarray(residual, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    extent = (0.0, residual.shape[1] * dv, 0.0, residual.shape[0] * du)
    im = ax.imshow(residual, origin="lower", aspect="auto",
                   extent=extent, cmap="magma")
    fig.colorbar(im, ax=ax, label="residual")
    ax.set_xlabel("v")
    ax.set_ylabel("u")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
