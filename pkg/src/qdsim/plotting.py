"""Matplotlib figures: lattice sketches with ribbons, GSD bars, S-matrix phases."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lattice import Lattice, RibbonPath  # noqa: E402

ROLE_COLORS = {"bulk": "black", "side": "tab:gray", "pseudo": "tab:olive"}


def draw_lattice(lat: Lattice, ax=None, paths: tuple[RibbonPath, ...] = (), title: str | None = None):
    if ax is None:
        _, ax = plt.subplots(figsize=(1.2 * lat.cols + 2, 1.2 * lat.rows + 2))
    for e in lat.edges:
        x0, y0 = lat.vertices[e.tail].pos
        dx, dy = e.disp
        style = dict(color="tab:gray", ls=":", lw=1) if e.dotted else dict(color="0.2", lw=1.2)
        ax.annotate("", xy=(x0 + dx, y0 + dy), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="-|>", shrinkA=3, shrinkB=3, **style))
    for v in lat.vertices:
        ax.plot(*v.pos, "o", ms=3, color=ROLE_COLORS.get(v.role, "black"))
    for h in lat.hybrids:
        vx, vy = lat.vertices[h.vertex].pos
        ax.plot(vx, vy, "s", ms=6, mfc="none", color="tab:purple")
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, path in enumerate(paths):
        c = colors[i % len(colors)]
        for q, _, _ in path.direct:
            e = lat.edges[lat.edge_of_qudit[q]]
            x0, y0 = lat.vertices[e.tail].pos
            ax.plot([x0, x0 + e.disp[0]], [y0, y0 + e.disp[1]], color=c, lw=3, alpha=0.6)
        for q, _, _ in path.dual:
            e = lat.edges[lat.edge_of_qudit[q]]
            x0, y0 = lat.vertices[e.tail].pos
            mx, my = x0 + e.disp[0] / 2, y0 + e.disp[1] / 2
            nx, ny = -e.disp[1] / 2, e.disp[0] / 2
            ax.plot([mx - nx, mx + nx], [my - ny, my + ny], color=c, lw=2, ls="--")
    ax.set_aspect("equal")
    ax.set_axis_off()
    if title:
        ax.set_title(title, fontsize=9)
    return ax


def save_lattice_sketch(lat: Lattice, path: str | Path, paths=(), title=None) -> Path:
    fig, ax = plt.subplots(figsize=(1.2 * lat.cols + 2, 1.2 * lat.rows + 2))
    draw_lattice(lat, ax, paths, title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def gsd_bars(rows: list[dict], path: str | Path) -> Path:
    labels = [r["lattice"] for r in rows]
    sym = [r["symplectic"] if isinstance(r["symplectic"], int) else 0 for r in rows]
    exact = [r["exact"] if isinstance(r["exact"], int) else 0 for r in rows]
    x = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(rows) + 2), 3.5))
    ax.bar(x - 0.2, sym, 0.4, label="symplectic")
    ax.bar(x + 0.2, exact, 0.4, label="orbit count")
    ax.set_xticks(x, labels, rotation=60, ha="right", fontsize=6)
    ax.set_yscale("log", base=2)
    ax.set_ylabel("ground-space dimension")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def s_phase_plot(n: int, path: str | Path) -> Path:
    from .fusion import build_anyon_data

    data = build_anyon_data(n)
    phases = np.vectorize(float)(data.s_exp)
    fig, ax = plt.subplots(figsize=(4, 3.5))
    im = ax.imshow(phases, cmap="twilight", vmin=0, vmax=1)
    ax.set_title(f"arg S / 2pi, N={n}", fontsize=9)
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)
