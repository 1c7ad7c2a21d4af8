"""Figure rendering for built models and benchmark reports.

Uses a headless matplotlib backend; layouts are deterministic (layered
breadth-first placement), so repeated runs produce identical figures.
"""

from __future__ import annotations

from typing import Optional

from .builder import AbstractWsiModel
from .signatures import MONOTONE


def _layers(m: AbstractWsiModel) -> list[list[int]]:
    depth = {m.root: 0}
    queue = [m.root]
    while queue:
        i = queue.pop(0)
        for j in m.states[i].successors:
            if j not in depth:
                depth[j] = depth[i] + 1
                queue.append(j)
    for i in range(len(m.states)):
        depth.setdefault(i, max(depth.values(), default=0) + 1)
    out: list[list[int]] = [[] for _ in range(max(depth.values()) + 1)]
    for i in sorted(depth):
        out[depth[i]].append(i)
    return out


def _label(m: AbstractWsiModel, i: int) -> str:
    s = m.states[i]
    inner = ",".join(sorted(s.atoms)) if s.atoms else \
        ",".join(sorted(s.vars)) or "{}"
    return inner


def render_model(m: AbstractWsiModel, path: str,
                 title: Optional[str] = None) -> None:
    """Draw the model as a layered graph; monotone signatures get one
    colour per minimal neighbourhood."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    layers = _layers(m)
    pos: dict[int, tuple[float, float]] = {}
    for d, row in enumerate(layers):
        for k, i in enumerate(row):
            pos[i] = (k - (len(row) - 1) / 2.0, -d)

    fig, ax = plt.subplots(figsize=(max(4, 1.6 * max(map(len, layers))),
                                    max(3, 1.4 * len(layers))))
    cmap = plt.get_cmap("tab10")
    monotone = m.sig.kind == MONOTONE
    index = m.state_index()
    for i, s in enumerate(m.states):
        x0, y0 = pos[i]
        if monotone:
            for c, nb in enumerate(s.onestep.min_neighbourhoods or ()):
                for b in sorted(nb, key=lambda t: tuple(sorted(t))):
                    x1, y1 = pos[index[b]]
                    ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                                arrowprops=dict(arrowstyle="->", alpha=0.6,
                                                color=cmap(c % 10)))
        else:
            for j in s.successors:
                x1, y1 = pos[j]
                style = dict(arrowstyle="->", alpha=0.6, color="gray")
                if j == i:
                    ax.annotate("", xy=(x0 + 0.12, y0 + 0.12),
                                xytext=(x0 - 0.12, y0 + 0.12),
                                arrowprops=dict(
                                    arrowstyle="->", alpha=0.6, color="gray",
                                    connectionstyle="arc3,rad=1.6"))
                else:
                    ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                                arrowprops=style)
    for i in range(len(m.states)):
        x0, y0 = pos[i]
        face = "gold" if i == m.root else "white"
        ax.scatter([x0], [y0], s=900, c=face, edgecolors="black", zorder=3)
        ax.annotate(_label(m, i), (x0, y0), ha="center", va="center",
                    fontsize=8, zorder=4)
    ax.set_axis_off()
    ax.set_title(title or f"{m.sig.id}: {len(m.states)} states")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bench(rows: list[dict], path_prefix: str) -> list[str]:
    """Two figures from benchmark rows (logic, size, states, micros):
    model growth and construction time against input size."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    logics = sorted({r["logic"] for r in rows})
    written = []
    for metric, ylabel, suffix in (("states", "model states", "states"),
                                   ("micros", "build time (us)", "time")):
        fig, ax = plt.subplots(figsize=(6, 4))
        for logic in logics:
            pts = [(r["size"], r[metric]) for r in rows
                   if r["logic"] == logic]
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker="o", label=logic)
        ax.set_xlabel("formula size (literals)")
        ax.set_ylabel(ylabel)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        out = f"{path_prefix}_{suffix}.png"
        fig.savefig(out, dpi=150)
        plt.close(fig)
        written.append(out)
    return written
