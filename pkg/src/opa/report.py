"""Figure rendering for sweep results.

Kept separate from the data-only commands: everything here writes files
(PNG figures plus the sweep CSV) and nothing here is needed by the
numerical layers.  matplotlib is imported lazily so the rest of the
package works without a rendering backend.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import InvalidArgumentError
from .experiments import rows_to_csv


def _finite_pairs(rows, attr: str):
    keys, vals = [], []
    for row in rows:
        v = getattr(row, attr)
        if v is not None and np.isfinite(v):
            keys.append(float(row.key))
            vals.append(float(v))
    return keys, vals


def render_sweep_report(rows, outdir: str, f_label: str = "") -> list:
    """Write sweep.csv plus three figures into outdir; returns the file names."""
    rows = list(rows)
    if not rows:
        raise InvalidArgumentError("no rows to render")
    os.makedirs(outdir, exist_ok=True)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []

    csv_path = os.path.join(outdir, "sweep.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))
    written.append("sweep.csv")

    title_suffix = f" for {f_label}" if f_label else ""

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    keys, errs = _finite_pairs(rows, "error")
    ax.plot(keys, errs, "o-", color="tab:blue")
    ax.set_xlabel("p")
    ax.set_ylabel("optimal error")
    ax.set_title(f"Approximation error vs p{title_suffix}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "error_vs_p.png"), dpi=130)
    plt.close(fig)
    written.append("error_vs_p.png")

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    width = max((row.coeffs.size for row in rows), default=0)
    for k in range(width):
        ks, vs = [], []
        for row in rows:
            if row.coeffs.size == width:
                ks.append(float(row.key))
                vs.append(abs(complex(row.coeffs[k])))
        if ks:
            ax.plot(ks, vs, "o-", label=f"|coeff {k}|")
    ax.set_xlabel("p")
    ax.set_ylabel("coefficient magnitude")
    ax.set_title(f"Approximant coefficients vs p{title_suffix}")
    ax.grid(True, alpha=0.3)
    if width:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "coefficients_vs_p.png"), dpi=130)
    plt.close(fig)
    written.append("coefficients_vs_p.png")

    fig, ax = plt.subplots(figsize=(5.2, 5.2))
    theta = np.linspace(0.0, 2.0 * np.pi, 512)
    ax.plot(np.cos(theta), np.sin(theta), "-", color="0.6", lw=1,
            label="unit circle")
    any_roots = False
    for row in rows:
        if row.roots.size:
            any_roots = True
            ax.scatter(row.roots.real, row.roots.imag, s=24, alpha=0.8,
                       label=f"p = {row.key}")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"Approximant roots{title_suffix}")
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    if any_roots:
        ax.legend(loc="best", fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "roots.png"), dpi=130)
    plt.close(fig)
    written.append("roots.png")

    return written


__all__ = ["render_sweep_report"]
