"""Figures for the report commands, written straight to files."""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed metadata keeps PNG/SVG output byte-stable between runs
_METADATA = {"png": {"Software": None}, "svg": {"Date": None}, "pdf": {"CreationDate": None}}


def _save(fig, path: str):
    ext = path.rsplit(".", 1)[-1].lower()
    fig.savefig(path, metadata=_METADATA.get(ext), bbox_inches="tight")
    plt.close(fig)


def plot_bounds(rows: Sequence, path: str):
    """log2 of the gamma and Chow annihilators against the degree."""
    idx = [r.index for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.plot(idx, [math.log2(r.gamma) for r in rows], "o-", label=r"$(i-1)!\,2^{i+1}$")
    ax.plot(idx, [math.log2(r.chow) for r in rows], "s-", label=r"$\mathrm{CH}^d$ bound")
    ax.set_xlabel("degree")
    ax.set_ylabel(r"$\log_2$ bound")
    ax.set_xticks(idx)
    ax.grid(alpha=0.3)
    ax.legend(frameon=False)
    _save(fig, path)


def plot_exponents(reports: Sequence, path: str):
    """Measured 2-saturation exponent per degree, against the bound r <= d."""
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    by_datum: dict[str, list] = {}
    for r in reports:
        by_datum.setdefault(f"{r.family}{r.rank}", []).append(r)
    for name, rs in by_datum.items():
        rs = sorted(rs, key=lambda r: r.degree)
        ax.plot([r.degree for r in rs], [r.min_exponent for r in rs], "o-", label=name)
    degs = sorted({r.degree for r in reports})
    if degs:
        ax.plot(degs, degs, "k--", lw=1, label="bound $r=d$")
        ax.set_xticks(degs)
    ax.set_xlabel("degree $d$")
    ax.set_ylabel("saturation exponent $r$")
    ax.grid(alpha=0.3)
    ax.legend(frameon=False)
    _save(fig, path)
