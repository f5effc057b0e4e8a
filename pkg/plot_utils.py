"""
SVG plots of 2D slices.

Plots are written with a fixed hash salt and no date metadata so that the
same rows always give the same bytes.
"""

from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from console_utils import status  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "stablab"
matplotlib.rcParams["svg.fonttype"] = "path"

REGION_COLOURS: Dict[str, str] = {
    "AmpleConeU": "tab:green",
    "FlopSide": "tab:blue",
    "PerverseFace": "tab:orange",
    "HigherFace": "tab:purple",
    "Excluded": "tab:red",
    "InP0Plus": "tab:green",
    "InP0Minus": "tab:blue",
    "OnWall": "tab:red",
    "NotPositive": "tab:gray",
}


def _save(fig, path: str):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    status(f"🖼️  Wrote {path}")


def plot_region_grid(points: Sequence[Tuple[float, float, str]], path: str, title: str,
                     xlabel: str = "beta", ylabel: str = "omega", marked: Sequence[str] = ("Excluded", "OnWall")):
    """
    Scatter (x, y, region) points coloured by region; regions in marked are drawn as crosses.
    """
    fig, ax = plt.subplots(figsize=(6, 5))
    groups: Dict[str, List[Tuple[float, float]]] = {}
    for x, y, region in points:
        groups.setdefault(region.split("(")[0], []).append((x, y))
    for region in sorted(groups):
        xs, ys = zip(*groups[region])
        if region in marked:
            ax.scatter(xs, ys, marker="x", s=30, c=REGION_COLOURS.get(region, "k"), label=region)
        else:
            ax.scatter(xs, ys, marker="s", s=6, c=REGION_COLOURS.get(region, "k"), label=region)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.axhline(0, color="k", linewidth=0.5)
    ax.legend(loc="upper right", fontsize="small")
    _save(fig, path)


def plot_charges(charges: Sequence[Tuple[str, complex]], path: str, title: str):
    """Central charges as labelled points of the complex plane."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for label, z in charges:
        ax.scatter([z.real], [z.imag], c="tab:blue", s=20)
        ax.annotate(label, (z.real, z.imag), fontsize="small", textcoords="offset points", xytext=(4, 4))
    ax.axhline(0, color="k", linewidth=0.5)
    ax.axvline(0, color="k", linewidth=0.5)
    ax.set_xlabel("Re Z")
    ax.set_ylabel("Im Z")
    ax.set_title(title)
    _save(fig, path)
