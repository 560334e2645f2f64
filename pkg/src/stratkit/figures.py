"""Optional PNG figures for CLI reports.

Only imported when ``--figures DIR`` is given; uses the Agg backend so no
display is needed.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, directory, name):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def homology_bars(result, directory, name="ih.png", title="intersection homology"):
    fig, ax = plt.subplots(figsize=(4, 3))
    degrees = list(range(len(result.ranks)))
    ax.bar(degrees, result.ranks, color="#4c72b0")
    for k, tors in enumerate(result.torsion):
        if tors:
            ax.annotate("+" + ",".join(f"Z/{t}" for t in tors), (k, result.ranks[k]),
                        ha="center", va="bottom", fontsize=7)
    ax.set_xticks(degrees)
    ax.set_xlabel("degree")
    ax.set_ylabel("rank")
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, directory, name)


def agreement_strip(flags, bound, directory, name="agreement.png", title="agreement by degree"):
    """One cell per degree, filled where the comparison held; the dashed line
    marks the predicted bound."""
    fig, ax = plt.subplots(figsize=(max(3, len(flags) * 0.6), 1.6))
    colors = ["#55a868" if f else "#c44e52" for f in flags]
    ax.bar(range(len(flags)), [1] * len(flags), color=colors, width=0.9)
    if bound is not None:
        ax.axvline(bound + 0.5, color="black", linestyle="--")
    ax.set_yticks([])
    ax.set_xticks(range(len(flags)))
    ax.set_xlabel("degree")
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    return _save(fig, directory, name)


def suite_timings(results, directory, name="verify.png"):
    fig, ax = plt.subplots(figsize=(6, 0.4 * len(results) + 1))
    names = [r.name for r in results]
    ax.barh(names, [r.seconds for r in results],
            color=["#55a868" if r.ok else "#c44e52" for r in results])
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    fig.tight_layout()
    return _save(fig, directory, name)
