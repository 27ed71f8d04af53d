"""PNG plots for the command line; rendering uses the Agg backend only."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return str(path)


def plot_sequence(values, path, title: str = "", hits=()) -> str:
    """Sequence values against their index, with hit indices marked."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = [i for i, _ in values]
    ys = [float(v) for _, v in values]
    ax.plot(xs, ys, marker="o", ms=3, lw=1)
    for h in hits:
        ax.axvline(h, color="tab:red", lw=0.8, ls="--")
    ax.axhline(0, color="grey", lw=0.5)
    ax.set_xlabel("n")
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_results(results, path, title: str = "acceptance") -> str:
    """One bar per check, green for pass and red for fail.

    ``results`` is a sequence of (label, passed).  Runtimes are left out so
    that the image is reproducible.
    """
    fig, ax = plt.subplots(figsize=(6, 0.35 * len(results) + 1.2))
    colors = ["tab:green" if ok else "tab:red" for _, ok in results]
    ax.barh(range(len(results)), [1] * len(results), color=colors)
    ax.set_yticks(range(len(results)))
    ax.set_yticklabels([name for name, _ in results])
    ax.invert_yaxis()
    ax.set_xticks([])
    passed = sum(ok for _, ok in results)
    ax.set_title(f"{title}: {passed}/{len(results)} pass")
    return _save(fig, path)
