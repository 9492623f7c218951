"""Matplotlib rendering for the reproduction reports.

Every `repro` identifier that maps to a published figure gets a PNG rendered
next to its CSV output.  Headless by design (Agg backend); nothing here
opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {
    "figure.figsize": (6.0, 3.6),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.labelsize": 10,
    "font.size": 9,
    "legend.fontsize": 8,
}


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def line_figure(path, x, y, xlabel, ylabel, title, anchors=None, anchor_label="published"):
    """Model curve with optional published anchor markers."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(x, y, "-", lw=1.5, label="model")
        if anchors is not None:
            ax.plot(anchors[0], anchors[1], "o", ms=5, color="crimson", label=anchor_label)
            ax.legend()
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        return _save(fig, path)


def multi_line_figure(path, series, xlabel, ylabel, title, hline=None):
    """Several labelled curves, e.g. SNR over distance per configuration."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for label, x, y in series:
            ax.plot(x, y, lw=1.5, label=label)
        if hline is not None:
            ax.axhline(hline, color="gray", ls="--", lw=1, label=f"{hline:g} dB threshold")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend()
        return _save(fig, path)


def bar_figure(path, labels, values, xlabel, ylabel, title, hline=None):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.bar([str(l) for l in labels], values, color="#4878a8")
        if hline is not None:
            ax.axhline(hline, color="gray", ls="--", lw=1)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        return _save(fig, path)


def errorbar_figure(path, x, y, yerr, xlabel, ylabel, title, xticklabels=None):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.errorbar(x, y, yerr=yerr, fmt="o-", capsize=4, lw=1.2)
        if xticklabels is not None:
            ax.set_xticks(x)
            ax.set_xticklabels(xticklabels)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        return _save(fig, path)


def box_figure(path, groups, ylabel, title):
    """Box plot of frequency distributions; groups = [(label, values), ...]."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.boxplot([g[1] for g in groups], tick_labels=[g[0] for g in groups])
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.tick_params(axis="x", rotation=20)
        return _save(fig, path)


def event_track_figure(path, lux_t, lux_v, events_by_tag, title):
    """Lux trace with detected events overlaid per tag (deployment view)."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot([t / 3600.0 for t in lux_t], lux_v, lw=0.8, color="#b0a060", label="lux")
        ax.set_xlabel("time (h)")
        ax.set_ylabel("illuminance (lux)")
        ax2 = ax.twinx()
        markers = ["*", "o", "s", "^", "v"]
        for k, (tag, times) in enumerate(sorted(events_by_tag.items())):
            ax2.plot([t / 3600.0 for t in times], [k + 1] * len(times),
                     markers[k % len(markers)], ms=6, ls="none", label=tag)
        ax2.set_ylim(0, len(events_by_tag) + 1)
        ax2.set_yticks([])
        fig.legend(loc="upper right", fontsize=7)
        ax.set_title(title)
        return _save(fig, path)
