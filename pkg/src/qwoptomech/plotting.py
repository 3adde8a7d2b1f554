"""Line plots of CSV channels (SVG by default)."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

CHANNEL_LABELS = {
    "A": r"$A(t)$",
    "B": r"$B(t)$",
    "q": r"$\langle q(t)\rangle$",
    "p": r"$\langle p(t)\rangle$",
    "re_a": r"Re$\,\langle a\rangle$",
    "im_a": r"Im$\,\langle a\rangle$",
    "re_b": r"Re$\,\langle b\rangle$",
    "im_b": r"Im$\,\langle b\rangle$",
    "residual": "energy-balance residual",
}
TIME_LABELS = {"γ": r"$\gamma t$", "ω_m": r"$\omega_m t$"}
DEFAULT_CHANNELS = ("A", "B", "q")


def channels_for(variant):
    """Channels worth plotting: the classical mirror has no dynamical q."""
    return ("A", "B") if variant == "ClassicalMirror" else DEFAULT_CHANNELS


def time_label(rate_symbol):
    return TIME_LABELS.get(rate_symbol, "t")


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    os.close(fd)
    try:
        fig.savefig(tmp, format=path.suffix.lstrip(".") or "svg",
                    metadata={"Date": None} if path.suffix == ".svg" else None)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    finally:
        plt.close(fig)


def plot_channel(curves, channel, path, rate_symbol="γ", title=None):
    """Plot ``channel`` for each ``(label, series)`` in ``curves``.

    The first curve is drawn thick and later ones thin, so a two-point sweep
    reads as a thick-versus-thin comparison.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    for i, (label, series) in enumerate(curves):
        ax.plot(series.t, series.channel(channel), lw=2.2 if i == 0 else 0.9, label=label)
    ax.set_xlabel(time_label(rate_symbol))
    ax.set_ylabel(CHANNEL_LABELS.get(channel, channel))
    if title:
        ax.set_title(title)
    if any(label for label, _ in curves):
        ax.legend()
    fig.tight_layout()
    _save(fig, path)
    return Path(path)


def plot_series(series, stem, channels=DEFAULT_CHANNELS, rate_symbol="γ", fmt="svg"):
    """One figure per channel, written as ``<stem>_<channel>.<fmt>``."""
    stem = Path(stem)
    return [
        plot_channel([("", series)], ch, stem.with_name(f"{stem.name}_{ch}.{fmt}"), rate_symbol)
        for ch in channels
    ]
