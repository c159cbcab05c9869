"""Static SVG figures. Output is byte-stable for identical inputs."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "ftgi"
    matplotlib.rcParams["svg.fonttype"] = "none"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    fig.clf()
    return path


def plot_reconstruction(path, recon, rate, truth=None, truth_rate=None, title=""):
    """Ghost image (solid) over the ground truth (dashed)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 2.5))
    recon = np.asarray(recon)
    ax.plot(np.arange(recon.size) / rate, recon, color="tab:blue", lw=1.2, label="ghost image")
    if truth is not None:
        truth = np.asarray(truth)
        ax.plot(np.arange(truth.size) / (truth_rate or rate), truth, "--", color="tab:red",
                lw=1.0, label="ground truth")
    ax.set_xlabel("t (s)")
    ax.set_ylabel("intensity (a.u.)")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)


def plot_spectrum(path, freqs, coeffs, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 2.5))
    ax.stem(freqs, np.abs(coeffs), basefmt=" ")
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel("|F_k|")
    ax.set_title(title)
    fig.tight_layout()
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)


def plot_traces(path, rate, traces: dict, title=""):
    """Several waveforms sharing one time axis."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 2.5))
    for label, values in traces.items():
        values = np.asarray(values)
        ax.plot(np.arange(values.size) / rate, values, lw=1.0, label=label)
    ax.set_xlabel("t (s)")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)
