"""Four-step phase-shift extraction and inverse-transform reconstruction."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detector import CSV_FMT, RawCapture

WINDOWS = ("rect", "raised-cosine")
DEFAULT_ROLLOFF = 0.2
IMAG_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided Fourier-series coefficients ``F_0 .. F_{n-1}``.

    With a noiseless capture ``F_k = (1/tau) * integral I(t) exp(-i 2 pi f_k t) dt``,
    i.e. the length-N DFT of the object at bin ``k`` divided by N.
    """

    coeffs: np.ndarray
    freq_step: float = 1.0
    duration: float = 1.0
    sample_rate: float = 800.0

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise ValueError("spectrum coefficients must be a non-empty 1-D array")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_freqs(self) -> int:
        return self.coeffs.size

    @property
    def freqs(self) -> np.ndarray:
        return np.arange(self.n_freqs) * self.freq_step

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.coeffs)

    @property
    def native_length(self) -> int:
        return int(round(self.sample_rate * self.duration))

    def replace(self, coeffs) -> "Spectrum":
        return Spectrum(coeffs, self.freq_step, self.duration, self.sample_rate)


@dataclass(frozen=True, eq=False)
class Reconstruction:
    """A reconstructed ghost image sampled at ``sample_rate``."""

    samples: np.ndarray
    sample_rate: float
    coverage: float = 1.0
    window: str = "rect"

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or not np.all(np.isfinite(samples)):
            raise ValueError("reconstruction samples must be a finite 1-D array")
        object.__setattr__(self, "samples", samples)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate

    def __len__(self):
        return self.samples.size


def extract_coefficient(D0, Dq, Dh, Dt, B: float, C: float) -> complex:
    """Complex coefficient from the detections at phases 0, pi/2, pi, 3pi/2.

    Returns ``[(D0 - Dh) + i (Dq - Dt)] / (2 B C)``. The mean level A cancels
    in both differences. Works elementwise on arrays.
    """
    if not B > 0 or not C > 0:
        raise ValueError("probe contrast B and detector response C must both be > 0")
    D0, Dq, Dh, Dt = (np.asarray(d, dtype=float) for d in (D0, Dq, Dh, Dt))
    out = ((D0 - Dh) + 1j * (Dq - Dt)) / (2.0 * B * C)
    return complex(out) if out.ndim == 0 else out


def extract_spectrum(capture: RawCapture) -> Spectrum:
    """Phase-shift every frequency patch of ``capture`` into a spectrum."""
    layout = capture.layout
    D = capture.by_frequency()
    C = capture.model.response(capture.duration)
    coeffs = extract_coefficient(D[:, 0], D[:, 1], D[:, 2], D[:, 3], layout.B, C)
    return Spectrum(np.atleast_1d(coeffs), layout.freq_step, capture.duration, layout.frame_rate)


def kept_count(coverage: float, n_freqs: int) -> int:
    """Number of lowest frequencies retained at ``coverage``.

    The kept set is ``k <= floor(coverage * (n_freqs - 1))``, so 100 %
    keeps all of them and 0+ keeps at least the DC term.
    """
    if not 0 < coverage <= 1:
        raise ValueError(f"coverage must lie in (0, 1], got {coverage}")
    # the small guard keeps e.g. 0.29 * 99 from flooring one short
    return int(math.floor(coverage * (n_freqs - 1) + 1e-9)) + 1


def spectral_window(n_kept: int, window: str = "rect", rolloff: float = DEFAULT_ROLLOFF) -> np.ndarray:
    """Weights for the kept coefficients ``0 .. n_kept - 1``.

    ``raised-cosine`` leaves the lower ``1 - rolloff`` of the kept band flat
    and tapers the top ``rolloff`` fraction with a half cosine.
    """
    if window not in WINDOWS:
        raise ValueError(f"unknown window {window!r}; expected one of {WINDOWS}")
    weights = np.ones(n_kept)
    if window == "rect" or rolloff <= 0:
        return weights
    if rolloff > 1:
        raise ValueError("rolloff is a fraction in [0, 1]")
    kmax = n_kept - 1
    start = (1.0 - rolloff) * kmax
    k = np.arange(n_kept)
    taper = k > start
    weights[taper] = 0.5 * (1 + np.cos(np.pi * (k[taper] - start) / (kmax - start + 1)))
    return weights


def assemble_hermitian(
    spec: Spectrum,
    coverage: float = 1.0,
    window: str = "rect",
    out_len: int | None = None,
    rolloff: float = DEFAULT_ROLLOFF,
) -> np.ndarray:
    """Two-sided, Hermitian-symmetric spectrum in standard FFT bin order.

    Bin 0 carries ``w_0 F_0``, bin k carries ``w_k F_k`` and bin ``out_len - k``
    carries ``w_k conj(F_k)`` for every kept ``k >= 1``; all other bins are 0.
    """
    n = spec.n_freqs
    out_len = spec.native_length if out_len is None else int(out_len)
    if out_len < 2 * n - 1:
        raise ValueError(f"out_len must be >= 2 * n_freqs - 1 = {2 * n - 1}, got {out_len}")
    n_kept = kept_count(coverage, n)
    weighted = spectral_window(n_kept, window, rolloff) * spec.coeffs[:n_kept]
    full = np.zeros(out_len, dtype=complex)
    full[0] = weighted[0].real
    if n_kept > 1:
        full[1:n_kept] = weighted[1:]
        full[out_len - n_kept + 1:] = np.conj(weighted[1:][::-1])
    return full


def reconstruct(
    spec: Spectrum,
    coverage: float = 1.0,
    window: str = "rect",
    out_len: int | None = None,
    rolloff: float = DEFAULT_ROLLOFF,
) -> Reconstruction:
    """Inverse-transform the assembled spectrum into the ghost image.

    ``R[m] = w_0 F_0 + 2 sum_k w_k Re(F_k exp(i 2 pi k m / out_len))``, which
    equals the object itself for band-limited input at full coverage on the
    native grid.
    """
    full = assemble_hermitian(spec, coverage, window, out_len, rolloff)
    values = np.fft.ifft(full) * full.size
    peak = np.max(np.abs(values))
    residue = np.max(np.abs(values.imag))
    if peak > 0 and residue > IMAG_RTOL * peak:
        raise FloatingPointError(f"inverse transform left imaginary residue {residue:.3g}")
    return Reconstruction(values.real, full.size / spec.duration, coverage, window)


def save_spectrum(path, spec: Spectrum) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["freq_hz", "re", "im", "magnitude"])
        for f, c in zip(spec.freqs, spec.coeffs):
            writer.writerow([CSV_FMT.format(v) for v in (f, c.real, c.imag, abs(c))])
    return path


def load_spectrum(path, duration: float = 1.0, sample_rate: float = 800.0) -> Spectrum:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: empty spectrum file")
    freqs = np.array([float(r["freq_hz"]) for r in rows])
    coeffs = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    step = freqs[1] - freqs[0] if freqs.size > 1 else 1.0
    return Spectrum(coeffs, step, duration, sample_rate)


def save_waveform(path, samples, sample_rate: float) -> Path:
    """Write a sampled waveform as ``t,value`` rows."""
    path = Path(path)
    samples = np.asarray(samples, dtype=float)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "value"])
        for m, v in enumerate(samples):
            writer.writerow([CSV_FMT.format(m / sample_rate), CSV_FMT.format(v)])
    return path


def load_waveform(path) -> tuple[np.ndarray, float]:
    """Read a ``t,value`` CSV; returns the samples and the sample rate."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    t = np.array([float(r["t"]) for r in rows])
    values = np.array([float(r["value"]) for r in rows])
    rate = 1.0 / (t[1] - t[0]) if t.size > 1 else 1.0
    return values, float(np.round(rate, 6))
