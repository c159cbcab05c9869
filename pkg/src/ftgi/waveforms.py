"""Time objects: sampled, nonnegative intensity waveforms.

All generators evaluate the ideal shape at the sample instants ``m / rate``
(left-closed, no band-limiting), which is what an AWG-driven LED emits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_RATE = 800.0
DEFAULT_DURATION = 1.0

SCHEMES = ("nrz-square", "rz-square", "rz-gauss")
SHAPES = ("square", "sawtooth", "pulse")


@dataclass(frozen=True, eq=False)
class TimeObject:
    """A nonnegative intensity waveform sampled at ``sample_rate``.

    Parameters
    ----------
    samples : array-like of shape (n_samples,)
        Intensity values in arbitrary linear units.
    sample_rate : float
        Sampling rate in Hz.
    """

    samples: np.ndarray
    sample_rate: float = DEFAULT_RATE

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("a time object needs a 1-D array of at least 2 samples")
        if not np.all(np.isfinite(samples)):
            raise ValueError("time object samples must be finite")
        if np.any(samples < 0):
            raise ValueError("light intensity cannot be negative")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class BinaryCode:
    """A bit string together with its line code and bit rate."""

    bits: str
    scheme: str = "nrz-square"
    bit_rate: float = 10.0
    gauss_fwhm: float = field(default=0.5, compare=False)

    def __post_init__(self):
        bits = "".join(str(b) for b in self.bits) if not isinstance(self.bits, str) else self.bits
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"bits must be a non-empty string of 0/1, got {self.bits!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown line code {self.scheme!r}; expected one of {SCHEMES}")
        if self.bit_rate <= 0:
            raise ValueError("bit_rate must be positive")
        if not 0 < self.gauss_fwhm <= 1:
            raise ValueError("gauss_fwhm is a fraction of the bit period in (0, 1]")
        object.__setattr__(self, "bits", bits)

    @property
    def bit_period(self) -> float:
        return 1.0 / self.bit_rate


def _n_samples(duration: float, rate: float) -> int:
    if duration <= 0 or rate <= 0:
        raise ValueError("duration and rate must be positive")
    n = int(round(duration * rate))
    if n < 2:
        raise ValueError("duration * rate must give at least 2 samples")
    return n


def _cycle_fraction(freq: float, n: int, rate: float) -> np.ndarray:
    # reduce freq * m modulo rate before dividing so integer grids stay exact
    return np.mod(freq * np.arange(n), rate) / rate


def make_sinusoid(
    freq: float,
    duration: float = DEFAULT_DURATION,
    rate: float = DEFAULT_RATE,
    offset: float = 1.0,
    amplitude: float = 1.0,
) -> TimeObject:
    """Raised cosine ``offset + amplitude * cos(2 pi freq t)``."""
    if freq < 0:
        raise ValueError("freq must be nonnegative")
    if freq >= rate / 2:
        raise ValueError(f"freq {freq} Hz aliases at rate {rate} Hz (must be < {rate / 2})")
    if amplitude < 0 or offset < amplitude:
        raise ValueError("need offset >= amplitude >= 0 to keep the intensity nonnegative")
    n = _n_samples(duration, rate)
    phase = 2 * np.pi * _cycle_fraction(freq, n, rate)
    samples = offset + amplitude * np.cos(phase)
    # cos round-off can dip a hair below zero when offset == amplitude
    return TimeObject(np.maximum(samples, 0.0), rate)


def make_basic_wave(
    shape: str,
    freq: float,
    duty: float = 0.1,
    duration: float = DEFAULT_DURATION,
    rate: float = DEFAULT_RATE,
) -> TimeObject:
    """Unit-amplitude square, sawtooth or pulse wave with values in [0, 1].

    ``duty`` only affects the pulse wave; the square wave is always 50 %.
    """
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")
    if not 0 < duty <= 1:
        raise ValueError("duty must lie in (0, 1]")
    if freq < 1.0 / duration - 1e-12:
        raise ValueError("freq must be at least one period per duration")
    if freq >= rate / 2:
        raise ValueError(f"freq {freq} Hz aliases at rate {rate} Hz")
    frac = _cycle_fraction(freq, _n_samples(duration, rate), rate)
    if shape == "square":
        samples = (frac < 0.5).astype(float)
    elif shape == "sawtooth":
        samples = frac
    else:
        samples = (frac < duty).astype(float)
    return TimeObject(samples, rate)


def gaussian_pulse(t, center: float, fwhm: float) -> np.ndarray:
    """Unit-peak Gaussian with the given full width at half maximum."""
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    return np.exp(-0.5 * ((np.asarray(t, dtype=float) - center) / sigma) ** 2)


def encode_word(
    code: BinaryCode,
    duration: float = DEFAULT_DURATION,
    rate: float = DEFAULT_RATE,
) -> TimeObject:
    """Render a binary word with its line code; the result peaks at 1.

    NRZ holds the bit level over the whole slot. RZ-square is high over the
    centred half of a '1' slot. RZ-Gauss places a Gaussian of FWHM
    ``code.gauss_fwhm * bit_period`` at the centre of each '1' slot; pulses
    are summed untruncated so the waveform stays smooth.
    """
    n_bits = len(code.bits)
    if abs(n_bits / code.bit_rate - duration) > 1e-9 * max(duration, 1.0):
        raise ValueError(
            f"{n_bits} bits at {code.bit_rate} bit/s last {n_bits / code.bit_rate} s, "
            f"not the requested {duration} s"
        )
    n = _n_samples(duration, rate)
    m = np.arange(n)
    slot_pos = m * code.bit_rate / rate
    slot = np.minimum(np.floor(slot_pos + 1e-9).astype(int), n_bits - 1)
    within = slot_pos - slot
    bits = np.array([b == "1" for b in code.bits])

    if code.scheme == "nrz-square":
        samples = bits[slot].astype(float)
    elif code.scheme == "rz-square":
        samples = (bits[slot] & (within >= 0.25) & (within < 0.75)).astype(float)
    else:
        t = m / rate
        fwhm = code.gauss_fwhm * code.bit_period
        samples = np.zeros(n)
        for i in np.flatnonzero(bits):
            samples += gaussian_pulse(t, (i + 0.5) * code.bit_period, fwhm)
    peak = samples.max()
    if peak > 0:
        samples = samples / peak
    return TimeObject(samples, rate)
