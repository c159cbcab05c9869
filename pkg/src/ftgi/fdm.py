"""Frequency-division multiplexing over the FTGI spectrum.

Each channel's binary envelope is double-sideband amplitude modulated onto
its carrier; a DC bias equal to the channel count keeps the LED intensity
nonnegative. Decoding inverse-transforms only the positive-frequency band of
a channel, so ``2 |a(t)|`` recovers the envelope directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .spectral import Spectrum
from .waveforms import DEFAULT_DURATION, DEFAULT_RATE, BinaryCode, TimeObject, encode_word

DEFAULT_CARRIERS = (25.0, 75.0)
DEFAULT_BANDS = ((1.0, 49.0), (51.0, 99.0))


@dataclass(frozen=True)
class FdmChannel:
    """One FDM channel: carrier, inclusive band ``(f_lo, f_hi)`` and word."""

    carrier: float
    band: tuple[float, float]
    word: BinaryCode

    def __post_init__(self):
        lo, hi = (float(v) for v in self.band)
        object.__setattr__(self, "band", (lo, hi))
        if not lo <= self.carrier <= hi:
            raise ValueError(f"carrier {self.carrier} Hz outside its band [{lo}, {hi}]")


class DecodedChannel(NamedTuple):
    envelope: np.ndarray
    bits: str


def check_disjoint(channels: Sequence[FdmChannel]) -> None:
    bands = sorted(ch.band for ch in channels)
    for (_, hi), (lo, _) in zip(bands, bands[1:]):
        if lo <= hi:
            raise ValueError(f"channel bands overlap: ... {hi}] and [{lo} ...")


def modulate(
    envelopes: Sequence[np.ndarray],
    carriers: Sequence[float],
    rate: float = DEFAULT_RATE,
    return_scale: bool = False,
):
    """Bias + sum of carrier-modulated envelopes, scaled to peak 1.

    Envelopes must lie in [0, 1]. With ``return_scale`` the factor that was
    applied (``1 / raw peak``) is returned as well.
    """
    if len(envelopes) != len(carriers):
        raise ValueError("need one carrier per envelope")
    if not envelopes:
        raise ValueError("need at least one channel")
    n = len(envelopes[0])
    t = np.arange(n) / rate
    bias = float(len(envelopes))
    raw = np.full(n, bias)
    for env, fc in zip(envelopes, carriers):
        env = np.asarray(env, dtype=float)
        if env.shape != (n,):
            raise ValueError("all envelopes must share one length")
        if env.min() < -1e-12 or env.max() > 1 + 1e-12:
            raise ValueError("envelopes must lie in [0, 1]")
        raw += env * np.cos(2 * np.pi * np.mod(fc * np.arange(n), rate) / rate)
    if raw.min() < -1e-12:
        raise ValueError("negative intensity after bias")
    scale = 1.0 / raw.max()
    obj = TimeObject(np.maximum(raw, 0.0) * scale, rate)
    return (obj, scale) if return_scale else obj


def fdm_encode(
    channels: Sequence[FdmChannel],
    duration: float = DEFAULT_DURATION,
    rate: float = DEFAULT_RATE,
    return_scale: bool = False,
):
    """Render every channel's word and combine them into one FDM intensity."""
    check_disjoint(channels)
    envelopes = [encode_word(ch.word, duration, rate).samples for ch in channels]
    return modulate(envelopes, [ch.carrier for ch in channels], rate, return_scale)


def slice_band(spec: Spectrum, f_lo: float, f_hi: float) -> Spectrum:
    """Copy of ``spec`` with every coefficient outside ``[f_lo, f_hi]`` zeroed."""
    if f_lo > f_hi:
        raise ValueError(f"inverted band [{f_lo}, {f_hi}]")
    fmax = spec.freqs[-1]
    if f_lo < 0 or f_hi > fmax + 1e-9:
        raise ValueError(f"band [{f_lo}, {f_hi}] outside the spectrum 0..{fmax} Hz")
    f = spec.freqs
    keep = (f >= f_lo - 1e-9) & (f <= f_hi + 1e-9)
    return spec.replace(np.where(keep, spec.coeffs, 0))


def analytic_band(spec: Spectrum, f_lo: float, f_hi: float, out_len: int | None = None) -> np.ndarray:
    """Complex band signal from the one-sided band, no conjugate bins added."""
    band = slice_band(spec, f_lo, f_hi)
    out_len = spec.native_length if out_len is None else int(out_len)
    if out_len < spec.n_freqs:
        raise ValueError(f"out_len must be >= {spec.n_freqs}")
    full = np.zeros(out_len, dtype=complex)
    full[: spec.n_freqs] = band.coeffs
    return np.fft.ifft(full) * out_len


def fdm_decode(spec: Spectrum, channel: FdmChannel, out_len: int | None = None) -> DecodedChannel:
    """Recover a channel's envelope and bits from the full spectrum.

    Bits are read at the bit-slot centres and thresholded at half of the
    largest sampled envelope value. A band with no energy decodes to all
    zeros.
    """
    a = analytic_band(spec, *channel.band, out_len=out_len)
    envelope = 2.0 * np.abs(a)
    n_bits = int(round(channel.word.bit_rate * spec.duration))
    centres = (np.arange(n_bits) + 0.5) / channel.word.bit_rate
    idx = np.minimum(np.rint(centres / spec.duration * envelope.size).astype(int), envelope.size - 1)
    sampled = envelope[idx]
    top = sampled.max()
    if top <= 0:
        return DecodedChannel(envelope, "0" * n_bits)
    bits = "".join("1" if v >= 0.5 * top else "0" for v in sampled)
    return DecodedChannel(envelope, bits)


def default_channels(
    bit_rate: float = 5.0,
    scheme: str = "rz-gauss",
    words: Sequence[str] = ("1110010110", "0110100111"),
    carriers: Sequence[float] = DEFAULT_CARRIERS,
    bands: Sequence[tuple[float, float]] = DEFAULT_BANDS,
    duration: float = DEFAULT_DURATION,
    gauss_fwhm: float = 0.5,
) -> list[FdmChannel]:
    """Channels carrying ``words`` cut or repeated to the bit budget."""
    n_bits = int(round(bit_rate * duration))
    channels = []
    for word, fc, band in zip(words, carriers, bands):
        bits = (word * (n_bits // len(word) + 1))[:n_bits]
        channels.append(FdmChannel(fc, tuple(band), BinaryCode(bits, scheme, bit_rate, gauss_fwhm)))
    return channels
