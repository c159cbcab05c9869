"""Single-shot long-exposure bucket detection.

One exposure integrates ``I(t) * S_k,phi(t)`` over the whole object on every
sub-patch. Integration is a Riemann sum on the shared frame grid, which is
exact for the integer-Hz products involved.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .probing import PatternLayout, from_grid, probe_matrix, to_grid
from .waveforms import TimeObject

CSV_FMT = "{:.12g}"


@dataclass(frozen=True)
class DetectorModel:
    """Detector response and noise chain.

    Noise is applied in the order shot -> read (Gaussian) -> ADC. Each
    measurement draws from its own substream keyed by ``(seed, index)`` so
    results do not depend on evaluation order.

    Attributes
    ----------
    gain : float
        Response constant; the phase-shift normalisation uses ``gain * duration``.
    gaussian_sigma : float
        Additive read-noise standard deviation, in units of D.
    shot_scale : float or None
        Photon count per unit of D; enables Poisson shot noise.
    adc_bits : int or None
        Quantization depth over ``[0, adc_full_scale]``.
    adc_full_scale : float or None
        ADC range; defaults to ``gain * duration`` (object and probe at 1).
    seed : int
        Root seed of the noise substreams.
    """

    gain: float = 1.0
    gaussian_sigma: float = 0.0
    shot_scale: float | None = None
    adc_bits: int | None = None
    adc_full_scale: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.gain > 0:
            raise ValueError("gain must be > 0")
        if self.gaussian_sigma < 0:
            raise ValueError("gaussian_sigma must be >= 0")
        if self.shot_scale is not None and not self.shot_scale > 0:
            raise ValueError("shot_scale must be > 0 when set")
        if self.adc_bits is not None and not 1 <= self.adc_bits <= 32:
            raise ValueError("adc_bits must lie in 1..32 when set")

    @property
    def noiseless(self) -> bool:
        return self.gaussian_sigma == 0 and self.shot_scale is None and self.adc_bits is None

    def response(self, duration: float) -> float:
        """Effective detector constant ``C = gain * duration``."""
        return self.gain * duration


@dataclass(frozen=True, eq=False)
class RawCapture:
    """Detected values of one exposure laid out on the sub-patch grid."""

    values: np.ndarray
    layout: PatternLayout = field(default_factory=PatternLayout)
    duration: float = 1.0
    model: DetectorModel = field(default_factory=DetectorModel)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.layout.grid_shape:
            raise ValueError(
                f"capture shape {values.shape} does not match layout grid {self.layout.grid_shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("capture values must be finite")
        object.__setattr__(self, "values", values)

    def by_frequency(self) -> np.ndarray:
        """Detected values as an (n_freqs, 4) array in phase order."""
        return from_grid(self.layout, self.values)


def apply_noise(clean, model: DetectorModel, duration: float = 1.0) -> np.ndarray:
    """Run ``clean`` bucket values through the detector noise chain."""
    clean = np.asarray(clean, dtype=float)
    if model.noiseless:
        return clean.copy()
    flat = clean.ravel()
    out = np.empty_like(flat)
    for i, value in enumerate(flat):
        rng = np.random.default_rng([model.seed, i])
        if model.shot_scale is not None:
            value = rng.poisson(max(value, 0.0) * model.shot_scale) / model.shot_scale
        if model.gaussian_sigma > 0:
            value = value + rng.normal(0.0, model.gaussian_sigma)
        out[i] = value
    if model.adc_bits is not None:
        full = model.adc_full_scale or model.response(duration)
        lsb = full / (2**model.adc_bits - 1)
        out = np.round(np.clip(out, 0.0, full) / lsb) * lsb
    return out.reshape(clean.shape)


def integrate(samples, probes, model: DetectorModel, rate: float) -> np.ndarray:
    """``gain / rate * sum_m I[m] S[..., m]`` over the last axis of ``probes``."""
    return model.gain / rate * (np.asarray(probes) @ np.asarray(samples, dtype=float))


def expose(
    obj: TimeObject,
    layout: PatternLayout | None = None,
    model: DetectorModel | None = None,
) -> RawCapture:
    """Simulate one single-shot exposure of ``obj`` through every sub-patch."""
    layout = layout or PatternLayout()
    model = model or DetectorModel()
    if not np.isclose(obj.sample_rate, layout.frame_rate, rtol=1e-12, atol=0):
        raise ValueError(
            f"object sampled at {obj.sample_rate} Hz but patterns run at {layout.frame_rate} Hz"
        )
    probes = probe_matrix(layout, len(obj))
    clean = integrate(obj.samples, probes, model, obj.sample_rate)
    values = apply_noise(to_grid(layout, clean), model, obj.duration)
    return RawCapture(values, layout, obj.duration, model)


def save_capture(path, capture: RawCapture) -> Path:
    """Write the capture grid as a headerless numeric CSV, row-major."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in capture.values:
            writer.writerow([CSV_FMT.format(v) for v in row])
    return path


def load_capture(
    path,
    layout: PatternLayout | None = None,
    model: DetectorModel | None = None,
    duration: float = 1.0,
) -> RawCapture:
    """Read a capture written by :func:`save_capture`.

    The CSV only carries the values, so the layout, detector and duration used
    at acquisition time must be supplied again (defaults match the defaults
    of :func:`expose`).
    """
    with Path(path).open(newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    return RawCapture(np.array(rows), layout or PatternLayout(), duration, model or DetectorModel())
