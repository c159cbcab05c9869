"""Phase-shifting sinusoidal probes and the single-shot sub-patch layout.

Each frequency index ``k`` owns one patch of the DMD/sensor plane; the patch
is split 2x2 into the four phase sub-patches::

    +------+-------+
    |  0   | pi/2  |
    +------+-------+
    |  pi  | 3pi/2 |
    +------+-------+

Patches are laid out row-major in frequency order, so with the default
10x10 grid the DC patch sits top-left and 99 Hz bottom-right.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

PHASES = (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi)


@dataclass(frozen=True)
class PatternLayout:
    """Probe design shared by the simulated DMD and the reconstruction.

    The probe on sub-patch ``(k, phi)`` is ``A + B cos(2 pi k freq_step t + phi)``.
    """

    n_freqs: int = 100
    freq_step: float = 1.0
    A: float = 0.5
    B: float = 0.5
    patch_grid: tuple[int, int] = (10, 10)
    frame_rate: float = 800.0
    quantize_levels: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "patch_grid", tuple(int(v) for v in self.patch_grid))
        if self.n_freqs < 1:
            raise ValueError("n_freqs must be >= 1")
        if self.freq_step <= 0 or self.frame_rate <= 0:
            raise ValueError("freq_step and frame_rate must be positive")
        if not (self.A >= self.B >= 0) or self.A + self.B > 1 + 1e-12:
            raise ValueError(
                f"probe levels need A >= B >= 0 and A + B <= 1 (got A={self.A}, B={self.B})"
            )
        rows, cols = self.patch_grid
        if rows * cols != self.n_freqs:
            raise ValueError(f"patch grid {rows}x{cols} does not hold {self.n_freqs} frequencies")
        if self.max_freq >= self.frame_rate / 2:
            raise ValueError(
                f"highest probe frequency {self.max_freq} Hz must stay below "
                f"frame_rate/2 = {self.frame_rate / 2} Hz"
            )
        if self.quantize_levels is not None and self.quantize_levels < 2:
            raise ValueError("quantize_levels must be >= 2 when set")

    @classmethod
    def square(cls, n_freqs: int = 100, **kwargs) -> "PatternLayout":
        """Layout with the most nearly square patch grid for ``n_freqs``."""
        rows = int(np.floor(np.sqrt(n_freqs)))
        while n_freqs % rows:
            rows -= 1
        return cls(n_freqs=n_freqs, patch_grid=(rows, n_freqs // rows), **kwargs)

    @property
    def phases(self) -> tuple[float, ...]:
        return PHASES

    @property
    def freqs(self) -> np.ndarray:
        return np.arange(self.n_freqs) * self.freq_step

    @property
    def max_freq(self) -> float:
        return (self.n_freqs - 1) * self.freq_step

    @property
    def grid_shape(self) -> tuple[int, int]:
        rows, cols = self.patch_grid
        return 2 * rows, 2 * cols

    @property
    def n_measurements(self) -> int:
        return 4 * self.n_freqs


def phase_index(phase) -> int:
    """Map a phase angle to its position 0..3 in the 4-step set."""
    for i, p in enumerate(PHASES):
        if abs(float(phase) - p) < 1e-9:
            return i
    raise ValueError(f"phase {phase!r} is not one of 0, pi/2, pi, 3pi/2")


def _check_k(layout: PatternLayout, k) -> int:
    if int(k) != k or not 0 <= k < layout.n_freqs:
        raise ValueError(f"frequency index {k!r} outside 0..{layout.n_freqs - 1}")
    return int(k)


def quantize(values, levels: int):
    """Uniform grayscale quantization of values in [0, 1]."""
    scale = levels - 1
    return np.round(np.asarray(values, dtype=float) * scale) / scale


def _cos_arg(layout: PatternLayout, k, t):
    # reduce k*f*t modulo one cycle before scaling by 2 pi
    return 2 * np.pi * np.mod(np.multiply.outer(np.asarray(k) * layout.freq_step, t), 1.0)


def probe_value(layout: PatternLayout, k: int, phase: float, t: float) -> float:
    """Probe transmission ``A + B cos(2 pi f_k t + phase)`` at time ``t``."""
    k = _check_k(layout, k)
    q = phase_index(phase)
    value = layout.A + layout.B * np.cos(_cos_arg(layout, k, float(t)) + PHASES[q])
    if layout.quantize_levels:
        value = quantize(value, layout.quantize_levels)
    return float(value)


@lru_cache(maxsize=16)
def _probe_matrix(layout: PatternLayout, n_samples: int) -> np.ndarray:
    # frame index m counts in integer steps, so (k * step * m) / rate is exact
    # for integer-Hz grids.
    m = np.arange(n_samples)
    cycles = np.mod(np.multiply.outer(np.arange(layout.n_freqs) * layout.freq_step, m), layout.frame_rate)
    arg = 2 * np.pi * cycles / layout.frame_rate
    probes = layout.A + layout.B * np.cos(arg[:, None, :] + np.asarray(PHASES)[None, :, None])
    if layout.quantize_levels:
        probes = quantize(probes, layout.quantize_levels)
    probes.setflags(write=False)
    return probes


def probe_matrix(layout: PatternLayout, n_samples: int) -> np.ndarray:
    """All probe sequences on the frame grid.

    Returns
    -------
    ndarray of shape (n_freqs, 4, n_samples)
        ``out[k, q, m]`` is the probe of frequency ``k`` and phase ``PHASES[q]``
        at frame ``m``. The array is cached and read-only.
    """
    return _probe_matrix(layout, int(n_samples))


def subpatch_index(layout: PatternLayout, k: int, phase: float) -> tuple[int, int]:
    """(row, col) of the sub-patch measuring frequency ``k`` at ``phase``."""
    k = _check_k(layout, k)
    q = phase_index(phase)
    pr, pc = divmod(k, layout.patch_grid[1])
    return 2 * pr + q // 2, 2 * pc + q % 2


def subpatch_grid_indices(layout: PatternLayout) -> tuple[np.ndarray, np.ndarray]:
    """Row and column index arrays of shape (n_freqs, 4) for every (k, phase)."""
    k = np.arange(layout.n_freqs)[:, None]
    q = np.arange(4)[None, :]
    pr, pc = np.divmod(k, layout.patch_grid[1])
    return 2 * pr + q // 2, 2 * pc + q % 2


def to_grid(layout: PatternLayout, values) -> np.ndarray:
    """Scatter an (n_freqs, 4) array into the sub-patch grid."""
    values = np.asarray(values)
    rows, cols = subpatch_grid_indices(layout)
    grid = np.zeros(layout.grid_shape, dtype=values.dtype)
    grid[rows, cols] = values
    return grid


def from_grid(layout: PatternLayout, grid) -> np.ndarray:
    """Gather an (n_freqs, 4) array from the sub-patch grid."""
    grid = np.asarray(grid)
    if grid.shape != layout.grid_shape:
        raise ValueError(f"grid shape {grid.shape} does not match layout {layout.grid_shape}")
    rows, cols = subpatch_grid_indices(layout)
    return grid[rows, cols]


def render_frame(layout: PatternLayout, frame_index: int, duration: float = 1.0) -> np.ndarray:
    """Probe values of every sub-patch at frame ``frame_index``."""
    n_frames = int(round(layout.frame_rate * duration))
    if not 0 <= frame_index < n_frames:
        raise ValueError(f"frame_index {frame_index} outside 0..{n_frames - 1}")
    probes = probe_matrix(layout, n_frames)[:, :, frame_index]
    return to_grid(layout, probes)
