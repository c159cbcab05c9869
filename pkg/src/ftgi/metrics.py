"""Min-max normalisation and PSNR."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PsnrReport:
    psnr_db: float
    mse: float
    length: int

    @property
    def exact(self) -> bool:
        """True when reconstruction and truth agree sample for sample."""
        return math.isinf(self.psnr_db)


def minmax_normalize(x, rtol: float = 1e-9) -> np.ndarray:
    """Affinely map ``x`` onto [0, 1].

    Raises ``ValueError`` for constant input, including input whose range is
    below ``rtol`` of its largest magnitude (round-off only).
    """
    x = np.asarray(x, dtype=float)
    lo, hi = x.min(), x.max()
    span = hi - lo
    if not span > rtol * max(abs(lo), abs(hi)):
        raise ValueError("cannot normalise a constant sequence")
    return (x - lo) / span


def psnr(recon, truth, atol: float = 1e-9) -> PsnrReport:
    """PSNR of ``recon`` against ``truth``; both must already peak at 1.

    Uses the squared-error MSE and the truth's peak ``P = 1``.
    """
    recon = np.asarray(recon, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if recon.shape != truth.shape or recon.ndim != 1 or recon.size < 1:
        raise ValueError(f"length mismatch: {recon.shape} vs {truth.shape}")
    for name, arr in (("reconstruction", recon), ("truth", truth)):
        if abs(arr.max() - 1.0) > atol:
            raise ValueError(f"{name} is not normalised (max = {arr.max():.12g})")
    mse = float(np.mean((recon - truth) ** 2))
    peak = float(truth.max())
    db = math.inf if mse == 0 else 10.0 * math.log10(peak**2 / mse)
    return PsnrReport(db, mse, recon.size)


def normalized_psnr(recon, truth) -> PsnrReport:
    """Min-max normalise both sequences, then compute PSNR."""
    return psnr(minmax_normalize(recon), minmax_normalize(truth))
