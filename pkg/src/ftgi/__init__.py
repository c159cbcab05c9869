"""Fourier temporal ghost imaging (FTGI) simulation and reconstruction."""

__version__ = "0.1.0"

from .detector import DetectorModel, RawCapture, expose, load_capture, save_capture
from .estimators import FTGIAcquisition, FTGIReconstructor, TGIAcquisition, TGIReconstructor
from .fdm import FdmChannel, fdm_decode, fdm_encode, modulate, slice_band
from .metrics import PsnrReport, minmax_normalize, normalized_psnr, psnr
from .probing import PHASES, PatternLayout, probe_value, render_frame, subpatch_index
from .spectral import (
    Reconstruction,
    Spectrum,
    assemble_hermitian,
    extract_coefficient,
    extract_spectrum,
    reconstruct,
)
from .tgi import RandomProbeSet, make_random_probes, tgi_correlate, tgi_expose
from .waveforms import BinaryCode, TimeObject, encode_word, make_basic_wave, make_sinusoid

__all__ = [
    "BinaryCode", "DetectorModel", "FTGIAcquisition", "FTGIReconstructor", "FdmChannel",
    "PHASES", "PatternLayout", "PsnrReport", "RandomProbeSet", "RawCapture", "Reconstruction",
    "Spectrum", "TGIAcquisition", "TGIReconstructor", "TimeObject", "assemble_hermitian",
    "encode_word", "expose", "extract_coefficient", "extract_spectrum", "fdm_decode",
    "fdm_encode", "load_capture", "make_basic_wave", "make_random_probes", "make_sinusoid",
    "minmax_normalize", "modulate", "normalized_psnr", "probe_value", "psnr", "reconstruct",
    "render_frame", "save_capture", "slice_band", "subpatch_index", "tgi_correlate",
    "tgi_expose",
]
