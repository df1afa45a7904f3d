"""Pitch-synchronous windowing and spectral primitives.

A frame is a pitch-proportional segment (four periods by default) weighted
by a symmetric Hanning window whose centre falls exactly on a sample. The
frame analysis returns the zero-padded DFT as amplitude in dB, the phase
spectrum unwrapped along frequency, and the group delay obtained by a
first-order finite difference of that phase.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

TWO_PI = 2.0 * np.pi

AMPLITUDE_FLOOR_DB = -300.0

# Peaks are searched within +-10 Hz of each predicted harmonic position, so
# the DFT grid must be a good deal finer than that neighbourhood.
MAX_BIN_HZ = 2.5


def wrap_phase(x: np.ndarray | float) -> np.ndarray | float:
    """Wrap an angle (or array of angles) into (-pi, pi]."""
    return x - TWO_PI * np.ceil((x - np.pi) / TWO_PI)


def unwrap_phase(raw: np.ndarray) -> np.ndarray:
    """Unwrap a phase spectrum along frequency.

    Successive differences of the result always lie in (-pi, pi]; the first
    element is kept as-is.
    """
    if raw.size <= 1:
        return raw.copy()
    steps = wrap_phase(np.diff(raw))
    out = np.empty_like(raw)
    out[0] = raw[0]
    out[1:] = raw[0] + np.cumsum(steps)
    return out


@dataclass(frozen=True)
class FrameSpec:
    """Placement of one analysis frame.

    The window length is ``window_periods`` pitch periods rounded to the
    nearest sample, forced odd (one sample is added when even) so that the
    window is symmetric about ``center_sample``, and never below 16 samples.
    """

    center_sample: int
    f0: float
    sample_rate: int
    window_periods: int = 4

    def __post_init__(self) -> None:
        if self.f0 <= 0:
            raise ValidationError(f"f0 must be positive, got {self.f0}")
        if self.sample_rate <= 0:
            raise ValidationError("sample_rate must be positive")
        if self.window_periods < 1:
            raise ValidationError("window_periods must be >= 1")

    @property
    def window_length(self) -> int:
        n = int(round(self.window_periods * self.sample_rate / self.f0))
        n = max(n, 16)
        if n % 2 == 0:
            n += 1
        return n


@dataclass(frozen=True)
class FrameAnalysis:
    """Spectra of one analysis frame.

    All per-bin arrays cover bins 0 .. dft_size/2 (inclusive). Group delay
    is in seconds; for a symmetric window on a clean tone it equals the
    window-centre delay (N_w - 1) / (2 fs) at every spectral peak.
    """

    amplitude_db: np.ndarray
    unwrapped_phase: np.ndarray
    group_delay: np.ndarray
    bin_hz: float
    f0_refined: float
    dft_size: int
    window_length: int
    sample_rate: int
    degenerate: bool = False
    _lin_amplitude: np.ndarray = field(repr=False, default=None)

    @property
    def n_bins(self) -> int:
        return self.dft_size // 2 + 1

    @property
    def nyquist_hz(self) -> float:
        return self.sample_rate / 2.0


def dft_size_for(window_length: int, sample_rate: int) -> int:
    """Smallest power of two >= max(8 * N_w, fs / 2.5).

    The second term guarantees a bin spacing of at most 2.5 Hz so that the
    +-10 Hz peak-search neighbourhood always spans several bins.
    """
    target = max(8 * window_length, int(np.ceil(sample_rate / MAX_BIN_HZ)))
    n = 1
    while n < target:
        n *= 2
    return n


def extract_frame(samples: np.ndarray, spec: FrameSpec) -> np.ndarray:
    """Cut and window one frame centred on ``spec.center_sample``.

    Samples outside the signal are treated as zero, so frames near the
    edges are silently zero-extended.
    """
    n = spec.window_length
    half = (n - 1) // 2
    lo = spec.center_sample - half
    hi = spec.center_sample + half + 1
    seg = np.zeros(n, dtype=np.float64)
    a = max(lo, 0)
    b = min(hi, len(samples))
    if a < b:
        seg[a - lo:b - lo] = samples[a:b]
    return seg * np.hanning(n)


def analyze_frame(windowed: np.ndarray, sample_rate: int, f0: float) -> FrameAnalysis:
    """Compute amplitude, unwrapped phase and group-delay spectra.

    The windowed samples are zero-padded to the end of the DFT buffer, so
    phases are referenced to the first sample of the frame. Amplitude is
    floored at -300 dB to keep dB arithmetic finite. An all-zero frame
    yields floor amplitude, zero phase and zero group delay with the
    ``degenerate`` flag set.
    """
    windowed = np.asarray(windowed, dtype=np.float64)
    if windowed.size == 0:
        raise ValidationError("empty frame")
    nw = windowed.size
    dft = dft_size_for(nw, sample_rate)
    bin_hz = sample_rate / dft
    if not np.any(windowed):
        nbins = dft // 2 + 1
        zeros = np.zeros(nbins)
        return FrameAnalysis(
            amplitude_db=np.full(nbins, AMPLITUDE_FLOOR_DB),
            unwrapped_phase=zeros,
            group_delay=zeros.copy(),
            bin_hz=bin_hz,
            f0_refined=f0,
            dft_size=dft,
            window_length=nw,
            sample_rate=sample_rate,
            degenerate=True,
            _lin_amplitude=np.zeros(nbins),
        )
    spectrum = np.fft.rfft(windowed, dft)
    lin = np.abs(spectrum)
    amp_db = 20.0 * np.log10(np.maximum(lin, 10.0 ** (AMPLITUDE_FLOOR_DB / 20.0)))
    phase = unwrap_phase(np.angle(spectrum))
    gd = np.empty_like(phase)
    gd[:-1] = -np.diff(phase) / (TWO_PI * bin_hz)
    gd[-1] = gd[-2]
    return FrameAnalysis(
        amplitude_db=amp_db,
        unwrapped_phase=phase,
        group_delay=gd,
        bin_hz=bin_hz,
        f0_refined=f0,
        dft_size=dft,
        window_length=nw,
        sample_rate=sample_rate,
        degenerate=False,
        _lin_amplitude=lin,
    )
