"""Harmonic-candidate detection by progressive peak picking.

Starting from an initial F0 estimate, candidate p is the amplitude maximum
within +-10 Hz of p times the running fundamental estimate; after each hit
the running estimate is updated to omega_p / p so later candidates track a
slightly mistuned or drifting fundamental. The search stops at the first p
whose neighbourhood would cross the Nyquist frequency.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .spectral import FrameAnalysis

SEARCH_HALF_WIDTH_HZ = 10.0


@dataclass(frozen=True)
class HarmonicCandidate:
    """One detected spectral peak near an expected harmonic position."""

    index: int
    omega_hz: float
    bin: int
    amplitude_db: float


def detect_candidates(frame: FrameAnalysis, f0_initial: float) -> list[HarmonicCandidate]:
    """Detect harmonic candidates up to the Nyquist frequency.

    Ties in the window argmax resolve to the lowest bin. Returns an empty
    list when not even the first neighbourhood fits below Nyquist. In the
    (pathological) event that the running estimate drifts enough to make
    detected frequencies non-monotone, candidates are re-sorted by
    frequency; their detection indices are preserved.
    """
    if f0_initial <= 0:
        raise ValidationError(f"f0_initial must be positive, got {f0_initial}")
    if frame.degenerate:
        raise ValidationError("cannot pick candidates on a degenerate frame")
    nyquist = frame.nyquist_hz
    amp = frame.amplitude_db
    nbins = amp.size
    out: list[HarmonicCandidate] = []
    omega0 = float(f0_initial)
    p = 1
    while p * omega0 + SEARCH_HALF_WIDTH_HZ <= nyquist:
        lo = int(np.ceil((p * omega0 - SEARCH_HALF_WIDTH_HZ) / frame.bin_hz))
        hi = int(np.floor((p * omega0 + SEARCH_HALF_WIDTH_HZ) / frame.bin_hz))
        lo = max(lo, 0)
        hi = min(hi, nbins - 1)
        if lo > hi:
            break
        k = lo + int(np.argmax(amp[lo:hi + 1]))
        omega_p = k * frame.bin_hz
        out.append(HarmonicCandidate(index=p, omega_hz=omega_p, bin=k,
                                     amplitude_db=float(amp[k])))
        omega0 = omega_p / p
        if omega0 <= 0:
            break
        p += 1
    omegas = [c.omega_hz for c in out]
    if any(b <= a for a, b in zip(omegas, omegas[1:])):
        out.sort(key=lambda c: c.omega_hz)
    return out


def refine_f0(frame: FrameAnalysis, fundamental: HarmonicCandidate) -> float:
    """Sub-bin fundamental estimate via parabolic interpolation of the
    amplitude spectrum (in dB) around the fundamental candidate's peak.

    Falls back to the plain bin frequency at spectrum edges or on a flat
    top. Used to derive the pitch-period delay for the cross-period phase
    analysis, where a raw bin-quantised F0 would leak into the phase
    residuals at high harmonics.
    """
    k = fundamental.bin
    amp = frame.amplitude_db
    if 0 < k < amp.size - 1:
        denom = amp[k - 1] - 2.0 * amp[k] + amp[k + 1]
        if denom != 0.0:
            delta = 0.5 * (amp[k - 1] - amp[k + 1]) / denom
            if abs(delta) <= 1.0:
                return float((k + delta) * frame.bin_hz / fundamental.index)
    return fundamental.omega_hz / fundamental.index
