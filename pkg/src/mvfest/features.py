"""Harmonicity measurements at spectral-peak candidates.

Three measurements characterise how harmonic a candidate is:

* ``feature_as``: amplitude contrast (dB) between the candidate's main lobe
  and the remainder of a one-harmonic-wide span around it, a local
  harmonic-to-noise ratio.
* ``feature_ihpc``: group-delay difference between two consecutive
  candidates, expressed in pitch periods. A symmetric window puts the group
  delay of every true harmonic at the window centre, so the difference is
  near zero for harmonics and spreads widely for noise peaks.
* ``feature_icpc``: change, across consecutive candidates, of the
  differential phase between a frame and the same frame one pitch period
  later. A periodic signal repeats after one period, so the differential
  phase vanishes at true harmonics.

All three are invariant to scaling the input signal: amplitude contrast is
a dB difference, and phases do not depend on gain.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .harmonics import HarmonicCandidate
from .spectral import TWO_PI, FrameAnalysis, FrameSpec, analyze_frame, extract_frame, wrap_phase


@dataclass(frozen=True)
class DifferentialPhase:
    """Per-bin phase difference between a frame and its one-period delay.

    Values are wrapped to (-pi, pi]; near zero at true harmonic bins once
    the delay's linear phase (including the fractional-sample residual) has
    been compensated.
    """

    delta_phi: np.ndarray
    bin_hz: float

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.delta_phi)):
            raise ValidationError("differential phase contains non-finite values")


def feature_as(frame: FrameAnalysis, cand: HarmonicCandidate, omega0: float) -> float | None:
    """Amplitude contrast in dB around one candidate.

    Mean dB level over bins within omega0/5 of the candidate (roughly the
    window main lobe) minus the mean dB level over the rest of the span
    within omega0/2, both clamped to [0, Nyquist]. Returns None when either
    bin set is empty after clamping.
    """
    if omega0 <= 0:
        raise ValidationError("omega0 must be positive")
    amp = frame.amplitude_db
    freqs = np.arange(amp.size) * frame.bin_hz
    offset = np.abs(freqs - cand.omega_hz)
    span = (offset <= omega0 / 2.0) & (freqs <= frame.nyquist_hz)
    lobe = span & (offset <= omega0 / 5.0)
    rest = span & ~lobe
    if not lobe.any() or not rest.any():
        return None
    return float(amp[lobe].mean() - amp[rest].mean())


def feature_ihpc(frame: FrameAnalysis, cand_a: HarmonicCandidate,
                 cand_b: HarmonicCandidate, f0: float) -> float:
    """Group-delay difference between two consecutive candidates, in pitch
    periods of ``f0``.

    The period-relative unit keeps the measurement on a common scale across
    voices: the group-delay spread of noise peaks grows with the analysis
    window, which is itself proportional to the pitch period.
    """
    if f0 <= 0:
        raise ValidationError("f0 must be positive")
    if cand_b.omega_hz <= cand_a.omega_hz:
        raise ValidationError("candidates must be in increasing frequency order")
    gd = frame.group_delay
    return float((gd[cand_b.bin] - gd[cand_a.bin]) * f0)


def differential_phase(samples: np.ndarray, spec: FrameSpec,
                       frame: FrameAnalysis | None = None,
                       delay_f0: float | None = None) -> DifferentialPhase:
    """Phase difference between the frame at ``spec`` and the same-length
    frame delayed by one pitch period.

    Both spectra are taken with phases referenced to their own frame start;
    with equal window lengths that start-referencing already cancels the
    integer-sample part of the delay's linear phase. The fractional residual
    tau = T0*fs - round(T0*fs) is compensated by adding ``omega * tau`` to
    the delayed phase spectrum.

    Args:
        samples: the full signal (frames near the edges are zero-extended).
        spec: frame placement; ``spec.f0`` sets the window length.
        frame: optional precomputed analysis of the frame at ``spec``,
            reused to avoid a second transform of the same data.
        delay_f0: pitch value defining the delay T0 = 1/delay_f0; defaults
            to ``spec.f0``. Both windows keep the length implied by
            ``spec.f0`` so their linear phases cancel exactly.
    """
    if delay_f0 is None:
        delay_f0 = spec.f0
    if delay_f0 <= 0:
        raise ValidationError("delay_f0 must be positive")
    period_samples = spec.sample_rate / delay_f0
    delay = int(round(period_samples))
    tau = period_samples - delay
    if frame is None:
        frame = analyze_frame(extract_frame(samples, spec), spec.sample_rate, spec.f0)
    delayed_spec = FrameSpec(center_sample=spec.center_sample + delay, f0=spec.f0,
                             sample_rate=spec.sample_rate,
                             window_periods=spec.window_periods)
    delayed = analyze_frame(extract_frame(samples, delayed_spec),
                            spec.sample_rate, spec.f0)
    k = np.arange(frame.n_bins)
    compensation = TWO_PI * k / frame.dft_size * tau
    delta = wrap_phase(frame.unwrapped_phase - (delayed.unwrapped_phase + compensation))
    return DifferentialPhase(delta_phi=delta, bin_hz=frame.bin_hz)


def feature_icpc(dphi: DifferentialPhase, cand_a: HarmonicCandidate,
                 cand_b: HarmonicCandidate) -> float:
    """Wrapped difference of the differential phase between two consecutive
    candidates, in (-pi, pi]."""
    if cand_b.omega_hz <= cand_a.omega_hz:
        raise ValidationError("candidates must be in increasing frequency order")
    return float(wrap_phase(dphi.delta_phi[cand_b.bin] - dphi.delta_phi[cand_a.bin]))
