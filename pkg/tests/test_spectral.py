"""Windowing and frame-analysis contracts."""
from __future__ import annotations

import numpy as np
import pytest

from mvfest import FrameSpec, ValidationError, analyze_frame, extract_frame, wrap_phase
from mvfest.spectral import MAX_BIN_HZ, dft_size_for, unwrap_phase

from conftest import FS, TWO_PI, harmonic_signal


def test_window_length_is_odd_and_bounded():
    for f0 in (82.3, 150.0, 473.9, 700.0, 1499.0):
        for fs in (8000, 16000, 44100, 48000):
            spec = FrameSpec(center_sample=0, f0=f0, sample_rate=fs)
            n = spec.window_length
            assert n % 2 == 1
            assert n >= 16
            assert abs(n - 4 * fs / f0) <= 2


def test_frame_spec_rejects_bad_f0():
    with pytest.raises(ValidationError):
        FrameSpec(center_sample=0, f0=0.0, sample_rate=FS)
    with pytest.raises(ValidationError):
        FrameSpec(center_sample=0, f0=-100.0, sample_rate=FS)


def test_extract_frame_on_constant_signal_is_the_window():
    x = np.ones(4000)
    spec = FrameSpec(center_sample=2000, f0=3200.0, sample_rate=FS)
    assert spec.window_length == 21
    frame = extract_frame(x, spec)
    assert np.allclose(frame, np.hanning(21))


def test_extract_frame_zero_pads_left_edge():
    x = np.ones(4000)
    spec = FrameSpec(center_sample=0, f0=800.0, sample_rate=FS)
    frame = extract_frame(x, spec)
    half = (spec.window_length - 1) // 2
    assert np.all(frame[:half] == 0.0)
    assert np.any(frame[half:] != 0.0)


def test_windowing_never_raises_energy():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(8000)
    spec = FrameSpec(center_sample=4000, f0=120.0, sample_rate=FS)
    frame = extract_frame(x, spec)
    half = (spec.window_length - 1) // 2
    raw = x[4000 - half:4000 + half + 1]
    assert np.sum(frame ** 2) <= np.sum(raw ** 2)


def test_dft_size_rule_and_bin_spacing():
    for fs in (8000, 16000, 44100, 48000):
        for f0 in (80.0, 150.0, 700.0):
            nw = FrameSpec(center_sample=0, f0=f0, sample_rate=fs).window_length
            dft = dft_size_for(nw, fs)
            assert dft & (dft - 1) == 0  # power of two
            assert dft >= 8 * nw
            assert fs / dft <= MAX_BIN_HZ


def test_group_delay_matches_window_centre_for_bin_centred_tone():
    # A tone at an exact bin centre of the padded transform: the group
    # delay at its peak equals the known window-centre delay of a
    # symmetric window, (N_w - 1) / (2 fs).
    f0 = 200.0
    spec = FrameSpec(center_sample=0, f0=f0, sample_rate=FS)
    nw = spec.window_length
    dft = dft_size_for(nw, FS)
    bin_hz = FS / dft
    tone_hz = round(1000.0 / bin_hz) * bin_hz
    t = np.arange(nw) / FS
    windowed = np.cos(TWO_PI * tone_hz * t) * np.hanning(nw)
    frame = analyze_frame(windowed, FS, f0)
    k = int(round(tone_hz / frame.bin_hz))
    expected = (nw - 1) / (2 * FS)
    assert frame.group_delay[k] == pytest.approx(expected, abs=1e-4)
    peak = int(np.argmax(frame.amplitude_db))
    assert peak == k


def test_unwrapped_phase_steps_stay_in_halfopen_interval():
    audio = harmonic_signal(140.0, seed=5)
    spec = FrameSpec(center_sample=4000, f0=140.0, sample_rate=FS)
    frame = analyze_frame(extract_frame(audio.samples, spec), FS, 140.0)
    steps = np.diff(frame.unwrapped_phase)
    assert np.all(steps > -np.pi)
    assert np.all(steps <= np.pi)


def test_all_zero_frame_is_degenerate():
    frame = analyze_frame(np.zeros(301), FS, 200.0)
    assert frame.degenerate
    assert np.all(frame.amplitude_db == -300.0)
    assert np.all(frame.group_delay == 0.0)
    assert np.all(frame.unwrapped_phase == 0.0)


def test_analyze_frame_rejects_empty_input():
    with pytest.raises(ValidationError):
        analyze_frame(np.zeros(0), FS, 100.0)


def test_amplitude_shape_invariant_and_phase_exact_under_pow2_scaling():
    audio = harmonic_signal(173.0, seed=8)
    spec = FrameSpec(center_sample=4800, f0=173.0, sample_rate=FS)
    base = analyze_frame(extract_frame(audio.samples, spec), FS, 173.0)
    for c in (2.0 ** -12, 2.0 ** 7):
        scaled = analyze_frame(extract_frame(c * audio.samples, spec), FS, 173.0)
        shift = scaled.amplitude_db - base.amplitude_db
        assert np.allclose(shift, 20 * np.log10(c), atol=1e-9)
        # power-of-two scaling is exact in floating point, so phase and
        # group delay must not move at all
        assert np.array_equal(scaled.unwrapped_phase, base.unwrapped_phase)
        assert np.array_equal(scaled.group_delay, base.group_delay)


def test_parseval_energy_identity():
    audio = harmonic_signal(220.0, seed=2)
    spec = FrameSpec(center_sample=4000, f0=220.0, sample_rate=FS)
    windowed = extract_frame(audio.samples, spec)
    frame = analyze_frame(windowed, FS, 220.0)
    full = np.fft.fft(windowed, frame.dft_size)
    time_energy = np.sum(windowed ** 2)
    freq_energy = np.mean(np.abs(full) ** 2)
    assert freq_energy == pytest.approx(time_energy, rel=1e-6)


def test_wrap_phase_definition():
    assert wrap_phase(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    assert wrap_phase(np.pi) == pytest.approx(np.pi)
    assert wrap_phase(-np.pi) == pytest.approx(np.pi)
    assert wrap_phase(0.0) == 0.0
    xs = np.linspace(-20.0, 20.0, 4001)
    wrapped = wrap_phase(xs)
    assert np.all(wrapped > -np.pi)
    assert np.all(wrapped <= np.pi)
    # wrapping only moves by whole turns
    assert np.allclose(np.round((xs - wrapped) / TWO_PI), (xs - wrapped) / TWO_PI)


def test_unwrap_phase_recovers_linear_ramp():
    true = -0.37 * np.arange(500)
    wrapped = wrap_phase(true)
    unwrapped = unwrap_phase(wrapped)
    assert np.allclose(unwrapped - unwrapped[0], true - true[0], atol=1e-9)
