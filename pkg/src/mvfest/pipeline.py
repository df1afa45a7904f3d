"""End-to-end contour estimation and model training orchestration.

Per voiced frame the chain is: window, transform, candidate picking,
feature extraction, maximum-likelihood boundary decision. Pair features
(group-delay and cross-period phase differences between consecutive
candidates) are attached to the upper candidate of each pair, so the first
candidate carries only the amplitude measurement. The cross-period analysis
runs only when the icpc feature is enabled, since it costs a second
transform per frame.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decision import FEATURE_NAMES, FeatureVector, GaussianModel, decide_mvf, fit_model
from .errors import ValidationError
from .features import differential_phase, feature_as, feature_icpc, feature_ihpc
from .harmonics import detect_candidates, refine_f0
from .signal_io import AudioBuffer, F0Track, MvfContour, read_f0_csv, read_wav
from .smoothing import SmootherConfig, smooth
from .spectral import FrameSpec, analyze_frame, extract_frame
from .synth import CorpusManifest


@dataclass(frozen=True)
class PipelineConfig:
    frame_shift: float = 0.010
    window_periods: int = 4
    enabled_features: tuple[str, ...] = ("as", "ihpc")
    smoother: SmootherConfig = field(default_factory=SmootherConfig)

    def __post_init__(self) -> None:
        if not self.enabled_features:
            raise ValidationError("enabled_features must not be empty")
        unknown = set(self.enabled_features) - set(FEATURE_NAMES)
        if unknown:
            raise ValidationError(f"unknown features {sorted(unknown)}")
        if self.frame_shift <= 0:
            raise ValidationError("frame_shift must be positive")


@dataclass
class Diagnostics:
    """Counters accumulated over one file."""

    frames_total: int = 0
    frames_voiced: int = 0
    frames_undecidable: int = 0
    frames_suspicious: int = 0
    frame_analyses: int = 0


@dataclass(frozen=True)
class FrameFeatures:
    """Candidate frequencies and their feature vectors for one frame."""

    omegas_hz: np.ndarray
    features: tuple[FeatureVector, ...]
    f0_refined: float


def analyze_frame_features(audio: AudioBuffer, f0: float, center_sample: int,
                           cfg: PipelineConfig,
                           diagnostics: Diagnostics | None = None) -> FrameFeatures | None:
    """Candidates plus feature vectors for one voiced frame.

    Returns None when the frame is degenerate or yields no candidates.
    Only the features enabled in ``cfg`` are computed.
    """
    spec = FrameSpec(center_sample=center_sample, f0=f0,
                     sample_rate=audio.sample_rate,
                     window_periods=cfg.window_periods)
    frame = analyze_frame(extract_frame(audio.samples, spec), audio.sample_rate, f0)
    if diagnostics is not None:
        diagnostics.frame_analyses += 1
    if frame.degenerate:
        return None
    candidates = detect_candidates(frame, f0)
    if not candidates:
        return None
    if diagnostics is not None:
        expected = math.floor(audio.nyquist_hz / f0)
        if abs(len(candidates) - expected) > 2:
            diagnostics.frames_suspicious += 1

    f0_delay = refine_f0(frame, candidates[0])
    want_as = "as" in cfg.enabled_features
    want_ihpc = "ihpc" in cfg.enabled_features
    want_icpc = "icpc" in cfg.enabled_features
    dphi = None
    if want_icpc:
        dphi = differential_phase(audio.samples, spec, frame=frame, delay_f0=f0_delay)
        if diagnostics is not None:
            diagnostics.frame_analyses += 1

    vectors = []
    for i, cand in enumerate(candidates):
        omega0 = cand.omega_hz / cand.index
        as_db = feature_as(frame, cand, omega0) if want_as else None
        ihpc = icpc = None
        if i > 0 and candidates[i - 1].omega_hz < cand.omega_hz:
            prev = candidates[i - 1]
            if want_ihpc:
                ihpc = feature_ihpc(frame, prev, cand, f0_delay)
            if want_icpc:
                icpc = feature_icpc(dphi, prev, cand)
        vectors.append(FeatureVector(as_db=as_db, ihpc=ihpc, icpc_rad=icpc))
    return FrameFeatures(omegas_hz=np.array([c.omega_hz for c in candidates]),
                         features=tuple(vectors), f0_refined=f0_delay)


def analyze_file(audio: AudioBuffer, f0: F0Track,
                 cfg: PipelineConfig) -> tuple[list[FrameFeatures | None], Diagnostics]:
    """Run frame analysis over every frame of a file.

    The returned list has one slot per frame: None for unvoiced or
    undecidable frames.
    """
    diag = Diagnostics(frames_total=f0.values.size)
    out: list[FrameFeatures | None] = []
    for i, f0_i in enumerate(f0.values):
        if f0_i <= 0:
            out.append(None)
            continue
        diag.frames_voiced += 1
        center = int(round(i * f0.frame_shift * audio.sample_rate))
        ff = analyze_frame_features(audio, float(f0_i), center, cfg, diag)
        if ff is None:
            diag.frames_undecidable += 1
        out.append(ff)
    return out, diag


def contour_from_features(frames: list[FrameFeatures | None], f0: F0Track,
                          model: GaussianModel,
                          cfg: PipelineConfig) -> tuple[MvfContour, MvfContour]:
    """Decide every frame and smooth; returns (raw, smoothed) contours.

    Voiced frames that could not be analysed take the value of the nearest
    decided frame within their voiced run, so isolated failures do not
    punch holes in the contour.
    """
    sub_model = model.restricted(cfg.enabled_features)
    n = f0.values.size
    values = np.zeros(n)
    decided = np.zeros(n, dtype=bool)
    for i in range(n):
        ff = frames[i]
        if ff is None or f0.values[i] <= 0:
            continue
        decision = decide_mvf(list(ff.features), ff.omegas_hz, sub_model)
        values[i] = decision.mvf_hz
        decided[i] = True
    _fill_undecidable(values, decided, f0.voiced_mask)
    raw = MvfContour(frame_shift=f0.frame_shift, values=values)
    smoother = SmootherConfig(mode=cfg.smoother.mode,
                              median_order=cfg.smoother.median_order,
                              ma_halfwidth=cfg.smoother.ma_halfwidth,
                              frame_shift=f0.frame_shift)
    return raw, smooth(raw, smoother)


def _fill_undecidable(values: np.ndarray, decided: np.ndarray,
                      voiced: np.ndarray) -> None:
    """Copy the nearest decided value onto undecidable voiced frames,
    run by run (in place)."""
    n = values.size
    i = 0
    while i < n:
        if not voiced[i]:
            i += 1
            continue
        j = i
        while j < n and voiced[j]:
            j += 1
        idx = np.flatnonzero(decided[i:j]) + i
        if idx.size:
            for k in range(i, j):
                if not decided[k]:
                    values[k] = values[idx[np.argmin(np.abs(idx - k))]]
        i = j


def estimate_contour(audio: AudioBuffer, f0: F0Track, cfg: PipelineConfig,
                     model: GaussianModel) -> tuple[MvfContour, MvfContour, Diagnostics]:
    """Full estimation for one file: returns (raw, smoothed, diagnostics)."""
    frames, diag = analyze_file(audio, f0, cfg)
    raw, smoothed = contour_from_features(frames, f0, model, cfg)
    return raw, smoothed, diag


# ---------------------------------------------------------------- training

BOUNDARY_EXCLUSION_PERIODS = 0.5


def collect_training_features(manifest: CorpusManifest, split: str,
                              cfg: PipelineConfig) -> list[tuple[FeatureVector, str]]:
    """Gather labeled feature vectors from one manifest split.

    A candidate at or below the file's true boundary is harmonic (h1),
    above it noise (h0); candidates within half an F0 of the boundary are
    ambiguous and skipped. Labels come from the manifest only, never from
    the estimator.
    """
    labeled: list[tuple[FeatureVector, str]] = []
    for entry in manifest.subset(split):
        audio = read_wav(entry.wav_path)
        track = read_f0_csv(entry.f0_path)
        frames, _ = analyze_file(audio, track, cfg)
        for i, ff in enumerate(frames):
            if ff is None:
                continue
            f0_i = track.values[i]
            for omega, fv in zip(ff.omegas_hz, ff.features):
                if abs(omega - entry.mvf_true_hz) <= BOUNDARY_EXCLUSION_PERIODS * f0_i:
                    continue
                label = "h1" if omega <= entry.mvf_true_hz else "h0"
                labeled.append((fv, label))
    return labeled


def train_from_manifest(manifest: CorpusManifest,
                        enabled: tuple[str, ...] | list[str],
                        cfg: PipelineConfig | None = None,
                        split: str = "dev",
                        min_samples: int = 100) -> GaussianModel:
    """Train a Gaussian model on one split of a corpus manifest."""
    if cfg is None:
        cfg = PipelineConfig(enabled_features=tuple(enabled))
    labeled = collect_training_features(manifest, split, cfg)
    return fit_model(labeled, enabled=tuple(enabled), min_samples=min_samples)
