"""Threshold-sweep scoring of estimated contours against ground truth.

Accuracy at threshold theta is the fraction of voiced frames whose absolute
error is at most theta; sweeping theta over a uniform grid up to 1.5 kHz
traces an approximate ROC whose trapezoidal area, divided by the sweep
range, is the reported AUC (1.0 for a perfect estimator).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decision import GaussianModel
from .errors import EvaluationError, ValidationError
from .pipeline import PipelineConfig, analyze_file, contour_from_features
from .signal_io import MvfContour, read_f0_csv, read_wav
from .smoothing import SmootherConfig
from .synth import CorpusManifest

THETA_MAX_HZ = 1500.0
THETA_STEPS = 151

# The five feature combinations compared by the evaluation harness.
DEFAULT_FEATURE_SETS = (("as",), ("ihpc",), ("icpc",),
                        ("as", "ihpc"), ("as", "ihpc", "icpc"))


@dataclass(frozen=True)
class ScoreResult:
    """Sweep result over one set of files."""

    theta_hz: np.ndarray
    accuracy: np.ndarray
    auc: float
    per_file_mae_hz: tuple[float, ...]
    n_frames: int


@dataclass(frozen=True)
class MethodReport:
    method: str
    voice_class: str
    score: ScoreResult


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[MethodReport, ...]

    def auc(self, method: str, voice_class: str) -> float:
        for row in self.rows:
            if row.method == method and row.voice_class == voice_class:
                return row.score.auc
        raise KeyError(f"no report row for {method!r} / {voice_class!r}")


def method_name(features: tuple[str, ...] | list[str]) -> str:
    return "-".join(features)


def score(estimates: list[MvfContour], truths: list[float],
          voiced_masks: list[np.ndarray] | None = None,
          theta_max: float = THETA_MAX_HZ,
          theta_steps: int = THETA_STEPS) -> ScoreResult:
    """Score per-file contours against per-file constant truths.

    Args:
        estimates: one contour per file.
        truths: the imposed boundary of each file, in Hz.
        voiced_masks: which frames to score; defaults to frames with a
            nonzero estimate. Pass the input voicing so that all-noise
            decisions (value 0 on a voiced frame) count as errors rather
            than disappearing from the score.
        theta_max: top of the threshold sweep.
        theta_steps: number of grid points over [0, theta_max].
    """
    if len(estimates) != len(truths):
        raise ValidationError("estimates and truths length mismatch")
    if voiced_masks is not None and len(voiced_masks) != len(estimates):
        raise ValidationError("voiced_masks length mismatch")
    if theta_max <= 0 or theta_steps < 2:
        raise ValidationError("bad theta grid")
    errors: list[np.ndarray] = []
    per_file_mae: list[float] = []
    for i, (contour, truth) in enumerate(zip(estimates, truths)):
        mask = voiced_masks[i] if voiced_masks is not None else contour.voiced_mask
        if mask.shape != contour.values.shape:
            raise ValidationError(f"file {i}: mask shape mismatch")
        err = np.abs(contour.values[mask] - truth)
        if err.size:
            errors.append(err)
            per_file_mae.append(float(err.mean()))
    if not errors:
        raise EvaluationError("no voiced frames to score")
    all_err = np.concatenate(errors)
    theta = np.linspace(0.0, theta_max, theta_steps)
    accuracy = np.array([(all_err <= t).mean() for t in theta])
    auc = float(np.trapezoid(accuracy, theta) / theta_max)
    return ScoreResult(theta_hz=theta, accuracy=accuracy, auc=auc,
                       per_file_mae_hz=tuple(per_file_mae),
                       n_frames=int(all_err.size))


def compare_methods(manifest: CorpusManifest,
                    feature_sets: tuple[tuple[str, ...], ...] = DEFAULT_FEATURE_SETS,
                    model: GaussianModel | None = None,
                    cfg: PipelineConfig | None = None,
                    theta_max: float = THETA_MAX_HZ,
                    theta_steps: int = THETA_STEPS) -> EvalReport:
    """Evaluate feature subsets on the test split, per voice class.

    Frame analysis runs once per file with the union of the requested
    features; each subset then reuses the cached features, so subset
    results are mutually consistent by construction. Estimates are median
    smoothed (order 5) before scoring. The model must have been trained on
    the dev split; sharing a file between splits is a hard error.
    """
    if model is None:
        raise ValidationError("compare_methods requires a trained model")
    dev_wavs = {e.wav_path for e in manifest.subset("dev")}
    test_entries = manifest.subset("test")
    shared = dev_wavs & {e.wav_path for e in test_entries}
    if shared:
        raise ValidationError(
            f"dev/test contamination: {sorted(p.name for p in shared)}")
    if not test_entries:
        raise EvaluationError("manifest has no test entries")
    union = tuple(n for n in ("as", "ihpc", "icpc")
                  if any(n in fs for fs in feature_sets))
    base_cfg = cfg or PipelineConfig()
    cache_cfg = PipelineConfig(frame_shift=base_cfg.frame_shift,
                               window_periods=base_cfg.window_periods,
                               enabled_features=union,
                               smoother=SmootherConfig(mode="median", median_order=5))

    cached = []
    for entry in test_entries:
        audio = read_wav(entry.wav_path)
        track = read_f0_csv(entry.f0_path)
        frames, _ = analyze_file(audio, track, cache_cfg)
        cached.append((entry, track, frames))

    rows: list[MethodReport] = []
    classes = sorted({e.voice_class for e in test_entries})
    for features in feature_sets:
        decide_cfg = PipelineConfig(frame_shift=cache_cfg.frame_shift,
                                    window_periods=cache_cfg.window_periods,
                                    enabled_features=tuple(features),
                                    smoother=cache_cfg.smoother)
        per_class: dict[str, tuple[list[MvfContour], list[float], list[np.ndarray]]] = {
            c: ([], [], []) for c in classes}
        for entry, track, frames in cached:
            _, smoothed = contour_from_features(frames, track, model, decide_cfg)
            bucket = per_class[entry.voice_class]
            bucket[0].append(smoothed)
            bucket[1].append(entry.mvf_true_hz)
            bucket[2].append(track.voiced_mask)
        for voice_class in classes:
            est, truths, masks = per_class[voice_class]
            result = score(est, truths, voiced_masks=masks,
                           theta_max=theta_max, theta_steps=theta_steps)
            rows.append(MethodReport(method=method_name(features),
                                     voice_class=voice_class, score=result))
    return EvalReport(rows=tuple(rows))


def write_report(report: EvalReport, out_dir: str | Path) -> None:
    """Write ``report.csv`` plus one ``roc_<method>.csv`` per method."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "report.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method,voice_class,auc,n_frames,mean_file_mae_hz\n")
        for row in report.rows:
            mae = float(np.mean(row.score.per_file_mae_hz))
            fh.write(f"{row.method},{row.voice_class},{row.score.auc:.6f},"
                     f"{row.score.n_frames},{mae:.6f}\n")
    for method in dict.fromkeys(r.method for r in report.rows):
        rows = [r for r in report.rows if r.method == method]
        with open(out_dir / f"roc_{method}.csv", "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write("theta_hz," + ",".join(f"accuracy_{r.voice_class}" for r in rows)
                     + "\n")
            theta = rows[0].score.theta_hz
            for i, t in enumerate(theta):
                cells = ",".join(f"{r.score.accuracy[i]:.6f}" for r in rows)
                fh.write(f"{t:.1f},{cells}\n")
