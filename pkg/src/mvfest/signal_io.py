"""File formats: WAV audio, F0 and MVF contour CSVs, Gaussian model files.

All text files are UTF-8 with LF line endings. CSV contours use a fixed
six-decimal format so a write/read round trip is exact to 1e-6; model files
store values with ``repr`` so the round trip is exact to the last bit.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .decision import FeatureStats, GaussianModel
from .errors import FormatError, ValidationError

F0_MIN_HZ = 40.0
F0_MAX_HZ = 1500.0

TIME_GRID_TOL_S = 1e-6


@dataclass(frozen=True)
class AudioBuffer:
    """Mono audio in [-1, 1] at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise ValidationError("audio must be a non-empty 1-D sample array")
        if not np.all(np.isfinite(self.samples)):
            raise ValidationError("audio contains non-finite samples")
        if np.max(np.abs(self.samples)) > 1.0:
            raise ValidationError("audio samples exceed [-1, 1]")
        if int(self.sample_rate) < 8000:
            raise ValidationError(f"sample_rate must be >= 8000, got {self.sample_rate}")

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate

    @property
    def nyquist_hz(self) -> float:
        return self.sample_rate / 2.0


@dataclass(frozen=True)
class F0Track:
    """Fundamental-frequency track on a uniform frame grid; 0 marks unvoiced."""

    frame_shift: float
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.frame_shift <= 0:
            raise ValidationError("frame_shift must be positive")
        v = self.values
        if not np.all(np.isfinite(v)):
            raise ValidationError("F0 track contains non-finite values")
        voiced = v[v != 0]
        if voiced.size and (voiced.min() < F0_MIN_HZ or voiced.max() > F0_MAX_HZ):
            raise ValidationError(
                f"voiced F0 values must lie in [{F0_MIN_HZ}, {F0_MAX_HZ}] Hz")
        if np.any(v < 0):
            raise ValidationError("negative F0 value")

    def times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.frame_shift

    @property
    def voiced_mask(self) -> np.ndarray:
        return self.values > 0


@dataclass(frozen=True)
class MvfContour:
    """Per-frame maximum voiced frequency in Hz; 0 marks frames with no
    harmonic band (unvoiced input or an all-noise decision)."""

    frame_shift: float
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.frame_shift <= 0:
            raise ValidationError("frame_shift must be positive")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("contour contains non-finite values")
        if np.any(self.values < 0):
            raise ValidationError("negative MVF value")

    def times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.frame_shift

    @property
    def voiced_mask(self) -> np.ndarray:
        return self.values > 0


# --------------------------------------------------------------------- WAV

def read_wav(path: str | Path) -> AudioBuffer:
    """Read a RIFF WAV file as mono float64 in [-1, 1].

    PCM16 data is scaled by 1/32768; float data is taken as-is. Multi
    channel files are reduced to their first channel with a warning.
    """
    path = Path(path)
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise FormatError(f"{path}: not a readable WAV file ({exc})") from exc
    if data.size == 0:
        raise ValidationError(f"{path}: empty audio")
    if data.ndim == 2:
        warnings.warn(f"{path}: {data.shape[1]} channels, using the first one")
        data = data[:, 0]
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise FormatError(
            f"{path}: unsupported sample format {data.dtype}; expected PCM16 or float32")
    return AudioBuffer(samples=samples, sample_rate=int(rate))


def write_wav(audio: AudioBuffer, path: str | Path, encoding: str = "float32") -> None:
    """Write mono audio as PCM16 or float32 WAV."""
    path = Path(path)
    if encoding == "float32":
        wavfile.write(path, audio.sample_rate, audio.samples.astype(np.float32))
    elif encoding == "pcm16":
        scaled = np.clip(np.round(audio.samples * 32768.0), -32768, 32767)
        wavfile.write(path, audio.sample_rate, scaled.astype(np.int16))
    else:
        raise ValidationError(f"unknown WAV encoding {encoding!r}")


# --------------------------------------------------------------------- CSV

def _read_csv_rows(path: Path) -> list[tuple[float, float]]:
    rows: list[tuple[float, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise FormatError(f"{path}:{ln}: expected two comma-separated columns")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                if ln == 1:
                    continue  # header
                raise FormatError(f"{path}:{ln}: non-numeric row {line!r}") from None
    return rows


def _uniform_frame_shift(path: Path, times: np.ndarray) -> float:
    if abs(times[0]) > TIME_GRID_TOL_S:
        raise FormatError(f"{path}: time axis must start at 0, got {times[0]}")
    shift = times[1] - times[0]
    if shift <= 0:
        raise FormatError(f"{path}: non-increasing timestamps")
    expected = times[0] + shift * np.arange(times.size)
    bad = np.flatnonzero(np.abs(times - expected) > TIME_GRID_TOL_S)
    if bad.size:
        raise FormatError(
            f"{path}: non-uniform frame times (first offender row {bad[0] + 1})")
    return float(shift)


def read_f0_csv(path: str | Path) -> F0Track:
    """Read a ``time_s,f0_hz`` CSV (header optional) into an F0 track.

    The frame shift is inferred from the first two timestamps and uniform
    spacing is enforced to 1e-6 s.
    """
    path = Path(path)
    rows = _read_csv_rows(path)
    if not rows:
        raise ValidationError(f"{path}: empty F0 file")
    if len(rows) < 2:
        raise FormatError(f"{path}: need at least two rows to infer the frame shift")
    arr = np.asarray(rows)
    shift = _uniform_frame_shift(path, arr[:, 0])
    if np.any(arr[:, 1] < 0):
        raise ValidationError(f"{path}: negative F0 value")
    return F0Track(frame_shift=shift, values=arr[:, 1])


def write_f0_csv(track: F0Track, path: str | Path) -> None:
    _write_two_column(path, "time_s,f0_hz", track.frame_shift, track.values)


def read_contour_csv(path: str | Path) -> MvfContour:
    """Read a ``time_s,mvf_hz`` CSV written by :func:`write_contour_csv`."""
    path = Path(path)
    rows = _read_csv_rows(path)
    if not rows:
        return MvfContour(frame_shift=0.010, values=np.zeros(0))
    if len(rows) < 2:
        raise FormatError(f"{path}: need at least two rows to infer the frame shift")
    arr = np.asarray(rows)
    shift = _uniform_frame_shift(path, arr[:, 0])
    return MvfContour(frame_shift=shift, values=arr[:, 1])


def write_contour_csv(contour: MvfContour, path: str | Path) -> None:
    """Write ``time_s,mvf_hz`` rows in six-decimal fixed point."""
    _write_two_column(path, "time_s,mvf_hz", contour.frame_shift, contour.values)


def _write_two_column(path: str | Path, header: str, shift: float,
                      values: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for i, v in enumerate(values):
            fh.write(f"{i * shift:.6f},{v:.6f}\n")


# ------------------------------------------------------------------- model

def write_model(model: GaussianModel, path: str | Path,
                comments: list[str] | None = None) -> None:
    """Persist a Gaussian model as ``feature.hypothesis.param = value`` text.

    Values are written with ``repr`` so they survive the round trip exactly
    (well beyond the 12 significant digits the format promises).
    """
    lines = []
    for c in comments or []:
        lines.append(f"# {c}")
    lines.append(f"features = {','.join(model.enabled)}")
    for name in model.enabled:
        st = model.stats[name]
        lines.append(f"{name}.h1.mean = {st.h1_mean!r}")
        lines.append(f"{name}.h1.var = {st.h1_var!r}")
        lines.append(f"{name}.h0.mean = {st.h0_mean!r}")
        lines.append(f"{name}.h0.var = {st.h0_var!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_model(path: str | Path) -> GaussianModel:
    """Read a model file written by :func:`write_model`."""
    path = Path(path)
    entries: dict[str, float] = {}
    features: list[str] | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"{path}:{ln}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "features":
                features = [f.strip() for f in value.split(",") if f.strip()]
                continue
            try:
                entries[key] = float(value)
            except ValueError:
                raise FormatError(f"{path}:{ln}: non-numeric value {value!r}") from None
    if features is None:
        raise FormatError(f"{path}: missing 'features =' line")
    if not features:
        raise FormatError(f"{path}: empty feature set")
    stats: dict[str, FeatureStats] = {}
    for name in features:
        vals = {}
        for hyp in ("h1", "h0"):
            for param in ("mean", "var"):
                key = f"{name}.{hyp}.{param}"
                if key not in entries:
                    raise FormatError(f"{path}: missing line for {key!r}")
                vals[f"{hyp}_{param}"] = entries[key]
        stats[name] = FeatureStats(
            h1_mean=vals["h1_mean"], h1_var=vals["h1_var"],
            h0_mean=vals["h0_mean"], h0_var=vals["h0_var"])
    return GaussianModel(stats=stats)
