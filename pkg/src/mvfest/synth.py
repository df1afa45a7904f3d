"""Semi-synthetic corpus generation with a known, imposed MVF.

Each signal is a sum of harmonics riding a slowly modulated F0 contour,
with spectrally shaped Gaussian noise taking over above the imposed
boundary. Harmonic amplitudes follow a fixed dB-per-octave tilt; the noise
matches that envelope at full level above the boundary and sits
``hnr_low_db`` below it inside the harmonic band, so the true MVF is sharp
by construction and exactly recoverable from the manifest.

Noise shaping happens on the FFT grid with a raised-cosine onset ramp no
wider than 200 Hz, which keeps the boundary far sharper than the 1 kHz
evaluation grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError
from .signal_io import AudioBuffer, F0Track, write_f0_csv, write_wav
from .spectral import TWO_PI

MVF_GRID_HZ = tuple(float(v) for v in range(1000, 7001, 1000))

NOISE_ONSET_WIDTH_HZ = 200.0

LOW_PITCH_RANGE_HZ = (90.0, 220.0)
HIGH_PITCH_RANGE_HZ = (250.0, 700.0)

# Gentle sinusoidal F0 modulation keeps harmonics off exact DFT bins
# without smearing high harmonics across the peak-search neighbourhood.
F0_MODULATION_DEPTH = 0.01
F0_MODULATION_RATE_HZ = 1.0

PRESETS = ("speech_like", "singing_like", "mixed")
SPLITS = ("dev", "test")
VOICE_CLASSES = ("low_pitch", "high_pitch")


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one semi-synthetic file."""

    duration: float
    sample_rate: int
    f0_contour: F0Track
    mvf_true: float
    noise_seed: int
    hnr_low_db: float = 30.0
    spectral_tilt_db_per_oct: float = -6.0

    def __post_init__(self) -> None:
        if self.duration < 0.5:
            raise ValidationError("duration must be >= 0.5 s")
        nyquist = self.sample_rate / 2.0
        if not (0.0 < self.mvf_true <= nyquist):
            raise ValidationError(f"mvf_true must lie in (0, {nyquist}]")
        v = self.f0_contour.values
        if np.any(v <= 0):
            raise ValidationError("synthesis F0 contour must be fully voiced")
        if v.min() < 80.0 or v.max() > 800.0:
            raise ValidationError("synthesis F0 must lie in [80, 800] Hz")
        if self.mvf_true < v.max():
            raise ValidationError("mvf_true below F0 leaves no harmonic band")


@dataclass(frozen=True)
class ManifestEntry:
    wav_path: Path
    f0_path: Path
    mvf_true_hz: float
    split: str
    voice_class: str


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]

    def subset(self, split: str) -> tuple[ManifestEntry, ...]:
        if split not in SPLITS:
            raise ValidationError(f"unknown split {split!r}")
        return tuple(e for e in self.entries if e.split == split)


def _tilt_gain(freq_ratio, tilt_db_per_oct: float):
    """Linear amplitude gain of the spectral tilt at ``freq_ratio`` times
    the reference frequency."""
    return 10.0 ** (tilt_db_per_oct * np.log2(freq_ratio) / 20.0)


def synthesize(spec: SynthSpec) -> tuple[AudioBuffer, F0Track]:
    """Produce one harmonic-plus-noise signal with MVF fixed at
    ``spec.mvf_true``.

    Harmonic h is included only while h * f0(t) stays at or below the
    boundary for the whole file; each gets a seeded random constant phase
    and an amplitude from the spectral tilt. Gaussian noise is shaped in
    the frequency domain: a ``hnr_low_db``-deep floor under the envelope
    inside the harmonic band, ramping up to the full envelope level across
    the 200 Hz onset above the boundary. The result is peak-normalised to
    0.5 and returned together with the driving F0 track.
    """
    rng = np.random.default_rng(spec.noise_seed)
    fs = spec.sample_rate
    n = int(round(spec.duration * fs))
    track = spec.f0_contour

    frame_times = track.times()
    sample_times = np.arange(n) / fs
    f0_t = np.interp(sample_times, frame_times, track.values)
    f0_ref = float(track.values.mean())

    n_harm = int(math.floor(spec.mvf_true / f0_t.max()))
    if n_harm < 1:
        raise ValidationError("mvf_true admits no harmonic")

    base_phase = TWO_PI * np.cumsum(f0_t) / fs
    signal = np.zeros(n)
    for h in range(1, n_harm + 1):
        amplitude = _tilt_gain(h, spec.spectral_tilt_db_per_oct)
        signal += amplitude * np.cos(h * base_phase + rng.uniform(-np.pi, np.pi))

    noise_floor = 10.0 ** (-spec.hnr_low_db / 20.0) if np.isfinite(spec.hnr_low_db) else 0.0
    white = rng.standard_normal(n)
    freqs = np.fft.rfftfreq(n, 1.0 / fs)
    onset = np.clip((freqs - spec.mvf_true) / NOISE_ONSET_WIDTH_HZ, 0.0, 1.0)
    onset = 0.5 - 0.5 * np.cos(np.pi * onset)
    level = noise_floor + (1.0 - noise_floor) * onset
    envelope = np.zeros_like(freqs)
    positive = freqs > 0
    envelope[positive] = _tilt_gain(freqs[positive] / f0_ref, spec.spectral_tilt_db_per_oct)
    # Calibrated so noise energy per F0-wide band matches one harmonic of
    # the local envelope amplitude (before the floor/onset attenuation).
    gain = np.sqrt(fs / (2.0 * f0_ref)) * envelope * level
    signal += np.fft.irfft(np.fft.rfft(white) * gain, n)

    signal = signal / np.max(np.abs(signal)) * 0.5
    return AudioBuffer(samples=signal, sample_rate=fs), track


def make_f0_contour(f0_base: float, duration: float, modulation_phase: float,
                    frame_shift: float = 0.010,
                    depth: float = F0_MODULATION_DEPTH,
                    rate_hz: float = F0_MODULATION_RATE_HZ) -> F0Track:
    """Sinusoidally modulated F0 contour on the standard frame grid."""
    n_frames = int(math.floor(duration / frame_shift))
    t = np.arange(n_frames) * frame_shift
    values = f0_base * (1.0 + depth * np.sin(TWO_PI * rate_hz * t + modulation_phase))
    return F0Track(frame_shift=frame_shift, values=values)


def _derived_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def generate_corpus(out_dir: str | Path, preset: str, n_files: int, seed: int,
                    duration: float = 0.8, sample_rate: int = 16000,
                    hnr_low_db: float = 30.0) -> CorpusManifest:
    """Generate ``n_files`` base files times seven MVF variants (1..7 kHz).

    Per-file randomness is derived from ``(seed, file index)`` and the
    noise from ``(seed, file index, mvf)``, so output is reproducible and
    independent of generation order. Base files alternate between dev and
    test within each voice class, which splits the corpus equally with no
    file shared between splits.
    """
    if preset not in PRESETS:
        raise ValidationError(f"unknown preset {preset!r}; expected one of {PRESETS}")
    if n_files < 1:
        raise ValidationError("n_files must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    entries: list[ManifestEntry] = []
    class_counters = {"low_pitch": 0, "high_pitch": 0}
    for i in range(n_files):
        if preset == "speech_like":
            voice_class = "low_pitch"
        elif preset == "singing_like":
            voice_class = "high_pitch"
        else:
            voice_class = "low_pitch" if i % 2 == 0 else "high_pitch"
        lo, hi = LOW_PITCH_RANGE_HZ if voice_class == "low_pitch" else HIGH_PITCH_RANGE_HZ
        rng = np.random.default_rng(_derived_seed(seed, i))
        f0_base = float(rng.uniform(lo, hi))
        modulation_phase = float(rng.uniform(0.0, TWO_PI))
        split = "dev" if class_counters[voice_class] % 2 == 0 else "test"
        class_counters[voice_class] += 1

        contour = make_f0_contour(f0_base, duration, modulation_phase)
        for mvf in MVF_GRID_HZ:
            stem = f"base{i:04d}_mvf{int(mvf)}"
            wav_path = out_dir / f"{stem}.wav"
            f0_path = out_dir / f"{stem}.f0.csv"
            spec = SynthSpec(duration=duration, sample_rate=sample_rate,
                             f0_contour=contour, mvf_true=mvf,
                             noise_seed=_derived_seed(seed, i, int(mvf)),
                             hnr_low_db=hnr_low_db)
            audio, track = synthesize(spec)
            write_wav(audio, wav_path)
            write_f0_csv(track, f0_path)
            entries.append(ManifestEntry(wav_path=wav_path, f0_path=f0_path,
                                         mvf_true_hz=mvf, split=split,
                                         voice_class=voice_class))
    manifest = CorpusManifest(entries=tuple(entries))
    save_manifest(manifest, out_dir / "manifest.csv")
    return manifest


def save_manifest(manifest: CorpusManifest, path: str | Path) -> None:
    """Write manifest rows with paths relative to the manifest location."""
    path = Path(path)
    root = path.parent
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("wav_path,f0_path,mvf_true_hz,split,voice_class\n")
        for e in manifest.entries:
            wav = _relative_to(e.wav_path, root)
            f0 = _relative_to(e.f0_path, root)
            fh.write(f"{wav},{f0},{e.mvf_true_hz:.6f},{e.split},{e.voice_class}\n")


def _relative_to(p: Path, root: Path) -> str:
    try:
        return p.relative_to(root).as_posix()
    except ValueError:
        return p.as_posix()


def load_manifest(path: str | Path) -> CorpusManifest:
    """Read a manifest CSV; relative paths resolve against its directory."""
    path = Path(path)
    root = path.parent
    entries: list[ManifestEntry] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "wav_path,f0_path,mvf_true_hz,split,voice_class":
            raise FormatError(f"{path}: unexpected manifest header {header!r}")
        for ln, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise FormatError(f"{path}:{ln}: expected five columns")
            wav, f0, mvf, split, voice_class = parts
            if split not in SPLITS:
                raise FormatError(f"{path}:{ln}: unknown split {split!r}")
            if voice_class not in VOICE_CLASSES:
                raise FormatError(f"{path}:{ln}: unknown voice class {voice_class!r}")
            try:
                mvf_val = float(mvf)
            except ValueError:
                raise FormatError(f"{path}:{ln}: bad mvf value {mvf!r}") from None
            entries.append(ManifestEntry(
                wav_path=(root / wav) if not Path(wav).is_absolute() else Path(wav),
                f0_path=(root / f0) if not Path(f0).is_absolute() else Path(f0),
                mvf_true_hz=mvf_val, split=split, voice_class=voice_class))
    return CorpusManifest(entries=tuple(entries))
