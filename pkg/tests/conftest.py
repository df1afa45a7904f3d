"""Shared helpers and session fixtures for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from mvfest import AudioBuffer

TWO_PI = 2.0 * np.pi
FS = 16000


def harmonic_signal(f0: float, duration: float = 0.6, fs: int = FS,
                    n_harmonics: int | None = None, tilt_db_per_oct: float = -6.0,
                    seed: int = 0, peak: float = 0.5) -> AudioBuffer:
    """Constant-F0 sum of harmonics with seeded random phases."""
    rng = np.random.default_rng(seed)
    n = int(duration * fs)
    t = np.arange(n) / fs
    if n_harmonics is None:
        n_harmonics = int(np.floor((fs / 2) / f0))
    x = np.zeros(n)
    for h in range(1, n_harmonics + 1):
        amp = 10.0 ** (tilt_db_per_oct * np.log2(h) / 20.0)
        x += amp * np.cos(TWO_PI * h * f0 * t + rng.uniform(-np.pi, np.pi))
    x = x / np.max(np.abs(x)) * peak
    return AudioBuffer(samples=x, sample_rate=fs)


def noise_signal(duration: float = 0.6, fs: int = FS, seed: int = 0,
                 peak: float = 0.5) -> AudioBuffer:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(int(duration * fs))
    x = x / np.max(np.abs(x)) * peak
    return AudioBuffer(samples=x, sample_rate=fs)


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """A small seeded corpus with a model trained on its dev split."""
    from mvfest import generate_corpus, train_from_manifest
    from mvfest.pipeline import PipelineConfig

    root = tmp_path_factory.mktemp("small_corpus")
    manifest = generate_corpus(root, preset="mixed", n_files=4, seed=123,
                               duration=0.6)
    cfg = PipelineConfig(enabled_features=("as", "ihpc", "icpc"))
    model = train_from_manifest(manifest, enabled=("as", "ihpc", "icpc"), cfg=cfg)
    return manifest, model
