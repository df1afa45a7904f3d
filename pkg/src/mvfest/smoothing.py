"""Post-processing of raw MVF trajectories.

Median filtering suits objective evaluation (it removes isolated spikes
without inventing values); a two-sided moving average gives the smoother
contours preferred for synthesis. Both operate within voiced runs only:
frames with value 0 pass through untouched and never contribute to a
neighbour's window, since averaging zeros into a voiced region would drag
the boundary down artificially.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .signal_io import MvfContour

MEDIAN = "median"
MOVING_AVERAGE = "moving_average"


@dataclass(frozen=True)
class SmootherConfig:
    mode: str = MEDIAN
    median_order: int = 5
    ma_halfwidth: float = 0.030
    frame_shift: float = 0.010

    def __post_init__(self) -> None:
        if self.mode not in (MEDIAN, MOVING_AVERAGE):
            raise ValidationError(f"unknown smoothing mode {self.mode!r}")
        if self.median_order < 1 or self.median_order % 2 == 0:
            raise ValidationError("median_order must be odd and >= 1")
        if self.ma_halfwidth < 0:
            raise ValidationError("ma_halfwidth must be >= 0")
        if self.frame_shift <= 0:
            raise ValidationError("frame_shift must be positive")


def _voiced_runs(values: np.ndarray):
    """Yield (start, stop) spans of consecutive nonzero frames."""
    voiced = values > 0
    idx = np.flatnonzero(np.diff(np.concatenate(([0], voiced.view(np.int8), [0]))))
    for start, stop in zip(idx[::2], idx[1::2]):
        yield int(start), int(stop)


def smooth(contour: MvfContour, cfg: SmootherConfig) -> MvfContour:
    """Smooth each voiced run of a contour, windows truncated at run edges.

    Median mode replaces each voiced frame by the median of the voiced
    values inside its ``median_order``-frame window; moving-average mode by
    the mean of voiced values within ``ma_halfwidth`` seconds on each side.
    The unvoiced mask is preserved exactly.
    """
    values = contour.values
    out = values.copy()
    if cfg.mode == MEDIAN:
        half = (cfg.median_order - 1) // 2
    else:
        half = int(round(cfg.ma_halfwidth / cfg.frame_shift))
    for start, stop in _voiced_runs(values):
        run = values[start:stop]
        for i in range(run.size):
            lo = max(0, i - half)
            hi = min(run.size, i + half + 1)
            window = run[lo:hi]
            if cfg.mode == MEDIAN:
                out[start + i] = np.median(window)
            else:
                out[start + i] = window.mean()
    return MvfContour(frame_shift=contour.frame_shift, values=out)
