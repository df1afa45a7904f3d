"""Gaussian feature models and the maximum-likelihood boundary decision.

A candidate is either harmonic (hypothesis ``h1``) or noise (``h0``). Each
enabled feature gets one univariate Gaussian per hypothesis; features
combine naively (independence across features). The frame decision picks
the boundary index m maximising the sum of h1 log-likelihoods up to m plus
h0 log-likelihoods above m, evaluated in O(N) with prefix and suffix sums.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TrainingError, ValidationError

TWO_PI = 2.0 * np.pi

H0 = "h0"
H1 = "h1"

FEATURE_NAMES = ("as", "ihpc", "icpc")


@dataclass(frozen=True)
class FeatureVector:
    """Feature measurements for one harmonic candidate.

    Any subset may be present (``None`` marks an absent measurement):
    ``as_db`` is the local harmonic-to-noise contrast in dB, ``ihpc`` the
    group-delay difference to the previous candidate in pitch periods, and
    ``icpc_rad`` the wrapped cross-period differential-phase difference to
    the previous candidate in radians.
    """

    as_db: float | None = None
    ihpc: float | None = None
    icpc_rad: float | None = None

    def __post_init__(self) -> None:
        for v in (self.as_db, self.ihpc, self.icpc_rad):
            if v is not None and not np.isfinite(v):
                raise ValidationError("non-finite feature value")
        if self.icpc_rad is not None and not (-np.pi < self.icpc_rad <= np.pi):
            raise ValidationError("icpc_rad must lie in (-pi, pi]")

    def get(self, name: str) -> float | None:
        return {"as": self.as_db, "ihpc": self.ihpc, "icpc": self.icpc_rad}[name]


@dataclass(frozen=True)
class FeatureStats:
    """Per-hypothesis Gaussian moments of one feature."""

    h1_mean: float
    h1_var: float
    h0_mean: float
    h0_var: float

    def __post_init__(self) -> None:
        vals = (self.h1_mean, self.h1_var, self.h0_mean, self.h0_var)
        if not all(np.isfinite(v) for v in vals):
            raise ValidationError("non-finite model parameter")
        if self.h1_var <= 0 or self.h0_var <= 0:
            raise ValidationError("model variance must be positive")

    def mean(self, hypothesis: str) -> float:
        return self.h1_mean if hypothesis == H1 else self.h0_mean

    def var(self, hypothesis: str) -> float:
        return self.h1_var if hypothesis == H1 else self.h0_var


@dataclass(frozen=True)
class GaussianModel:
    """Trained decision model: a :class:`FeatureStats` per enabled feature."""

    stats: dict[str, FeatureStats]

    def __post_init__(self) -> None:
        if not self.stats:
            raise ValidationError("model must enable at least one feature")
        unknown = set(self.stats) - set(FEATURE_NAMES)
        if unknown:
            raise ValidationError(f"unknown feature names {sorted(unknown)}")

    @property
    def enabled(self) -> tuple[str, ...]:
        return tuple(n for n in FEATURE_NAMES if n in self.stats)

    def restricted(self, names: tuple[str, ...] | list[str]) -> "GaussianModel":
        """Sub-model containing only ``names`` (which must all be enabled)."""
        missing = set(names) - set(self.stats)
        if missing:
            raise ValidationError(f"model does not cover features {sorted(missing)}")
        return GaussianModel(stats={n: self.stats[n] for n in names})


@dataclass(frozen=True)
class FrameDecision:
    """Outcome of the boundary search for one frame."""

    m_star: int
    mvf_hz: float
    total_log_likelihood: float
    per_candidate_llr: np.ndarray


def fit_model(labeled, enabled: tuple[str, ...] | list[str] | None = None,
              min_samples: int = 100) -> GaussianModel:
    """Fit per-feature, per-hypothesis Gaussians from labeled samples.

    Args:
        labeled: iterable of ``(FeatureVector, hypothesis)`` pairs with
            hypothesis ``"h1"`` or ``"h0"``; absent feature fields are
            skipped.
        enabled: feature names to fit; defaults to every feature that has
            at least one sample.
        min_samples: minimum sample count per feature per hypothesis
            (pass 1 to disable the check, e.g. in tests).

    Raises:
        TrainingError: when a (feature, hypothesis) cell is starved.
        ValidationError: when a fitted variance is zero.
    """
    pools: dict[tuple[str, str], list[float]] = {}
    for fv, hyp in labeled:
        if hyp not in (H0, H1):
            raise ValidationError(f"unknown hypothesis label {hyp!r}")
        for name in FEATURE_NAMES:
            v = fv.get(name)
            if v is not None:
                pools.setdefault((name, hyp), []).append(v)
    if enabled is None:
        enabled = tuple(n for n in FEATURE_NAMES
                        if (n, H0) in pools or (n, H1) in pools)
    if not enabled:
        raise TrainingError("no feature samples to fit")
    stats: dict[str, FeatureStats] = {}
    for name in enabled:
        moments = {}
        for hyp in (H1, H0):
            xs = pools.get((name, hyp), [])
            if len(xs) < max(min_samples, 2):
                raise TrainingError(
                    f"feature {name!r} hypothesis {hyp!r}: "
                    f"{len(xs)} samples, need >= {max(min_samples, 2)}")
            arr = np.asarray(xs)
            var = float(np.var(arr, ddof=1))
            if var <= 0.0:
                raise ValidationError(
                    f"feature {name!r} hypothesis {hyp!r}: zero variance")
            moments[hyp] = (float(np.mean(arr)), var)
        stats[name] = FeatureStats(
            h1_mean=moments[H1][0], h1_var=moments[H1][1],
            h0_mean=moments[H0][0], h0_var=moments[H0][1])
    return GaussianModel(stats=stats)


def log_likelihood(x: FeatureVector, model: GaussianModel, hypothesis: str) -> float:
    """Sum of univariate Gaussian log-densities over the present, enabled
    features of ``x`` (nats). Features absent from the model are ignored."""
    if hypothesis not in (H0, H1):
        raise ValidationError(f"unknown hypothesis {hypothesis!r}")
    total = 0.0
    for name in model.enabled:
        v = x.get(name)
        if v is None:
            continue
        st = model.stats[name]
        var = st.var(hypothesis)
        total += -0.5 * np.log(TWO_PI * var) - (v - st.mean(hypothesis)) ** 2 / (2.0 * var)
    return float(total)


def posterior(x: FeatureVector, model: GaussianModel, hypothesis: str) -> float:
    """Equal-prior posterior p(x|H_i) / (p(x|H0) + p(x|H1)).

    Diagnostic only; the decision path works on log-likelihoods. If both
    likelihoods are degenerate (log-likelihood -inf) the posterior is 0.5.
    """
    ll1 = log_likelihood(x, model, H1)
    ll0 = log_likelihood(x, model, H0)
    if np.isneginf(ll1) and np.isneginf(ll0):
        return 0.5
    denom = np.logaddexp(ll0, ll1)
    return float(np.exp((ll1 if hypothesis == H1 else ll0) - denom))


def decide_from_loglik(ll_h1: np.ndarray, ll_h0: np.ndarray) -> tuple[int, float, np.ndarray]:
    """Boundary search over precomputed per-candidate log-likelihoods.

    Maximises ``sum(ll_h1[:m]) + sum(ll_h0[m:])`` over m in 0..N using
    prefix/suffix sums; ties break toward larger m.

    Returns:
        ``(m_star, objective_at_m_star, llr)`` where ``llr`` is the
        per-candidate log-likelihood ratio h1 - h0.
    """
    ll_h1 = np.asarray(ll_h1, dtype=np.float64)
    ll_h0 = np.asarray(ll_h0, dtype=np.float64)
    if ll_h1.shape != ll_h0.shape or ll_h1.ndim != 1:
        raise ValidationError("log-likelihood arrays must be 1-D and equal length")
    n = ll_h1.size
    objective = np.zeros(n + 1)
    objective[1:] += np.cumsum(ll_h1)
    objective[:-1] += np.cumsum(ll_h0[::-1])[::-1]
    m_star = n - int(np.argmax(objective[::-1]))
    return m_star, float(objective[m_star]), ll_h1 - ll_h0


def decide_mvf(features: list[FeatureVector], omegas_hz: np.ndarray,
               model: GaussianModel) -> FrameDecision:
    """Pick the maximum-likelihood harmonic/noise boundary for one frame.

    ``features[k]`` describes candidate k+1 whose frequency is
    ``omegas_hz[k]``. The returned MVF is the frequency of the last
    harmonic-classified candidate, or 0 when every candidate is noise
    (m* = 0).
    """
    if len(features) == 0:
        raise ValidationError("no candidates to decide over")
    if len(features) != len(omegas_hz):
        raise ValidationError("features and omegas length mismatch")
    ll1 = np.array([log_likelihood(fv, model, H1) for fv in features])
    ll0 = np.array([log_likelihood(fv, model, H0) for fv in features])
    m_star, total, llr = decide_from_loglik(ll1, ll0)
    mvf = 0.0 if m_star == 0 else float(omegas_hz[m_star - 1])
    return FrameDecision(m_star=m_star, mvf_hz=mvf,
                         total_log_likelihood=total, per_candidate_llr=llr)
