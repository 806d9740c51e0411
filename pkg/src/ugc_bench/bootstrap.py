"""Bootstrap confidence intervals for corpus scores and score ratios.

Resampling draws sentence indices with replacement. Scores are recomputed
from summed per-sentence sufficient statistics, so B resamples cost B vector
sums instead of B re-tokenizations. Resample i draws its indices from a
Philox-4x64 stream keyed by the seed with the counter set to block i * 2**128;
streams never overlap, runs are reproducible for a given seed regardless of
execution order, and per-resample parallelism cannot change the result.

Interval bounds are percentile bounds with linear interpolation between
order statistics (the R type-7 / numpy "linear" quantile).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import metrics

DEFAULT_B = 1000
DEFAULT_LEVEL = 0.95


@dataclass(frozen=True)
class BootstrapResult:
    """Point estimate with a percentile interval and the draw parameters."""

    point: float
    lower: float
    upper: float
    level: float
    b: int
    seed: int
    excluded: int = 0

    @property
    def half_width(self) -> float:
        return (self.upper - self.lower) / 2.0

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "lower": self.lower,
            "upper": self.upper,
            "half_width": self.half_width,
            "level": self.level,
            "b": self.b,
            "seed": self.seed,
            "excluded": self.excluded,
        }


def resample_indices(seed: int, resample: int, n: int) -> np.ndarray:
    """The index vector of one resample: n draws with replacement from range(n)."""
    bitgen = np.random.Philox(key=seed, counter=resample << 128)
    return np.random.Generator(bitgen).integers(0, n, size=n)


def percentile_interval(values: Sequence[float], level: float) -> tuple[float, float]:
    """Central percentile bounds at the given coverage level."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(np.asarray(values, dtype=float), [alpha, 1.0 - alpha], method="linear")
    return float(lo), float(hi)


def _stat_matrix(metric: str, pairs: Sequence[tuple[str, str]]) -> np.ndarray:
    if not pairs:
        raise ValueError("empty corpus")
    return np.array([metrics.sentence_stats(metric, h, r) for h, r in pairs], dtype=float)


def bootstrap_ci(pairs: Sequence[tuple[str, str]], metric: str, b: int = DEFAULT_B,
                 level: float = DEFAULT_LEVEL, seed: int = 0) -> BootstrapResult:
    """CI for a corpus score over (hypothesis, reference) sentence pairs."""
    stats = _stat_matrix(metric, pairs)
    point = metrics.score_from_stats(metric, stats.sum(axis=0))
    n = len(pairs)
    scores = np.empty(b, dtype=float)
    for i in range(b):
        idx = resample_indices(seed, i, n)
        scores[i] = metrics.score_from_stats(metric, stats[idx].sum(axis=0))
    lower, upper = percentile_interval(scores, level)
    return BootstrapResult(point=point, lower=lower, upper=upper, level=level, b=b, seed=seed)


def paired_bootstrap_ratio(noisy_pairs: Sequence[tuple[str, str]],
                           normalized_pairs: Sequence[tuple[str, str]],
                           metric: str, b: int = DEFAULT_B,
                           level: float = DEFAULT_LEVEL, seed: int = 0) -> BootstrapResult:
    """CI for the noisy/normalized score ratio, resampling both sets with one index vector.

    Both sets must be line-aligned (entry i of each comes from the same
    record). Resamples whose normalized score is zero are excluded from the
    interval and counted in ``excluded``.
    """
    if len(noisy_pairs) != len(normalized_pairs):
        raise ValueError(f"sets are not aligned: {len(noisy_pairs)} vs {len(normalized_pairs)} pairs")
    noisy = _stat_matrix(metric, noisy_pairs)
    norm = _stat_matrix(metric, normalized_pairs)
    norm_point = metrics.score_from_stats(metric, norm.sum(axis=0))
    if norm_point == 0.0:
        raise ValueError("normalized score is zero on the full set, ratio undefined")
    point = metrics.score_from_stats(metric, noisy.sum(axis=0)) / norm_point
    n = len(noisy_pairs)
    ratios = []
    excluded = 0
    for i in range(b):
        idx = resample_indices(seed, i, n)
        denom = metrics.score_from_stats(metric, norm[idx].sum(axis=0))
        if denom == 0.0:
            excluded += 1
            continue
        ratios.append(metrics.score_from_stats(metric, noisy[idx].sum(axis=0)) / denom)
    if not ratios:
        raise ValueError("every resample had a zero normalized score")
    lower, upper = percentile_interval(ratios, level)
    return BootstrapResult(point=point, lower=lower, upper=upper, level=level, b=b,
                           seed=seed, excluded=excluded)
