"""Reference randomizers used to exercise the risk metrics.

Every randomizer maps record i of the input to record i of the output
and keeps the length; the metrics rely on that alignment.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .data_io import SymbolicSeries
from .errors import DataError

MECHANISMS = ("exponential", "laplace", "identity", "blatant_ramp")


@dataclass(frozen=True)
class RandomizerConfig:
    kind: str = "exponential"
    epsilon: float = 0.337
    # carried for provenance only; neither mechanism uses it
    delta: float | None = 0.1
    sensitivity: float = 1.0
    candidate_bins: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.kind not in MECHANISMS:
            raise DataError(f"unknown randomizer {self.kind!r}; choose from {MECHANISMS}")
        if self.kind in ("exponential", "laplace") and not self.epsilon > 0:
            raise DataError(f"epsilon must be > 0, got {self.epsilon}")
        if self.kind == "exponential" and self.candidate_bins < 2:
            raise DataError(f"candidate_bins must be >= 2, got {self.candidate_bins}")
        if self.kind == "laplace" and not self.sensitivity > 0:
            raise DataError(f"sensitivity must be > 0, got {self.sensitivity}")
        if not 0 <= self.seed < 2**64:
            raise DataError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_dict(self) -> dict:
        return asdict(self)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed))


def _numeric(series: SymbolicSeries) -> np.ndarray:
    return series.values.astype(float)


def exponential_weights(x: np.ndarray, centers: np.ndarray, span: float, epsilon: float) -> np.ndarray:
    """Row-normalized selection probabilities, one row per record.

    Utility is -|x - c| / span (sensitivity 1), weight exp(eps * u / 2).
    """
    u = -np.abs(x[:, None] - centers[None, :]) / span
    logits = epsilon * u / 2.0
    logits -= logits.max(axis=1, keepdims=True)
    w = np.exp(logits)
    return w / w.sum(axis=1, keepdims=True)


def bin_centers(lo: float, hi: float, bins: int) -> np.ndarray:
    width = (hi - lo) / bins
    return lo + width * (np.arange(bins) + 0.5)


def exponential_mechanism(series: SymbolicSeries, cfg: RandomizerConfig) -> SymbolicSeries:
    """Replace each record with a bin center drawn by the exponential mechanism."""
    x = _numeric(series)
    lo, hi = float(x.min()), float(x.max())
    if not lo < hi:
        raise DataError("exponential mechanism needs a non-constant series")
    centers = bin_centers(lo, hi, cfg.candidate_bins)
    probs = exponential_weights(x, centers, hi - lo, cfg.epsilon)
    cdf = np.cumsum(probs, axis=1)
    draws = _rng(cfg.seed).random(x.size)[:, None]
    idx = (cdf < draws).sum(axis=1)
    # float error can leave the final cdf entry just under 1
    idx = np.minimum(idx, centers.size - 1)
    return SymbolicSeries(centers[idx], name=series.name)


def laplace_mechanism(series: SymbolicSeries, cfg: RandomizerConfig) -> SymbolicSeries:
    x = _numeric(series)
    noise = _rng(cfg.seed).laplace(0.0, cfg.sensitivity / cfg.epsilon, size=x.size)
    return SymbolicSeries(x + noise, name=series.name)


def blatant_ramp(series: SymbolicSeries, cfg: RandomizerConfig | None = None) -> SymbolicSeries:
    """0, 1, ..., N-1: an order-revealing output with a single ordinal pattern."""
    return SymbolicSeries(np.arange(series.N, dtype=np.int64), name=series.name)


def identity(series: SymbolicSeries, cfg: RandomizerConfig | None = None) -> SymbolicSeries:
    return series


_DISPATCH: dict[str, Callable[[SymbolicSeries, RandomizerConfig], SymbolicSeries]] = {
    "exponential": exponential_mechanism,
    "laplace": laplace_mechanism,
    "identity": identity,
    "blatant_ramp": blatant_ramp,
}


def randomize(series: SymbolicSeries, cfg: RandomizerConfig) -> SymbolicSeries:
    out = _DISPATCH[cfg.kind](series, cfg)
    assert out.N == series.N
    return out
