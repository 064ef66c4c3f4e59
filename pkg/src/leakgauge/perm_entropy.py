"""Ordinal patterns and permutation entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .data_io import SymbolicSeries
from .errors import DataError

DEFAULT_PLATEAU_TOL = 0.01
# 20! still fits in int64, needed for the Lehmer key
MAX_PATTERN_LENGTH = 20


@dataclass(frozen=True, order=True)
class Pattern:
    """Rank permutation of one window: ``ranks[i]`` is the rank of position i."""

    ranks: tuple[int, ...]

    def __post_init__(self):
        if len(self.ranks) < 2:
            raise DataError(f"pattern length must be >= 2, got {len(self.ranks)}")
        if sorted(self.ranks) != list(range(len(self.ranks))):
            raise DataError(f"{self.ranks} is not a permutation of 0..{len(self.ranks) - 1}")

    @property
    def n(self) -> int:
        return len(self.ranks)

    @property
    def lehmer(self) -> int:
        return lehmer_code(self.ranks)

    @classmethod
    def from_lehmer(cls, code: int, n: int) -> "Pattern":
        pool = list(range(n))
        ranks = []
        for i in range(n - 1, -1, -1):
            f = math.factorial(i)
            idx, code = divmod(code, f)
            ranks.append(pool.pop(idx))
        return cls(tuple(ranks))

    def __str__(self) -> str:
        if self.n == 2:
            return "up" if self.ranks == (0, 1) else "down"
        return "".join(map(str, self.ranks))


UP = Pattern((0, 1))
DOWN = Pattern((1, 0))


def lehmer_code(ranks: Sequence[int]) -> int:
    n = len(ranks)
    code = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if ranks[j] < ranks[i])
        code += smaller * math.factorial(n - 1 - i)
    return code


@dataclass(frozen=True)
class PatternDistribution:
    """Window counts per ordinal pattern, keyed by the pattern's Lehmer code."""

    counts: Mapping[int, int]
    n: int
    N: int

    @property
    def window_count(self) -> int:
        return self.N - self.n + 1

    def by_pattern(self) -> dict[Pattern, int]:
        return {_pattern(c, self.n): q for c, q in self.counts.items()}

    def count_of(self, pattern: Pattern) -> int:
        return self.counts.get(pattern.lehmer, 0)

    def probabilities(self) -> dict[Pattern, float]:
        W = self.window_count
        return {p: q / W for p, q in self.by_pattern().items()}

    def count_vector(self) -> np.ndarray:
        return np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))


def window_ranks(values: np.ndarray, n: int) -> np.ndarray:
    """Rank matrix of shape (N-n+1, n); ties rank by position."""
    windows = np.lib.stride_tricks.sliding_window_view(values, n)
    order = np.argsort(windows, axis=1, kind="stable")
    ranks = np.empty_like(order)
    rows = np.arange(order.shape[0])[:, None]
    ranks[rows, order] = np.arange(n)
    return ranks


# Lehmer digit of position i in a window = #{j > i : x_j < x_i}. Under the
# tie rule a later equal value ranks higher, so it never counts.


def lehmer_codes(values: np.ndarray, n: int) -> np.ndarray:
    """Pattern code of every window along the last axis.

    Accepts a batch: input shape (..., N) gives output shape (..., N-n+1).
    """
    values = np.asarray(values)
    W = values.shape[-1] - n + 1
    codes = np.zeros(values.shape[:-1] + (W,), dtype=np.int64)
    for i in range(n - 1):
        xi = values[..., i:i + W]
        digit = np.zeros(codes.shape, dtype=np.int64)
        for j in range(i + 1, n):
            digit += values[..., j:j + W] < xi
        codes += digit * math.factorial(n - 1 - i)
    return codes


@lru_cache(maxsize=None)
def _window_coder(n: int):
    """Compile a single-pass comprehension computing every window's code.

    For n=3 the body is ``[2*((x1<x0)+(x2<x0)) + 1*((x2<x1)) for x0, x1, x2
    in zip(v, v[1:], v[2:])]``; one pass beats n(n-1)/2 list passes when the
    series is short.
    """
    names = [f"x{i}" for i in range(n)]
    terms = []
    for i in range(n - 1):
        cmp = "+".join(f"({names[j]}<{names[i]})" for j in range(i + 1, n))
        terms.append(f"{math.factorial(n - 1 - i)}*({cmp})")
    shifted = ", ".join("v" if k == 0 else f"v[{k}:]" for k in range(n))
    src = f"lambda v: [{' + '.join(terms)} for {', '.join(names)} in zip({shifted})]"
    return eval(src, {"__builtins__": {"zip": zip}})


@lru_cache(maxsize=65536)
def _pattern(code: int, n: int) -> Pattern:
    return Pattern.from_lehmer(code, n)


# below this many pairwise comparisons numpy call overhead dominates
_SMALL_WORK = 512


def _check_length(n: int, N: int) -> None:
    if not 2 <= n <= N:
        raise DataError(f"pattern length n={n} out of range [2, {N}]")
    if n > MAX_PATTERN_LENGTH:
        raise DataError(f"pattern length n={n} exceeds the supported maximum {MAX_PATTERN_LENGTH}")


def extract_patterns(series: SymbolicSeries, n: int) -> PatternDistribution:
    """Count ordinal patterns over all windows of length ``n`` (stride 1)."""
    N = series.N
    _check_length(n, N)
    W = N - n + 1
    if W * n * (n - 1) <= 2 * _SMALL_WORK:
        counts: dict[int, int] = {}
        for c in _window_coder(n)(series.values.tolist()):
            counts[c] = counts.get(c, 0) + 1
        return PatternDistribution(counts, n=n, N=N)
    codes = lehmer_codes(series.values, n)
    if math.factorial(n) <= 1 << 16:
        hist = np.bincount(codes, minlength=math.factorial(n))
        nz = np.flatnonzero(hist)
        counted = zip(nz.tolist(), hist[nz].tolist())
    else:
        uniq, cnt = np.unique(codes, return_counts=True)
        counted = zip(uniq.tolist(), cnt.tolist())
    return PatternDistribution(dict(counted), n=n, N=N)


def entropy_bits(counts: np.ndarray) -> float:
    """Shannon entropy in bits of a count vector (zero counts contribute nothing)."""
    counts = np.asarray(counts, dtype=float)
    counts = counts[counts > 0]
    total = counts.sum()
    if total <= 0:
        raise DataError("entropy of an empty distribution is undefined")
    p = counts / total
    h = float(-(p * np.log2(p)).sum())
    # a single pattern sums to -0.0
    return h if h > 0 else 0.0


def permutation_entropy(dist: PatternDistribution, weights: Mapping[Pattern, float] | None = None) -> float:
    """Permutation entropy H(n) in bits.

    ``weights`` optionally reweights (or, with zero weights, drops)
    patterns before normalization; absent patterns default to weight 1.
    """
    if dist.window_count < 1 or sum(dist.counts.values()) != dist.window_count:
        raise DataError("pattern distribution does not cover every window")
    if weights is None:
        return entropy_bits(dist.count_vector())
    w = np.array([float(weights.get(_pattern(c, dist.n), 1.0)) for c in dist.counts])
    if np.any(w < 0):
        raise DataError("pattern weights must be nonnegative")
    return entropy_bits(dist.count_vector() * w)


@dataclass(frozen=True)
class EntropyCurve:
    points: tuple[tuple[int, float], ...]
    chosen_n: int
    plateau_tol: float

    @property
    def max_entropy(self) -> float:
        return max(h for _, h in self.points)

    def to_tsv(self) -> str:
        lines = ["n\tentropy_bits"]
        lines += [f"{n}\t{h!r}" for n, h in self.points]
        return "\n".join(lines) + "\n"


def entropy_curve(series: SymbolicSeries, n_min: int, n_max: int) -> list[tuple[int, float]]:
    return [(n, permutation_entropy(extract_patterns(series, n))) for n in range(n_min, n_max + 1)]


def optimal_pattern_length(
    series: SymbolicSeries,
    n_min: int = 2,
    n_max: int = 12,
    plateau_tol: float = DEFAULT_PLATEAU_TOL,
) -> EntropyCurve:
    """Smallest pattern length whose entropy is within ``plateau_tol`` of the maximum."""
    if not 2 <= n_min <= n_max <= series.N:
        raise DataError(f"invalid pattern-length range [{n_min}, {n_max}] for series of length {series.N}")
    if plateau_tol < 0:
        raise DataError(f"plateau tolerance must be >= 0, got {plateau_tol}")
    points = entropy_curve(series, n_min, n_max)
    top = max(h for _, h in points)
    chosen = next(n for n, h in points if h >= top - plateau_tol)
    return EntropyCurve(tuple(points), chosen, plateau_tol)
