"""Approximate Maximal Information Coefficient by restricted grid search.

Each axis is cut either by mass (equal point counts) or range (equal
widths); every k x l grid with k*l <= B(n) and all four axis-kind
combinations is scored by normalized mutual information.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DataError

MASS = "mass"
RANGE = "range"
KINDS = (MASS, RANGE)
DEFAULT_BUDGET_EXPONENT = 0.6


class Partition(NamedTuple):
    edges: np.ndarray
    kind: str
    degenerate: bool

    @property
    def parts(self) -> int:
        return len(self.edges) + 1


def _mass_edges(values: np.ndarray, parts: int) -> np.ndarray:
    s = np.sort(values)
    n = s.size
    # positions where a cut can sit: between s[j-1] and s[j] with s[j-1] < s[j]
    valid = np.flatnonzero(s[1:] != s[:-1]) + 1
    if valid.size == 0:
        return np.empty(0)
    cuts = []
    for i in range(1, parts):
        target = i * n / parts
        pos = int(np.searchsorted(valid, target))
        candidates = [valid[c] for c in (pos - 1, pos) if 0 <= c < valid.size]
        # nearest valid boundary, the later one on a tie
        j = min(candidates, key=lambda c: (abs(c - target), -c))
        cuts.append(j)
    cuts = sorted(set(cuts))
    return np.array([(s[j - 1] + s[j]) / 2.0 for j in cuts])


def _range_edges(values: np.ndarray, parts: int) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return np.empty(0)
    edges = lo + (hi - lo) * np.arange(1, parts) / parts
    return np.unique(edges)


def equipartition_edges(values: Sequence[float], parts: int, kind: str = MASS) -> Partition:
    """Interior cut points splitting ``values`` into ``parts`` bins.

    Bins are half-open ``[e_{i-1}, e_i)`` with the last bin closed. Mass
    cuts never split a run of tied values, so ties can leave bins unequal
    or fewer than requested; that sets ``degenerate`` rather than failing.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise DataError("cannot partition an empty series")
    if parts < 1:
        raise DataError(f"parts must be >= 1, got {parts}")
    if kind == MASS:
        edges = _mass_edges(values, parts) if parts > 1 else np.empty(0)
    elif kind == RANGE:
        edges = _range_edges(values, parts) if parts > 1 else np.empty(0)
    else:
        raise DataError(f"unknown partition kind {kind!r}")
    degenerate = edges.size + 1 < parts
    if kind == MASS and not degenerate and parts > 1:
        sizes = np.bincount(bin_index(values, edges), minlength=parts)
        degenerate = bool(sizes.max() - sizes.min() > 1)
    return Partition(edges, kind, bool(degenerate))


def bin_index(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    return np.searchsorted(edges, values, side="right")


@dataclass(frozen=True)
class CountMatrix:
    counts: np.ndarray

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @property
    def l(self) -> int:
        return self.counts.shape[1]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def normalized(self) -> "ProbMatrix":
        return ProbMatrix(self.counts / self.total)


@dataclass(frozen=True)
class ProbMatrix:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 2 or p.size == 0:
            raise DataError(f"probability matrix must be a nonempty 2-D array, got shape {p.shape}")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise DataError("probability matrix must be nonnegative and sum to 1")
        object.__setattr__(self, "probs", p)

    @property
    def row_marginals(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    @property
    def col_marginals(self) -> np.ndarray:
        return self.probs.sum(axis=0)


def build_count_matrix(x: Sequence[float], y: Sequence[float], row_edges, col_edges) -> CountMatrix:
    """Bin paired points; rows follow ``x``, columns follow ``y``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError(f"x and y must be 1-D and equally long, got {x.shape} and {y.shape}")
    if x.size == 0:
        raise DataError("no points to bin")
    row_edges = np.asarray(row_edges, dtype=float)
    col_edges = np.asarray(col_edges, dtype=float)
    k, l = row_edges.size + 1, col_edges.size + 1
    flat = bin_index(x, row_edges) * l + bin_index(y, col_edges)
    return CountMatrix(np.bincount(flat, minlength=k * l).reshape(k, l))


def _as_probs(P) -> np.ndarray:
    if isinstance(P, ProbMatrix):
        return P.probs
    if isinstance(P, CountMatrix):
        return P.normalized().probs
    return ProbMatrix(P).probs


def discrete_mi(P) -> float:
    """Mutual information in bits of a joint probability matrix."""
    p = _as_probs(P)
    outer = np.outer(p.sum(axis=1), p.sum(axis=0))
    nz = p > 0
    mi = float(np.sum(p[nz] * np.log2(p[nz] / outer[nz])))
    return mi if mi > 0 else 0.0


def normalized_mi(P) -> float:
    """Mutual information divided by log2(min(k, l)); 0 when an axis has one cell."""
    p = _as_probs(P)
    m = min(p.shape)
    if m < 2:
        return 0.0
    return min(discrete_mi(p) / math.log2(m), 1.0)


def budget(n: int, exponent: float = DEFAULT_BUDGET_EXPONENT) -> int:
    return max(4, math.floor(n ** exponent))


def grid_shapes(B: int, cap: int | None = None) -> list[tuple[int, int]]:
    top = B // 2
    if cap is not None:
        top = min(top, cap)
    return [(k, l) for k in range(2, top + 1) for l in range(2, top + 1) if k * l <= B]


@dataclass(frozen=True)
class GridScore:
    k: int
    l: int
    x_kind: str
    y_kind: str
    mi: float
    nmi: float
    k_eff: int
    l_eff: int

    def sort_key(self):
        # tie order: smaller k, smaller l, mass before range
        return (-self.nmi, self.k, self.l, KINDS.index(self.x_kind), KINDS.index(self.y_kind))


@dataclass(frozen=True)
class MicResult:
    mic: float
    best: GridScore
    budget: int
    n: int
    table: tuple[GridScore, ...] = field(repr=False)

    @property
    def best_k(self) -> int:
        return self.best.k

    @property
    def best_l(self) -> int:
        return self.best.l

    def to_dict(self) -> dict:
        return {
            "mic": self.mic,
            "best_k": self.best.k,
            "best_l": self.best.l,
            "best_x_kind": self.best.x_kind,
            "best_y_kind": self.best.y_kind,
            "budget": self.budget,
            "n": self.n,
            "grids": [
                {"k": g.k, "l": g.l, "x_kind": g.x_kind, "y_kind": g.y_kind,
                 "k_eff": g.k_eff, "l_eff": g.l_eff, "I": g.mi, "I_star": g.nmi}
                for g in self.table
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _score(x_bins: dict, y_bins: dict, k: int, l: int, xk: str, yk: str) -> GridScore:
    xi, kx = x_bins[(k, xk)]
    yi, ly = y_bins[(l, yk)]
    counts = np.bincount(xi * ly + yi, minlength=kx * ly).reshape(kx, ly)
    P = counts / counts.sum()
    # a collapsed axis (ties) has fewer effective cells; normalize by what exists
    return GridScore(k, l, xk, yk, discrete_mi(P), normalized_mi(P), kx, ly)


def mic(
    x: Sequence[float],
    y: Sequence[float],
    budget_exponent: float = DEFAULT_BUDGET_EXPONENT,
    cap: int | None = None,
    workers: int = 1,
) -> MicResult:
    """Maximum normalized mutual information over the restricted grid family."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError(f"x and y must be 1-D and equally long, got {x.shape} and {y.shape}")
    n = x.size
    if n < 4:
        raise DataError(f"MIC needs at least 4 points, got {n}")
    B = budget(n, budget_exponent)
    shapes = grid_shapes(B, cap)

    def binned(values, sizes):
        out = {}
        for parts in sizes:
            for kind in KINDS:
                part = equipartition_edges(values, parts, kind)
                out[(parts, kind)] = (bin_index(values, part.edges), part.parts)
        return out

    x_bins = binned(x, sorted({k for k, _ in shapes}))
    y_bins = binned(y, sorted({l for _, l in shapes}))
    jobs = [(k, l, xk, yk) for k, l in shapes for xk in KINDS for yk in KINDS]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            table = list(pool.map(lambda j: _score(x_bins, y_bins, *j), jobs))
    else:
        table = [_score(x_bins, y_bins, *j) for j in jobs]
    best = min(table, key=GridScore.sort_key)
    return MicResult(best.nmi, best, B, n, tuple(table))
