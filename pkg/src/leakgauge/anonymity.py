"""Degree of anonymity and the amplification-based leak score."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field

from .data_io import SymbolicSeries
from .errors import AlignmentError, DataError
from .perm_entropy import extract_patterns, permutation_entropy

CLAMP = 1e-9
DEFAULT_EQ_TOL = 1e-3

FLAG_CLAMPED = "degree_clamped"
FLAG_NO_DP_BOUND = "no_informative_dp_bound"


class Direction(str, enum.Enum):
    INCREASED = "Increased"
    DECREASED = "Decreased"
    UNCHANGED = "Unchanged"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AnonymityScore:
    entropy_bits: float
    max_entropy_bits: float
    degree: float
    n: int
    N: int


def degree_of_anonymity(series: SymbolicSeries, n: int) -> AnonymityScore:
    """Permutation entropy at length ``n`` normalized by log2(N)."""
    if series.N < 2:
        raise DataError(f"degree of anonymity needs N >= 2, got N={series.N}")
    h = permutation_entropy(extract_patterns(series, n))
    hm = math.log2(series.N)
    # H <= log2(N - n + 1) < log2(N), so only rounding can push d past 1
    d = min(h / hm, 1.0)
    return AnonymityScore(h, hm, d, n, series.N)


def _check_degree(d: float, label: str) -> None:
    if not (0.0 <= d <= 1.0):
        raise DataError(f"{label}={d} is not a degree in [0, 1]")


def clamp_degree(d: float) -> float:
    return min(max(d, CLAMP), 1.0 - CLAMP)


def needs_clamp(d: float) -> bool:
    return clamp_degree(d) != d


def amplification_bound(d1: float, d2: float) -> float:
    """gamma = (d2/d1) * ((1-d1)/(1-d2)), degrees clamped into [1e-9, 1-1e-9]."""
    _check_degree(d1, "d1")
    _check_degree(d2, "d2")
    d1, d2 = clamp_degree(d1), clamp_degree(d2)
    return (d2 / d1) * ((1.0 - d1) / (1.0 - d2))


def info_coefficient(gamma: float) -> float:
    """Information coefficient of correlation sqrt(1 - exp(-2 gamma))."""
    if not (math.isfinite(gamma) and gamma > 0):
        raise DataError(f"gamma must be positive and finite, got {gamma}")
    return math.sqrt(-math.expm1(-2.0 * gamma))


def epsilon_estimate(gamma: float) -> float:
    """Empirical DP noise level ln(gamma); may be negative (uninformative)."""
    if not (math.isfinite(gamma) and gamma > 0):
        raise DataError(f"gamma must be positive and finite, got {gamma}")
    return math.log(gamma)


def classify_risk(d1: float, d2: float, eq_tol: float = DEFAULT_EQ_TOL) -> Direction:
    if abs(d1 - d2) <= eq_tol:
        return Direction.UNCHANGED
    return Direction.DECREASED if d1 < d2 else Direction.INCREASED


@dataclass(frozen=True)
class AmplificationReport:
    d1: float
    d2: float
    gamma: float
    r1: float
    epsilon: float
    direction: Direction
    n: int
    N: int
    clamped: bool
    flags: tuple[str, ...] = field(default_factory=tuple)
    eq_tol: float = DEFAULT_EQ_TOL
    entropy1_bits: float | None = None
    entropy2_bits: float | None = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["direction"] = self.direction.value
        out["flags"] = list(self.flags)
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def report_from_degrees(d1: float, d2: float, n: int, N: int, eq_tol: float = DEFAULT_EQ_TOL, **extra) -> AmplificationReport:
    gamma = amplification_bound(d1, d2)
    eps = epsilon_estimate(gamma)
    clamped = needs_clamp(d1) or needs_clamp(d2)
    flags = []
    if clamped:
        flags.append(FLAG_CLAMPED)
    if eps <= 0:
        flags.append(FLAG_NO_DP_BOUND)
    return AmplificationReport(
        d1=d1,
        d2=d2,
        gamma=gamma,
        r1=info_coefficient(gamma),
        epsilon=eps,
        direction=classify_risk(d1, d2, eq_tol),
        n=n,
        N=N,
        clamped=clamped,
        flags=tuple(flags),
        eq_tol=eq_tol,
        **extra,
    )


def assess_pair(
    original: SymbolicSeries,
    randomized: SymbolicSeries,
    n: int,
    eq_tol: float = DEFAULT_EQ_TOL,
) -> AmplificationReport:
    """Score a randomizer's output against its input.

    Both series must have the same length: the comparison assumes the
    randomizer preserved record order.
    """
    if original.N != randomized.N:
        raise AlignmentError(
            f"original has {original.N} records but randomized has {randomized.N}; "
            "the randomized output must keep the original record order and length (no shuffling or dropping)"
        )
    s1 = degree_of_anonymity(original, n)
    s2 = degree_of_anonymity(randomized, n)
    return report_from_degrees(
        s1.degree, s2.degree, n, original.N, eq_tol,
        entropy1_bits=s1.entropy_bits, entropy2_bits=s2.entropy_bits,
    )
