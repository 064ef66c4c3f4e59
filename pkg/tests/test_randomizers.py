import math

import numpy as np
import pytest

from leakgauge.anonymity import degree_of_anonymity
from leakgauge.data_io import SymbolicSeries, synth_random_ints
from leakgauge.errors import DataError
from leakgauge.perm_entropy import extract_patterns, permutation_entropy
from leakgauge.randomizers import (
    MECHANISMS,
    RandomizerConfig,
    bin_centers,
    blatant_ramp,
    exponential_mechanism,
    identity,
    laplace_mechanism,
    randomize,
)


def test_exponential_large_epsilon_snaps_to_nearest_center():
    s = SymbolicSeries.of([1.0, 2.2, 5.7, 9.9, 10.0])
    out = exponential_mechanism(s, RandomizerConfig(epsilon=1e6, candidate_bins=10, seed=3))
    centers = bin_centers(1.0, 10.0, 10)
    nearest = centers[np.argmin(np.abs(s.values[:, None] - centers[None, :]), axis=1)]
    np.testing.assert_array_equal(out.values, nearest)


def test_exponential_three_candidate_frequencies():
    # 10^5 records at 0 plus one at 3: centers 0.5, 1.5, 2.5 over span 3
    eps = 3.0
    s = SymbolicSeries(np.r_[np.zeros(100_000), 3.0])
    out = exponential_mechanism(s, RandomizerConfig(epsilon=eps, candidate_bins=3, seed=11)).values[:-1]
    w = [math.exp(eps * (-c / 3.0) / 2) for c in (0.5, 1.5, 2.5)]
    expected = [x / sum(w) for x in w]
    freq = [np.mean(out == c) for c in (0.5, 1.5, 2.5)]
    assert freq == pytest.approx(expected, abs=1e-2)


def test_exponential_private_degree_close():
    s = synth_random_ints(10000, 1, 100, 8)
    out = exponential_mechanism(s, RandomizerConfig(epsilon=0.337, candidate_bins=100, seed=9))
    assert abs(degree_of_anonymity(s, 11).degree - degree_of_anonymity(out, 11).degree) <= 1e-3


def test_exponential_constant_series():
    with pytest.raises(DataError):
        exponential_mechanism(SymbolicSeries.of([4, 4, 4]), RandomizerConfig())


def test_laplace_vanishing_noise():
    s = SymbolicSeries.of([1.0, -3.0, 7.5])
    out = laplace_mechanism(s, RandomizerConfig(kind="laplace", epsilon=1e12, seed=1))
    np.testing.assert_allclose(out.values, s.values, atol=1e-9)


def test_laplace_mean_zero():
    n, b = 100_000, 2.0
    s = SymbolicSeries(np.zeros(n))
    out = laplace_mechanism(s, RandomizerConfig(kind="laplace", epsilon=0.5, sensitivity=1.0, seed=5))
    se = math.sqrt(2 * b * b / n)
    assert abs(out.values.mean()) < 3 * se
    # variance of Laplace(0, b) is 2 b^2
    assert out.values.var() == pytest.approx(2 * b * b, rel=0.05)


def test_ramp():
    assert blatant_ramp(SymbolicSeries.of([9, 3, 3, 1, 7])).values.tolist() == [0, 1, 2, 3, 4]
    out = blatant_ramp(synth_random_ints(944, 1, 100, 0))
    assert out.N == 944
    assert degree_of_anonymity(out, 2).degree == 0.0
    for n in range(2, 12):
        assert permutation_entropy(extract_patterns(out, n)) == 0.0


def test_identity():
    s = SymbolicSeries.of([2, 1, 3])
    assert identity(s) is s


@pytest.mark.parametrize(
    "kw",
    [
        dict(kind="exponential", epsilon=0.0),
        dict(kind="laplace", sensitivity=0.0),
        dict(kind="exponential", candidate_bins=1),
        dict(kind="shuffle"),
        dict(seed=-1),
        dict(seed=2**64),
    ],
)
def test_config_validation(kw):
    with pytest.raises(DataError):
        RandomizerConfig(**kw)


@pytest.mark.parametrize("kind", MECHANISMS)
def test_alignment_and_determinism(kind):
    rng = np.random.default_rng(0)
    for trial in range(25):
        n = int(rng.integers(2, 300))
        s = SymbolicSeries(rng.normal(size=n))
        cfg = RandomizerConfig(kind=kind, seed=trial)
        a, b = randomize(s, cfg), randomize(s, cfg)
        assert a.N == s.N
        assert a.values.tobytes() == b.values.tobytes()


def test_noise_is_per_record():
    # record i of the output depends on record i of the input only
    s = synth_random_ints(50, 1, 100, 0)
    cfg = RandomizerConfig(kind="laplace", seed=4)
    base = laplace_mechanism(s, cfg).values
    shifted = SymbolicSeries(s.values + np.eye(50, dtype=np.int64)[7] * 1000)
    out = laplace_mechanism(shifted, cfg).values
    changed = np.flatnonzero(out != base)
    assert changed.tolist() == [7]
