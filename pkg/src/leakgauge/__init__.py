"""Information-theoretic estimation of privacy-leak risk.

Compares the ordinal-pattern entropy of a dataset with that of its
randomized release and turns the pair into an amplification score.
"""

from .anonymity import (
    AmplificationReport,
    AnonymityScore,
    Direction,
    amplification_bound,
    assess_pair,
    classify_risk,
    degree_of_anonymity,
    epsilon_estimate,
    info_coefficient,
)
from .data_io import SymbolicSeries, Table, encode_ordinal, load_csv, reduce_to_1d, synth_random_ints
from .errors import AlignmentError, DataError, LeakGaugeError
from .mic import MicResult, build_count_matrix, discrete_mi, equipartition_edges, mic, normalized_mi
from .perm_entropy import Pattern, PatternDistribution, extract_patterns, optimal_pattern_length, permutation_entropy
from .randomizers import RandomizerConfig, blatant_ramp, exponential_mechanism, identity, laplace_mechanism, randomize

__version__ = "0.1.0"
