"""Real-orbit side: continued fractions, three-distance spectra, leading
ternary digit intervals, and the dyadic Cantor-set construction."""

from .cf import CFExpansion, cf_log3_2, check_lemma22
from .construction import (
    ConstructionState,
    FindLk,
    LevelReport,
    construct_theorem12,
    find_lk,
)
from .gaps import (
    GapSpectrum,
    special_two_length,
    three_gap,
    three_gap_bruteforce,
)
from .leading import (
    CensusReport,
    LeadingClassification,
    LeadingInterval,
    census_bound_check,
    classify_leading,
    leading_interval,
    theorem11_census,
)

__all__ = [
    "CFExpansion",
    "cf_log3_2",
    "check_lemma22",
    "GapSpectrum",
    "three_gap",
    "three_gap_bruteforce",
    "special_two_length",
    "LeadingInterval",
    "LeadingClassification",
    "CensusReport",
    "leading_interval",
    "classify_leading",
    "theorem11_census",
    "census_bound_check",
    "ConstructionState",
    "FindLk",
    "LevelReport",
    "find_lk",
    "construct_theorem12",
]
