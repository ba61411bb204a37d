"""Exact arithmetic around ternary expansions of powers of two.

Four layers:

- ternary: canonical base-3 digit vectors, dyadic rationals, digit-omission
  counting and stepping on plain integers.
- sieve: residue sieves and exact enumeration of exponents n for which
  floor(lam * 2^n) has a digit-2-free ternary expansion.
- orbit: the continued fraction of log3(2), three-distance arc spectra,
  leading-digit interval censuses, and the run-of-zeros construction that
  builds integers 2^m with long zero blocks.
- cantor: carry automata recognizing digit prefixes admissible under
  simultaneous multiplication, exact prefix counts, spectral dimension
  enclosures, and membership scans.

Everything user-facing is re-exported here; the command line lives in
ternpow.cli.
"""

from .errors import (
    InsufficientDepth,
    InsufficientDigits,
    PrecisionError,
    SizeGuardError,
    TernpowError,
)
from .ternary import (
    DyadicRational,
    TernaryNat,
    count_omitting_upto,
    digits_to_int,
    double,
    floor_lambda_pow2,
    floor_times_pow2,
    int_omits_digit,
    int_to_digits,
    leading_digits,
    mul_small,
    next_omitting,
    omits_digit,
    pow2,
    prev_omitting,
)
from .sieve import (
    PadicApprox,
    SieveReport,
    TildeCount,
    count_N,
    count_tilde_N,
    enumerate_digit2free_powers,
    multiplicative_order_pow2,
    narkiewicz_check,
    residue_survivors,
    sieve_report,
    survivor_chain,
    survivors_N,
)
from .orbit import (
    CensusReport,
    CFExpansion,
    ConstructionState,
    FindLk,
    GapSpectrum,
    LeadingClassification,
    LeadingInterval,
    LevelReport,
    census_bound_check,
    cf_log3_2,
    check_lemma22,
    classify_leading,
    construct_theorem12,
    find_lk,
    leading_interval,
    special_two_length,
    theorem11_census,
    three_gap,
    three_gap_bruteforce,
)
from .cantor import (
    CarryAutomaton,
    DimensionEstimate,
    GreedyElement,
    MultiplierSet,
    ScanResult,
    ScanRow,
    SigmaSubsetReport,
    WitnessResult,
    build_automaton,
    count_prefixes,
    exact_charpoly,
    greedy_element,
    hausdorff_dimension,
    scan_problems,
    smallest_witness,
    theorem17_search,
    trim,
    verify_sigma_subsets,
)

__version__ = "1.0.0"

__all__ = [
    "__version__",
    # errors
    "TernpowError",
    "PrecisionError",
    "SizeGuardError",
    "InsufficientDigits",
    "InsufficientDepth",
    # ternary
    "TernaryNat",
    "DyadicRational",
    "double",
    "mul_small",
    "pow2",
    "omits_digit",
    "leading_digits",
    "int_to_digits",
    "digits_to_int",
    "int_omits_digit",
    "next_omitting",
    "prev_omitting",
    "count_omitting_upto",
    "floor_times_pow2",
    "floor_lambda_pow2",
    # sieve
    "PadicApprox",
    "SieveReport",
    "TildeCount",
    "multiplicative_order_pow2",
    "survivor_chain",
    "residue_survivors",
    "enumerate_digit2free_powers",
    "sieve_report",
    "narkiewicz_check",
    "count_N",
    "survivors_N",
    "count_tilde_N",
    # orbit
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
    "FindLk",
    "LevelReport",
    "ConstructionState",
    "find_lk",
    "construct_theorem12",
    # cantor
    "MultiplierSet",
    "CarryAutomaton",
    "build_automaton",
    "trim",
    "count_prefixes",
    "DimensionEstimate",
    "hausdorff_dimension",
    "exact_charpoly",
    "GreedyElement",
    "greedy_element",
    "WitnessResult",
    "theorem17_search",
    "smallest_witness",
    "SigmaSubsetReport",
    "verify_sigma_subsets",
    "ScanResult",
    "ScanRow",
    "scan_problems",
]
