"""permstab: exact pattern statistics on permutations of multisets.

The package answers questions of the shape "how is the number of occurrences
of a pattern distributed over all rearrangements of a multiset, and does that
distribution survive reshuffling the multiplicities?" with exact integer
arithmetic throughout: occurrence counting and distributions
(:mod:`~permstab.patterns`), distribution-preserving bijections
(:mod:`~permstab.bijections`), self-overlap analysis and instability
witnesses (:mod:`~permstab.extendability`), orbit scans
(:mod:`~permstab.stability`), and generalized Eulerian numbers with their
generating functions (:mod:`~permstab.eulerian`).
"""

from .bijections import RunDecomposition, decompose, phi, psi, reverse, tau, theta
from .cache import ResultCache
from .core import (
    BudgetExceededError,
    DEFAULT_BUDGET,
    IntegrityError,
    Multiset,
    Word,
    apply_sigma,
    canonical_form,
    count_words,
    enumerate_words,
    format_multiset,
    format_word,
    make_multiset,
    multiplicity_rearrangements,
    parse_multiset,
    parse_word,
    transpose_multiset,
    word_multiset,
)
from .eulerian import (
    ATable,
    EulerianTable,
    a_bruteforce,
    a_recurrence_check,
    a_table,
    eulerian_table,
    gf21_coefficient,
    macmahon_coefficient,
    verify_gf,
    verify_pde,
)
from .extendability import (
    ExtendabilityReport,
    WitnessPair,
    classical_instability_witness,
    consecutive_instability_witness,
    extendability_report,
    extendable_indices,
    extended_multiset,
    extended_permutation,
    gap_vectors,
)
from .patterns import (
    Distribution,
    Pattern,
    all_patterns,
    avoids,
    count_occurrences,
    distribution,
    distributions,
    format_pattern,
    is_proven_stable,
    parse_pattern,
)
from .series import TruncatedSeries
from .stability import (
    ScanReport,
    StabilityVerdict,
    StabilityWitness,
    is_i_stable_on,
    is_stable_on,
    parse_family,
    scan,
)

__version__ = "0.1.0"

__all__ = [
    "ATable",
    "BudgetExceededError",
    "DEFAULT_BUDGET",
    "Distribution",
    "EulerianTable",
    "ExtendabilityReport",
    "IntegrityError",
    "Multiset",
    "Pattern",
    "ResultCache",
    "RunDecomposition",
    "ScanReport",
    "StabilityVerdict",
    "StabilityWitness",
    "TruncatedSeries",
    "WitnessPair",
    "Word",
    "a_bruteforce",
    "a_recurrence_check",
    "a_table",
    "all_patterns",
    "apply_sigma",
    "avoids",
    "canonical_form",
    "classical_instability_witness",
    "consecutive_instability_witness",
    "count_occurrences",
    "count_words",
    "decompose",
    "distribution",
    "distributions",
    "enumerate_words",
    "eulerian_table",
    "extendability_report",
    "extendable_indices",
    "extended_multiset",
    "extended_permutation",
    "format_multiset",
    "format_pattern",
    "format_word",
    "gap_vectors",
    "gf21_coefficient",
    "is_i_stable_on",
    "is_proven_stable",
    "is_stable_on",
    "macmahon_coefficient",
    "make_multiset",
    "multiplicity_rearrangements",
    "parse_family",
    "parse_multiset",
    "parse_pattern",
    "parse_word",
    "phi",
    "psi",
    "reverse",
    "scan",
    "tau",
    "theta",
    "transpose_multiset",
    "verify_gf",
    "verify_pde",
    "word_multiset",
    "__version__",
]
