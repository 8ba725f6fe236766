"""Liouville-like functions lambda_A(n) = (-1)^omega_A(n) or (-1)^Omega_A(n) for pairwise
coprime generator sets A, with segmented sieving, mean values and shifted correlations."""

from .bounds import BoundReport, distance_sum, hall_tenenbaum_bound, prime_reciprocal_sum
from .coprime_set import (
    CoprimeSet,
    Decomposition,
    Variant,
    builtin_family,
    decompose,
    iota,
    validate,
)
from .errors import (
    ArityTooLarge,
    BadParams,
    DegenerateSpec,
    ElementTooSmall,
    LLikeError,
    NotCoprime,
    NotInSemigroup,
    RangeTooLarge,
    SemigroupOverflow,
    SetBoundExceeded,
)
from .estimators import (
    ConvergenceReport,
    CorrelationSpec,
    convergence_grid,
    correlate,
    mean,
    truncation_diagnostic,
)
from .semigroup import (
    SemigroupEnumeration,
    enumerate_semigroup,
    lcm_moment,
    reciprocal_mass,
    tail_mass,
)
from .sieve import (
    SieveTable,
    extract_c_part,
    lambda_parts,
    lambda_prefix_sums,
    lambda_values,
    sieve_range,
    sieve_table,
    verify_convolution,
    verify_convolution_range,
)

__version__ = "0.1.0"
