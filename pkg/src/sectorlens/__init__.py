"""Sector lengths, shadow enumerators, and monogamy polytopes for multiqubit states."""

from .errors import (
    CapabilityError,
    CertificationError,
    ContractViolation,
    InternalConsistencyError,
)
from .pauli import (
    PauliIndex,
    PureState,
    ReducedState,
    expect_pauli,
    haar_random_state,
    partial_trace,
    pauli_strings,
    state_from_terms,
    time_reverse,
)
from .sectors import (
    SectorVector,
    linear_entropy_avg,
    overlap_R,
    overlap_R_from_sectors,
    purity,
    purity_overlap_functional,
    reduced_purity_sum,
    sector_lengths,
    sector_lengths_brute,
    sector_lengths_of_matrix,
    sector_lengths_via_purities,
)

__version__ = "0.1.0"
