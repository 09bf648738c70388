"""Certified recurrence times for finite-dimensional quantum systems."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    applicable_bounds,
    base_step,
    bound_T1,
    bound_T2,
    bound_T3,
    bound_T4,
    ceil_pi_over,
    prop1_q_bounds,
)
from .diophantine import (
    BoundExceededWarning,
    DiffApproximation,
    diff_approx,
    dirichlet_simultaneous,
    fractional_decompose,
    method_q_bound,
    pair_errors,
)
from .errors import NormalizationWarning, PreconditionError, VerificationError
from .oracle import (
    ScanReport,
    brute_min_q,
    mc_volume_T,
    sample_states_sup,
    scan_first_recurrence,
)
from .recurrence import (
    RecurrenceCertificate,
    SystemRecurrenceReport,
    find_recurrence_constructive,
    is_state_recurrent_at,
    is_system_recurrent_at,
    verify_certificate,
    witness_nontrivial,
    worst_case_trace_distance,
)
from .spectral import (
    CONTINUOUS,
    DISCRETE,
    MixedEnsemble,
    PureState,
    Spectrum,
    circle_distance,
    make_spectrum,
    max_circle_distance,
    spectrum_from_rationals,
    survival_amplitude,
    trace_distance_mixed,
    trace_distance_pure,
)
from .tiling import (
    TileDecomposition,
    tile_decompose_T,
    tile_index_hypercube,
    tile_index_two_cube,
    tile_T_membership,
    volume_T,
)
