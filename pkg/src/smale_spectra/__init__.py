"""Spectral triples, weight cocycles, and certified trace asymptotics for
shifts of finite type."""

from .errors import (
    BracketUndefined,
    EmptySupport,
    InsufficientWindow,
    MismatchedShift,
    NonDiagonalLocalization,
    NonPositiveS,
    NonPositiveT,
    NotInStableClass,
    OutsideSupport,
    OverlappingOrbitSets,
    ParseError,
    PeriodicPointExcluded,
    ReducibleMatrix,
    SmaleSpectraError,
    TruncationInsufficient,
    UncertifiedCounts,
    ValidationError,
    ZeroMatrix,
)
from .sft_core import (
    Cylinder,
    EdgeShift,
    HeteroclinicPoint,
    PeriodicOrbit,
    backward_agreement_end,
    bracket,
    enumerate_heteroclinic,
    forward_agreement_start,
    full_shift,
    golden_mean_shift,
    metric,
    shift,
    stably_equivalent,
    unstably_equivalent,
)
from .groupoid_rep import (
    BasicFunction,
    BasicSet,
    ExactComplex,
    StateVector,
    adjoint,
    alpha,
    apply_all,
    convolve,
    unitary_shift,
)
from .weights import (
    WeightSystem,
    entry_index,
    entry_ramp_value,
    hop_bound,
    omega0,
    omega_s,
    stable_distance,
    stable_lipschitz_constant,
    stable_set_contains,
    transport_jump_candidates,
)
from .spectral_traces import (
    DIRAC_KINDS,
    CountSeries,
    DiracKind,
    Shell,
    ShellClass,
    TraceResult,
    commutator_apply,
    commutator_norm_bound,
    count_series,
    count_series_enumerated,
    dirac_apply,
    dirac_eigenvalue,
    restricted_norm,
    ruelle_unitary,
    spectral_dimension,
    standard_localization,
    theta_trace,
    unitary_commutator_norm,
    zeta_trace,
)
from .entropy import (
    EntropyResult,
    PerronEnclosure,
    entropy_counting,
    entropy_perron,
    least_squares_line,
    perron_enclosure,
)

__version__ = "0.1.0"
