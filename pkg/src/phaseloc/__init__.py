"""Phase retrieval via anchor-based localization.

Deterministic measurement ensembles whose induced graphs are lateration
graphs, a closed-form two-stage recovery algorithm, iterative baselines,
and a reproducible benchmark harness.
"""

from .baselines import (
    IterativeOptions,
    IterativeResult,
    fienup_recover,
    spectral_init,
    wf_gradient,
    wirtinger_flow,
)
from .bench import (
    ExperimentConfig,
    TrialRecord,
    read_csv,
    run_noise_experiment,
    run_success_experiment,
    run_timing_experiment,
    trial_seed,
    write_csv,
)
from .ensembles import (
    Coord,
    Dense,
    Diff,
    DiffImag,
    Ensemble,
    MeasurementSet,
    Sum,
    add_noise,
    apply_complex_map,
    apply_intensity,
    build_complex_full,
    build_complex_stage2,
    build_gaussian,
    build_real_full,
    build_real_stage2,
    intensity_value,
    measurement_matrix,
    to_dense,
)
from .errors import (
    BadDimension,
    BadSparsity,
    BadSupport,
    CollinearAnchors,
    DimensionMismatch,
    DimensionTooSmall,
    GraphMismatch,
    MissingMeasurement,
    NonpositiveMagnitude,
    PhaseLocError,
    SingularSystem,
    Underdetermined,
    UnstructuredVector,
    ZeroReference,
)
from .graphs import (
    Framework,
    MeasurementGraph,
    complex_distance,
    configurations_congruent,
    frameworks_equivalent,
    graph_from_ensemble,
    induced_framework,
    is_lateration,
    verify_lateration_ordering,
)
from .recovery import (
    Anchors,
    RecoveryOptions,
    counting_oracle,
    detect_support,
    noisy_oracle_from_signal,
    oracle_from_measurement_set,
    oracle_from_signal,
    recover_anchors,
    recover_complex,
    recover_real,
    recover_real_adaptive,
    recover_sensor,
)
from .signals import (
    as_signal,
    canonicalize,
    random_signal,
    random_sparse_signal,
    rel_error_up_to_phase,
    rel_error_up_to_phase_and_conj,
)

__version__ = "0.1.0"
