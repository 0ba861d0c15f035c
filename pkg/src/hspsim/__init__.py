"""Exact simulation of hidden-subgroup experiments on small finite groups."""

__version__ = "0.1.0"

from .config import ExperimentConfig, parse_config, serialize_config
from .engine import (
    OutcomeDistribution,
    PipelineConfig,
    QuantumState,
    run_pipeline,
    sample,
    step_trace,
)
from .errors import ConfigError, IntegrityError, ResourceCapError
from .groups import (
    CyclicGroup,
    DihedralGroup,
    FiniteGroup,
    GroupElement,
    ProductGroup,
    QuotientGroup,
    Subgroup,
    all_subgroups,
    group_from_spec,
    left_cosets,
    quotient_group,
    subgroup_from_generators,
)
from .oracle import HspInstance, OracleUnitary, apply_oracle, build_instance, classical_brute_force_hsp
from .recovery import (
    PeriodEstimate,
    RankedCandidates,
    RecoveryResult,
    SampleSet,
    character_sieve,
    continued_fraction_period,
    period_from_samples,
    simon_solve,
    subgroup_consistency_rank,
)
from .representations import (
    BasisOrdering,
    FourierOperator,
    Irrep,
    contragredient,
    fourier_operator,
    irreps_of,
    verify_representation_suite,
)
from .transversals import (
    ApproximateFunction,
    PeriodicInstance,
    Transversal,
    approximate_function,
    finite_transversal,
    offset_transversal,
    peak_mass,
    shor_pipeline,
    shor_transversal,
    transversal_quality_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
