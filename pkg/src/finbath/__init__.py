"""Finite-bath quantum thermodynamics: exact dynamics, entropy production,
erasure bounds, and the closed-form swap engine."""

__version__ = "0.1.0"

from .qdyn import (
    CompositeSpace,
    DensityMatrix,
    HermitianOperator,
    SpectralDecomposition,
    evolve,
    partial_trace,
    pauli,
    relative_entropy,
    von_neumann_entropy,
)
from .thermo import (
    BathSpectrum,
    EffectiveBeta,
    EnergyCoarseGraining,
    EntropyLedger,
    ThermoTrajectory,
    build_trajectory,
    canonical_energy,
    canonical_entropy,
    canonical_variance,
    energy_coarse_graining,
    entropy_ledger,
    finest_coarse_graining,
    gibbs_state,
    observational_entropy,
    quadrature_cross_check,
    sigma_tilde,
    solve_beta,
)
from .models import (
    InitialCondition,
    RandomMatrixModel,
    SpinChainModel,
    build_random_matrix,
    build_spin_chain,
    prepare_initial,
)
from .bounds import (
    BoundSeries,
    KrausSet,
    bound_clausius_1865,
    bound_goold_2015,
    bound_landauer_1961,
    bound_reebwolf_2014,
    bound_timpanaro_2020,
    build_kraus,
)
from .engine import (
    CycleRecord,
    EngineTrajectory,
    SwapEngineParams,
    cycle_quantities,
    discontinuity_errors,
    efficiency_pair,
    extraction_condition,
    hot_temperature_after,
    run_engine,
)
