"""Fourier pseudo-spectral solver for the weakly nonlinear fractional sine-Gordon flow."""

from .dynamics import (
    BlowUpError,
    ModelParams,
    OscillatoryMapping,
    State,
    Variant,
    evolve,
    initial_state,
    nonlinear_term,
    oscillatory_wrap,
    phi_from_uv,
    reconstruct_uv,
    strang_step,
)
from .experiments import (
    ConvergenceReport,
    Horizon,
    ReferenceCache,
    SweepPlan,
    energy_drift_series,
    observed_order,
    osc_order_table,
    reference_solution,
    run_trajectory,
    spatial_sweep,
    steps_for,
    temporal_sweep,
)
from .observables import (
    EnergySample,
    EnergyTracker,
    cosine_potential,
    discrete_energy,
    error_norm,
    sobolev_norm,
    twisted_increment,
)
from .scenarios import SCENARIO_NAMES, ScenarioSpec, make_scenario
from .spectral import (
    Field,
    GridSpec,
    Space,
    SymbolSet,
    apply_symbol,
    build_symbols,
    coefficient_at,
    forward_transform,
    inverse_transform,
    resample,
    single_mode,
)

__version__ = "0.1.0"
