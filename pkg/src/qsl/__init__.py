"""Purity speed limits for open quantum systems in Liouville space."""

from .bounds import (
    BoundReport,
    bound_report,
    cumulative_bounds,
    dephasing_purity_floor,
    hilbert_hs_bound,
    hilbert_sp_bound,
    liouville_bound,
    purity_bound_interval,
    purity_deviation_bound_interval,
)
from .lindblad import (
    Constant,
    Cosine,
    Exponential,
    Step,
    LindbladGenerator,
    apply_generator,
    diagonal_projection,
    partial_trace,
    purity,
    purity_deviation,
    random_density,
    random_pure_state,
)
from .liouville import build_superoperator, devectorize, skew_part, skew_spectral_norm, vectorize
from .propagate import (
    TimeGrid,
    Trajectory,
    evolve,
    evolve_direct,
    evolve_superop,
    step_propagators,
    verify_stationary,
)
from .scenarios import ScenarioSpec, catalog_scenario, load_scenario

__version__ = "0.1.0"
