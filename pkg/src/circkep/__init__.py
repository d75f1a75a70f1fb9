"""Damped-Kepler collision laboratory.

Simulation and classification of planar Kepler motion under power-law drag
delta*|udot|^(alpha+1)/|u|^beta: regime prediction from the discriminant
gamma = alpha + 2*beta - 3, singularity-rescaling charts for the collision
asymptotics, equilibrium/stability reports, decay-rate fits, and (alpha,
beta) regime diagrams.
"""

from .charts import (
    ChartId,
    ChartState,
    HamiltonianValue,
    chart_ecc_sq,
    chart_ecc_vector,
    chart_field,
    chart_from_reduced,
    chart_rhs,
    ecc_sq_coords,
    hamiltonian,
    reduced_from_chart,
    select_chart,
)
from .equilibria import (
    EquilibriumReport,
    Stability,
    critical_boundary_equilibrium,
    critical_interior_equilibrium,
    critical_jacobian,
    eigenvalues_small,
    gamma_pos_equilibrium,
    numeric_jacobian,
    regime_equilibria,
    zero_hopf_report,
)
from .integrator import (
    Direction,
    EventSpec,
    IntegrationConfig,
    KernelField,
    Termination,
    Trajectory,
    backend_name,
    convergence_order,
    integrate,
)
from .model import (
    CartesianState,
    DampingParams,
    Observables,
    ReducedState,
    cartesian_field,
    cartesian_from_reduced,
    cartesian_rhs,
    damping_magnitude,
    eccentricity_vector,
    make_params,
    observables,
    reduced_ecc_sq,
    reduced_energy,
    reduced_field,
    reduced_from_cartesian,
    reduced_rhs,
    undamped_cartesian_field,
    undamped_cartesian_rhs,
    undamped_reduced_field,
)
from .regime import (
    OmegaVerdict,
    OutcomeReport,
    PBehavior,
    PowerLawFit,
    Regime,
    RegimeDiagram,
    SweepEntry,
    collision_time_verdict,
    fit_power_law,
    observed_regime,
    predicted_regime,
    simulate_outcome,
    standard_ic,
    sweep,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
