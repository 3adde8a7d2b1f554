"""Mean-field, moment and stochastic dynamics of a driven optomechanical
cavity coupled to a quantum-well exciton."""

__version__ = "0.1.0"

from .ensemble import EnsembleResult, run_ensemble, run_trajectory
from .errors import (
    InsufficientDataError,
    InsufficientOscillationError,
    IntegrationDivergedError,
    PhysicalityError,
    ScenarioError,
    SimulationError,
    StiffnessError,
    TrajectoryError,
    UnknownPresetError,
    UnsupportedModelError,
)
from .integrators import integrate, solve
from .models import make_rhs, rhs
from .moments import propagate_moments
from .observables import (
    TimeSeries,
    energy_balance_residual,
    envelope_summary,
    intensity,
    steady_state_estimate,
)
from .params import (
    IntegratorSettings,
    MeanFieldState,
    ModelParams,
    Modulation,
    Scenario,
)
from .presets import preset, preset_names, preset_sweep
from .runner import simulate
from .scenario_io import parse_scenario, parse_sweep, write_scenario

__all__ = [
    "EnsembleResult", "InsufficientDataError", "InsufficientOscillationError",
    "IntegrationDivergedError", "IntegratorSettings", "MeanFieldState", "ModelParams",
    "Modulation", "PhysicalityError", "Scenario", "ScenarioError", "SimulationError",
    "StiffnessError", "TimeSeries", "TrajectoryError", "UnknownPresetError",
    "UnsupportedModelError", "energy_balance_residual", "envelope_summary", "integrate",
    "intensity", "make_rhs", "parse_scenario", "parse_sweep", "preset", "preset_names",
    "preset_sweep", "propagate_moments", "rhs", "run_ensemble", "run_trajectory",
    "simulate", "solve", "steady_state_estimate", "write_scenario",
]
