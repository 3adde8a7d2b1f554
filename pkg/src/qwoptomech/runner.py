"""Backend dispatch: one call from a Scenario to sampled output."""

from __future__ import annotations

from .ensemble import EnsembleResult, run_ensemble
from .integrators import integrate
from .models import make_rhs
from .moments import propagate_moments
from .params import ENSEMBLE, MOMENTS


def simulate(scenario, workers=1):
    """Run ``scenario`` on its backend.

    Returns a TimeSeries for the MeanField and Moments backends and an
    EnsembleResult for Ensemble.
    """
    if scenario.backend == MOMENTS:
        return propagate_moments(scenario)
    if scenario.backend == ENSEMBLE:
        return run_ensemble(scenario, workers=workers)
    return integrate(make_rhs(scenario), scenario)


def primary_series(result):
    """The series whose channels are written to the main CSV."""
    if isinstance(result, EnsembleResult):
        return result.mean_series
    return result
