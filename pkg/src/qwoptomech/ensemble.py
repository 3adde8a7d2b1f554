"""Stochastic trajectory ensembles with Brownian mirror noise.

Each trajectory ``i`` draws from its own counter-based stream
(Philox keyed by ``SeedSequence(root_seed, spawn_key=(i,))``), so trajectory
``i`` is reproducible in isolation. Trajectories are simulated in fixed-size
blocks of consecutive indices and reduced with a pairwise merge tree whose
shape depends only on the indices, never on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import IntegrationDivergedError, TrajectoryError
from .integrators import em_step, sample_times, substeps
from .models import make_rhs
from .observables import TimeSeries

BLOCK_SIZE = 128
NOISE_CHUNK = 512

ENSEMBLE_ESTIMATOR = "E[|a|^2]"

# Packed channels [Re a, Im a, Re b, Im b, q, p] followed by A and B.
_N_STATE = 6
_N_STATS = 8


@dataclass(frozen=True)
class EnsembleResult:
    mean_series: TimeSeries
    stderr_series: TimeSeries
    n_traj: int
    root_seed: int


def trajectory_rng(root_seed, index):
    seq = np.random.SeedSequence(int(root_seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(seq))


def noise_amplitudes(scenario, noise_scale=1.0):
    """Per-component diffusion amplitudes for the packed state.

    The thermal force on p has intensity gamma_m (2 n_th + 1). With
    ``noise_ordering == "symmetric"`` the optical and excitonic quadratures
    also receive vacuum noise of total variance kappa/2 (resp. gamma/2) per
    unit time.
    """
    P = scenario.params
    amps = np.zeros(_N_STATE)
    amps[5] = math.sqrt(P.gamma_m * (2 * P.n_th + 1))
    if scenario.noise_ordering == "symmetric":
        amps[0] = amps[1] = math.sqrt(P.kappa) / 2
        amps[2] = amps[3] = math.sqrt(P.gamma) / 2
    return amps * noise_scale


def _simulate(scenario, indices, noise_scale=1.0):
    """Run trajectories ``indices`` side by side; returns (times, Y[n_t, 6, n])."""
    f = make_rhs(scenario)
    times = sample_times(scenario.t_end, scenario.sample_dt)
    n = len(indices)
    amps = noise_amplitudes(scenario, noise_scale)
    noisy = np.flatnonzero(amps)
    n_sub = substeps(scenario.sample_dt, scenario.integrator.h)
    hs = scenario.sample_dt / n_sub
    scale = (amps[noisy] * math.sqrt(hs))[:, None]
    rngs = [trajectory_rng(scenario.seed, i) for i in indices]

    y = np.repeat(scenario.initial.to_array()[:, None], n, axis=1)
    out = np.empty((len(times), _N_STATE, n))
    out[0] = y
    buf = None
    pos = NOISE_CHUNK
    inc = np.zeros_like(y)
    for k in range(1, len(times)):
        t0 = times[k - 1]
        for j in range(n_sub):
            if noisy.size:
                if pos == NOISE_CHUNK:
                    buf = np.stack(
                        [r.standard_normal((NOISE_CHUNK, noisy.size)) for r in rngs],
                        axis=-1,
                    )
                    pos = 0
                inc[noisy] = scale * buf[pos]
                pos += 1
            t = t0 + j * hs
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    y = em_step(f, t, y, hs, inc)
            except IntegrationDivergedError as exc:
                with np.errstate(over="ignore", invalid="ignore"):
                    trial = y + hs * f(t, y) + inc
                bad = int(np.flatnonzero(~np.all(np.isfinite(trial), axis=0))[0])
                raise TrajectoryError(indices[bad], exc) from exc
        out[k] = y
    return times, out


def _as_series(times, Y, backend="Ensemble", estimator=ENSEMBLE_ESTIMATOR, steps=0):
    """Series from a (n_t, 8) array of [packed state, A, B] channels."""
    return TimeSeries(
        t=times,
        re_a=Y[:, 0],
        im_a=Y[:, 1],
        re_b=Y[:, 2],
        im_b=Y[:, 3],
        q=Y[:, 4],
        p=Y[:, 5],
        A=Y[:, 6],
        B=Y[:, 7],
        residual=np.full(len(times), np.nan),
        backend=backend,
        estimator=estimator,
        steps=steps,
    )


def run_trajectory(scenario, traj_index, noise_scale=1.0):
    times, Y = _simulate(scenario, [traj_index], noise_scale)
    series = TimeSeries.from_packed(times, Y[:, :, 0], backend="Ensemble")
    series.steps = (len(times) - 1) * substeps(scenario.sample_dt, scenario.integrator.h)
    return series


# --- pairwise reduction --------------------------------------------------------


def _leaf_stats(Y):
    """Per-trajectory (count, mean, M2) with channels [packed state, A, B]."""
    A = Y[:, 0] * Y[:, 0] + Y[:, 1] * Y[:, 1]
    B = Y[:, 2] * Y[:, 2] + Y[:, 3] * Y[:, 3]
    full = np.concatenate([Y, A[:, None], B[:, None]], axis=1)
    return [(1, full[..., i], np.zeros(full.shape[:2])) for i in range(full.shape[-1])]


def _combine(left, right):
    na, ma, m2a = left
    nb, mb, m2b = right
    n = na + nb
    delta = mb - ma
    mean = ma + delta * (nb / n)
    m2 = m2a + m2b + delta * delta * (na * nb / n)
    return n, mean, m2


def _pairwise(items):
    if len(items) == 1:
        return items[0]
    mid = len(items) // 2
    return _combine(_pairwise(items[:mid]), _pairwise(items[mid:]))


def _block_stats(args):
    scenario, start, stop = args
    _, Y = _simulate(scenario, list(range(start, stop)))
    return _pairwise(_leaf_stats(Y))


def run_ensemble(scenario, workers=1):
    """Mean and standard error over ``scenario.n_traj`` trajectories."""
    n_traj = scenario.n_traj
    blocks = [
        (scenario, lo, min(lo + BLOCK_SIZE, n_traj)) for lo in range(0, n_traj, BLOCK_SIZE)
    ]
    if workers <= 1 or len(blocks) == 1:
        stats = [_block_stats(b) for b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(_block_stats, blocks))
    n, mean, m2 = _pairwise(stats)
    if n > 1:
        stderr = np.sqrt(m2 / (n - 1)) / math.sqrt(n)
    else:
        stderr = np.zeros_like(mean)
    times = sample_times(scenario.t_end, scenario.sample_dt)
    steps = (len(times) - 1) * substeps(scenario.sample_dt, scenario.integrator.h)
    return EnsembleResult(
        mean_series=_as_series(times, mean, steps=steps),
        stderr_series=_as_series(times, stderr, estimator="stderr", steps=steps),
        n_traj=n,
        root_seed=scenario.seed,
    )
