"""Time stepping: classical RK4, Dormand-Prince 5(4) and Euler-Maruyama.

The steppers work on any numpy array (real or complex). Samples are emitted
at integer multiples of ``sample_dt``. Fixed-step methods never step across a
sample time: each sample interval is split into ``ceil(sample_dt / h)`` equal
substeps. The adaptive method chooses its own steps but shortens the one that
would cross a sample time so that it lands there exactly; samples are
therefore full-order solutions, never interpolants.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import IntegrationDivergedError, StiffnessError
from .params import (
    CLASSICAL_MIRROR,
    EULER_MARUYAMA,
    RK4_FIXED,
    RK45_ADAPTIVE,
    IntegratorSettings,
)

__all__ = [
    "IntegratorSettings",
    "rk4_step",
    "euler_maruyama_step",
    "em_step",
    "sample_times",
    "substeps",
    "solve",
    "integrate",
]


def _check_finite(y, t):
    if not np.all(np.isfinite(y)):
        raise IntegrationDivergedError(t)


def rk4_step(rhs, t, y, h):
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    k1 = rhs(t, y)
    k2 = rhs(t + h / 2, y + (h / 2) * k1)
    k3 = rhs(t + h / 2, y + (h / 2) * k2)
    k4 = rhs(t + h, y + h * k3)
    y_new = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    _check_finite(y_new, t + h)
    return y_new


def em_step(rhs, t, y, h, increment):
    """One Euler-Maruyama step with a precomputed stochastic increment."""
    y_new = y + h * rhs(t, y) + increment
    _check_finite(y_new, t + h)
    return y_new


def euler_maruyama_step(rhs, noise_amplitudes, rng_stream, t, y, h):
    """Euler-Maruyama step for additive noise.

    ``noise_amplitudes`` has the shape of ``y``; component ``i`` receives
    ``noise_amplitudes[i] * sqrt(h) * N(0, 1)``. Only components with nonzero
    amplitude consume normals from ``rng_stream``, in index order.
    """
    amps = np.asarray(noise_amplitudes, dtype=float)
    increment = np.zeros_like(y, dtype=float)
    idx = np.flatnonzero(amps)
    if idx.size:
        increment[idx] = amps[idx] * math.sqrt(h) * rng_stream.standard_normal(idx.size)
    return em_step(rhs, t, y, h, increment)


def sample_times(t_end, sample_dt):
    n = int(math.floor(t_end / sample_dt + 1e-9))
    return np.arange(n + 1) * sample_dt


def substeps(sample_dt, h):
    """Number of equal substeps per sample interval for nominal step ``h``."""
    return max(1, int(math.ceil(sample_dt / h - 1e-9)))


# --- Dormand-Prince 5(4) tableau ---------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def _dopri_step(rhs, t, y, h, f0):
    ks = [f0]
    for i in range(1, 7):
        acc = y
        for aij, kj in zip(_A[i], ks):
            if aij:
                acc = acc + (h * aij) * kj
        if i == 6:
            y_new = acc
        ks.append(rhs(t + _C[i] * h, acc))
    err = sum((h * e) * k for e, k in zip(_E, ks) if e)
    return y_new, ks[6], err


def _initial_step(rhs, t0, y0, f0, rtol, atol, h_max):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((np.abs(y0) / scale) ** 2))
    d1 = np.sqrt(np.mean((np.abs(f0) / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = rhs(t0 + h0, y0 + h0 * f0)
    d2 = np.sqrt(np.mean((np.abs(f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, h_max)


def _solve_adaptive(rhs, y0, times, settings):
    rtol, atol = settings.rel_tol, settings.abs_tol
    h_min, h_max = settings.h_min, settings.h_max
    out = np.empty((len(times),) + np.shape(y0), dtype=np.result_type(y0, float))
    out[0] = y0
    if len(times) == 1:
        return out, 0
    t, y = 0.0, np.array(y0)
    f = rhs(t, y)
    h = _initial_step(rhs, t, y, f, rtol, atol, h_max)
    k = 1
    steps = 0
    while k < len(times):
        h = min(h, h_max)
        if h < h_min:
            raise StiffnessError(t, h, float(np.linalg.norm(y)))
        # Never step past the next sample time; the controller keeps ``h``.
        gap = times[k] - t
        landing = h >= gap
        step = gap if landing else h
        y_new, f_new, err_vec = _dopri_step(rhs, t, y, step, f)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((np.abs(err_vec) / scale) ** 2)))
        if not np.isfinite(err):
            if step <= h_min:
                raise IntegrationDivergedError(t + step)
            h = step * 0.25
            continue
        if err <= 1.0:
            if landing:
                t = times[k]
                out[k] = y_new
                k += 1
            else:
                t = t + step
            y, f = y_new, f_new
            _check_finite(y, t)
            steps += 1
            factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            # A short landing step says little about the step the solution allows.
            h = max(h, step * factor) if landing else step * factor
        else:
            h = step * max(0.2, 0.9 * err ** -0.2)
    return out, steps


def _solve_fixed(rhs, y0, times, h):
    out = np.empty((len(times),) + np.shape(y0), dtype=np.result_type(y0, float))
    out[0] = y0
    if len(times) == 1:
        return out, 0
    dt = times[1] - times[0]
    n_sub = substeps(dt, h)
    hs = dt / n_sub
    y = np.array(y0)
    steps = 0
    for k in range(1, len(times)):
        t0 = times[k - 1]
        for j in range(n_sub):
            y = rk4_step(rhs, t0 + j * hs, y, hs)
        steps += n_sub
        out[k] = y
    return out, steps


def solve(rhs, y0, t_end, sample_dt, settings=None):
    """Integrate ``dy/dt = rhs(t, y)`` from 0 and return ``(times, samples, steps)``.

    ``samples[k]`` is the state at ``times[k] = k * sample_dt``. ``t_end`` may be
    0, which yields the single initial sample.
    """
    settings = settings or IntegratorSettings()
    times = sample_times(t_end, sample_dt)
    y0 = np.asarray(y0)
    if settings.method == RK45_ADAPTIVE:
        samples, steps = _solve_adaptive(rhs, y0, times, settings)
    elif settings.method == RK4_FIXED:
        samples, steps = _solve_fixed(rhs, y0, times, settings.h)
    else:
        raise ValueError(f"{EULER_MARUYAMA} needs the ensemble driver, not solve()")
    return times, samples, steps


def integrate(rhs, scenario):
    """Deterministic mean-field run of ``scenario`` as a TimeSeries.

    ``rhs`` is a packed-state kernel as produced by ``models.make_rhs``. For
    the classical-mirror model the energy-balance residual is filled in.
    """
    from .observables import TimeSeries, energy_balance_residual

    y0 = scenario.initial.to_array()
    times, Y, steps = solve(
        rhs, y0, scenario.t_end, scenario.sample_dt, scenario.integrator
    )
    series = TimeSeries.from_packed(times, Y, backend="MeanField", steps=steps)
    if scenario.variant == CLASSICAL_MIRROR and len(times) >= 3:
        series = series.with_residual(energy_balance_residual(series, scenario))
    return series
