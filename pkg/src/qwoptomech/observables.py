"""Plotted observables and the diagnostics used to judge a run."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks

from .errors import InsufficientDataError, InsufficientOscillationError
from .params import CLASSICAL_MIRROR, chi

MEAN_FIELD_ESTIMATOR = "|<a>|^2"
MOMENT_ESTIMATOR = "<a^dag a>"

CSV_CHANNELS = ("re_a", "im_a", "re_b", "im_b", "q", "p", "A", "B", "residual")

AMPLIFIED = "Amplified"
DAMPED = "Damped"
SUSTAINED = "Sustained"


@dataclass
class TimeSeries:
    """Sampled trajectory. ``A``/``B`` are photon and exciton numbers.

    ``estimator`` says whether ``A`` is the mean-field ``|<a>|^2`` or a true
    second moment. ``extra`` holds backend-specific channels (the moments
    backend stores ``re_a2``, the real part of ``<a^2>``).
    """

    t: np.ndarray
    re_a: np.ndarray
    im_a: np.ndarray
    re_b: np.ndarray
    im_b: np.ndarray
    q: np.ndarray
    p: np.ndarray
    A: np.ndarray
    B: np.ndarray
    residual: np.ndarray
    backend: str = "MeanField"
    estimator: str = MEAN_FIELD_ESTIMATOR
    steps: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.t)
        for name in CSV_CHANNELS:
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise ValueError(f"channel {name} has shape {arr.shape}, expected ({n},)")
            setattr(self, name, arr)
        self.t = np.asarray(self.t, dtype=float)
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("sample times must be strictly increasing")

    def __len__(self):
        return len(self.t)

    def channel(self, name):
        if name == "t" or name in CSV_CHANNELS:
            return getattr(self, name)
        return self.extra[name]

    @property
    def a(self):
        return self.re_a + 1j * self.im_a

    @property
    def b(self):
        return self.re_b + 1j * self.im_b

    def with_residual(self, residual):
        return dataclasses.replace(self, residual=np.asarray(residual, dtype=float))

    @classmethod
    def from_packed(cls, t, Y, backend="MeanField", steps=0):
        """Build from packed rows ``[Re a, Im a, Re b, Im b, q, p]``."""
        Y = np.asarray(Y, dtype=float)
        return cls(
            t=t,
            re_a=Y[:, 0],
            im_a=Y[:, 1],
            re_b=Y[:, 2],
            im_b=Y[:, 3],
            q=Y[:, 4],
            p=Y[:, 5],
            A=Y[:, 0] ** 2 + Y[:, 1] ** 2,
            B=Y[:, 2] ** 2 + Y[:, 3] ** 2,
            residual=np.full(len(t), np.nan),
            backend=backend,
            estimator=MEAN_FIELD_ESTIMATOR,
            steps=steps,
        )


def intensity(z):
    z = np.asarray(z)
    return z.real * z.real + z.imag * z.imag


def _derivative(y, dt):
    """Fourth-order finite-difference derivative on a uniform grid."""
    n = len(y)
    if n < 5:
        return np.gradient(y, dt, edge_order=2)
    d = np.empty(n)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * dt)
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * dt)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * dt)
    d[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12 * dt)
    d[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / (12 * dt)
    return d


def energy_balance_residual(series, scenario):
    """Normalized residual of the photon+exciton number balance.

    r = d(A+B)/dt + 2 kappa A + 2 gamma B - 2 eps_p Re<a> - 4 chi(t) Re<a^2>,
    divided by (A + B + 1). Under the mean-field estimator <a^2> is <a>^2.
    The time derivative uses centered differences (fourth order).
    """
    if scenario.variant != CLASSICAL_MIRROR:
        raise ValueError("energy balance is defined for the classical-mirror model")
    t = series.t
    if len(t) < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {len(t)}")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
        raise ValueError("energy balance needs uniformly spaced samples")
    P = scenario.params
    A, B = series.A, series.B
    if series.estimator == MOMENT_ESTIMATOR:
        re_a2 = series.extra["re_a2"]
    else:
        re_a2 = series.re_a ** 2 - series.im_a ** 2
    x = chi(t, P, scenario.modulation, scenario.chi_form)
    r = (
        _derivative(A + B, dt[0])
        + 2 * P.kappa * A
        + 2 * P.gamma * B
        - 2 * P.eps_p * series.re_a
        - 4 * x * re_a2
    )
    return r / (A + B + 1)


@dataclass(frozen=True)
class EnvelopeSummary:
    windows: tuple
    amplitudes: tuple
    trend: str
    growth_ratio: float
    thresholds: dict


def envelope_summary(
    series,
    channel,
    window_count=2,
    amplified_above=1.25,
    damped_below=0.8,
    min_prominence=1e-6,
):
    """Classify the oscillation envelope of ``channel`` as Damped/Sustained/Amplified.

    [t0, t_end] is cut into ``window_count`` equal windows. Within each, the
    peak-to-peak amplitude is the spread between the highest local maximum
    and lowest local minimum. The growth ratio compares the last window to
    the first.
    """
    if window_count < 2:
        raise ValueError("window_count must be >= 2")
    t = series.t
    y = np.asarray(series.channel(channel), dtype=float)
    span = float(np.ptp(y)) if len(y) else 0.0
    prom = min_prominence * span if span > 0 else None
    maxima, _ = find_peaks(y, prominence=prom)
    minima, _ = find_peaks(-y, prominence=prom)
    edges = np.linspace(t[0], t[-1], window_count + 1)
    windows, amps = [], []
    for i in range(window_count):
        lo, hi = edges[i], edges[i + 1]
        last = i == window_count - 1

        def inside(idx):
            tt = t[idx]
            return idx[(tt >= lo) & ((tt <= hi) if last else (tt < hi))]

        mx, mn = inside(maxima), inside(minima)
        if len(mx) + len(mn) < 3 or not len(mx) or not len(mn):
            raise InsufficientOscillationError(
                f"window [{lo:.4g}, {hi:.4g}] of {channel!r} has "
                f"{len(mx)} maxima and {len(mn)} minima; need >= 3 extrema"
            )
        windows.append((float(lo), float(hi)))
        amps.append(float(y[mx].max() - y[mn].min()))
    first, last_amp = amps[0], amps[-1]
    if first == 0:
        ratio = 1.0 if last_amp == 0 else np.inf
    else:
        ratio = last_amp / first
    if ratio > amplified_above:
        trend = AMPLIFIED
    elif ratio < damped_below:
        trend = DAMPED
    else:
        trend = SUSTAINED
    return EnvelopeSummary(
        windows=tuple(windows),
        amplitudes=tuple(amps),
        trend=trend,
        growth_ratio=float(ratio),
        thresholds={"amplified_above": amplified_above, "damped_below": damped_below},
    )


class SteadyState(NamedTuple):
    value: float
    deviation: float
    converged: bool


def steady_state_estimate(series, channel, fraction=0.2, rtol=1e-2):
    """Mean of ``channel`` over the final ``fraction`` of samples.

    ``converged`` is set when the window's standard deviation is within
    ``rtol`` of the mean's magnitude (or of 1 for a mean near zero).
    """
    y = np.asarray(series.channel(channel), dtype=float)
    n = max(1, int(round(fraction * len(y))))
    tail = y[-n:]
    value = float(np.mean(tail))
    dev = float(np.std(tail))
    return SteadyState(value, dev, dev <= rtol * max(abs(value), 1.0))
