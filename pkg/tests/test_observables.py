import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwoptomech.errors import InsufficientDataError, InsufficientOscillationError
from qwoptomech.integrators import integrate
from qwoptomech.models import make_rhs
from qwoptomech.observables import (
    AMPLIFIED,
    DAMPED,
    SUSTAINED,
    TimeSeries,
    energy_balance_residual,
    envelope_summary,
    intensity,
    steady_state_estimate,
)
from qwoptomech.params import MeanFieldState, Modulation
from qwoptomech.presets import preset

from conftest import classical


def series_of(t, y=None, **channels):
    n = len(t)
    base = {k: np.zeros(n) for k in ("re_a", "im_a", "re_b", "im_b", "q", "p", "A", "B")}
    base["residual"] = np.full(n, np.nan)
    if y is not None:
        base["q"] = y
    base.update(channels)
    return TimeSeries(t=t, **base)


@pytest.mark.parametrize("z, expected", [(0, 0), (1 + 1j, 2), (3 - 4j, 25)])
def test_intensity(z, expected):
    assert intensity(z) == expected


@settings(max_examples=50)
@given(
    z=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    theta=st.floats(0, 2 * math.pi),
)
def test_intensity_phase_invariant(z, theta):
    assert intensity(np.exp(1j * theta) * z) == pytest.approx(intensity(z), rel=1e-12, abs=1e-300)


T = np.linspace(0, 10, 2001)


@pytest.mark.parametrize(
    "y, trend",
    [
        (np.exp(-T) * np.sin(10 * T), DAMPED),
        (np.sin(10 * T), SUSTAINED),
        (np.exp(0.2 * T) * np.sin(10 * T), AMPLIFIED),
    ],
)
def test_envelope_classification(y, trend):
    assert envelope_summary(series_of(T, y), "q", 2).trend == trend


@settings(max_examples=25, deadline=None)
@given(scale=st.floats(1e-6, 1e6), rate=st.sampled_from([-1.0, 0.0, 0.2]))
def test_envelope_scale_invariant(scale, rate):
    y = np.exp(rate * T) * np.sin(10 * T)
    a = envelope_summary(series_of(T, y), "q")
    b = envelope_summary(series_of(T, scale * y), "q")
    assert a.trend == b.trend
    assert b.growth_ratio == pytest.approx(a.growth_ratio, rel=1e-9)


def test_envelope_reports_windows():
    summary = envelope_summary(series_of(T, np.sin(10 * T)), "q", 4)
    assert len(summary.windows) == 4 and len(summary.amplitudes) == 4
    assert summary.windows[0][0] == 0 and summary.windows[-1][1] == 10
    assert summary.amplitudes[0] == pytest.approx(2, rel=1e-3)


def test_envelope_needs_oscillation():
    with pytest.raises(InsufficientOscillationError):
        envelope_summary(series_of(T, T ** 2), "q")


def test_steady_state_of_constant():
    ss = steady_state_estimate(series_of(T, np.full_like(T, 3.5)), "q")
    assert ss.value == 3.5 and ss.deviation == 0 and ss.converged


def test_steady_state_of_sinusoid_flags_deviation():
    ss = steady_state_estimate(series_of(T, 2 + np.sin(3 * T)), "q")
    assert ss.value == pytest.approx(2, abs=0.2)
    assert not ss.converged


def test_pure_cavity_steady_state():
    base = preset("fig2a")
    params = base.params.__class__(**{**base.params.__dict__, "g0": 0.0})
    s = base.replace(params=params, modulation=Modulation(0.0, 1.36), t_end=20.0)
    ss = steady_state_estimate(integrate(make_rhs(s), s), "A")
    assert ss.value == pytest.approx(25 / (1.5 ** 2 + 4.712 ** 2), abs=1e-3)
    assert ss.value == pytest.approx(1.0224, abs=1e-3)


def test_residual_of_analytic_decay():
    s = classical(kappa=1.5, g0=0.0, eps_p=0.0).replace(modulation=Modulation())
    t = np.arange(0, 2.0001, 0.01)
    a = np.exp(-(1.5 + 4.712j) * t)
    b = np.exp(-(1.0 + 2.0j) * t)
    series = series_of(t, re_a=a.real, im_a=a.imag, re_b=b.real, im_b=b.imag,
                       A=intensity(a), B=intensity(b))
    assert np.max(np.abs(energy_balance_residual(series, s))) <= 1e-6


def test_residual_flags_broken_trajectory():
    s = classical(kappa=1.5, g0=0.0, eps_p=0.0).replace(modulation=Modulation())
    t = np.arange(0, 1.0001, 0.01)
    series = series_of(t, A=np.full_like(t, 2.0), re_a=np.full_like(t, np.sqrt(2)))
    r = energy_balance_residual(series, s)
    assert np.allclose(r, 2 * 1.5 * 2.0 / 3.0)


@pytest.mark.parametrize("name", ["fig2a", "fig2c"])
def test_preset_residual(name):
    s = preset(name)
    assert np.nanmax(np.abs(integrate(make_rhs(s), s).residual)) <= 1e-5


def test_residual_needs_samples():
    s = classical()
    with pytest.raises(InsufficientDataError):
        energy_balance_residual(series_of(np.array([0.0, 0.01])), s)


def test_series_validates_shape_and_order():
    with pytest.raises(ValueError):
        series_of(np.array([0.0, 1.0]), q=np.zeros(3))
    with pytest.raises(ValueError):
        series_of(np.array([0.0, 0.0]))


def test_mean_field_state_roundtrip():
    st_ = MeanFieldState(a=1 - 2j, b=0.5j, q=0.3, p=-0.1)
    assert MeanFieldState.from_array(st_.to_array()) == st_
