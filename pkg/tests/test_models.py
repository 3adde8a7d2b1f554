import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwoptomech.errors import UnsupportedModelError
from qwoptomech.models import (
    CONJ_PERM,
    linear_system_model1,
    make_rhs,
    rhs,
    rhs_model1,
    rhs_model2,
    rhs_model3,
)
from qwoptomech.params import (
    CLASSICAL_MIRROR,
    MODULATED_PUMP,
    QUANTIZED_MIRROR,
    MeanFieldState,
    ModelParams,
    Modulation,
    Scenario,
)
from qwoptomech.presets import preset

finite = st.floats(-3.0, 3.0, allow_nan=False)
states = st.builds(
    MeanFieldState,
    a=st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
    b=st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
    q=finite,
    p=finite,
)
times = st.floats(0.0, 50.0)


def scenario(variant, **kw):
    mod = kw.pop("modulation", None)
    params = ModelParams(**{"omega_m": 4.712, "omega_c": 1.36, **kw})
    if mod is None:
        mod = Modulation(eta=0.3, lam=1.0) if variant == MODULATED_PUMP else Modulation(0.15, 1.36)
    return Scenario(variant=variant, params=params, modulation=mod)


FULL = dict(delta_b=0.7, delta_c=1.3, g0=0.4, kappa=0.2, gamma=1.0, eps_p=0.9,
            gm=0.3, gamma_m=0.05, n_th=2.0)


def test_free_cavity_decay():
    s = scenario(CLASSICAL_MIRROR, delta_c=4.712, kappa=1.5, modulation=Modulation())
    d = rhs_model1(0.3, MeanFieldState(a=1 + 0j, b=0j), s)
    assert d.da == pytest.approx(-(4.712j + 1.5))


def test_pump_injection_only():
    s = scenario(CLASSICAL_MIRROR, eps_p=5.0, modulation=Modulation())
    assert rhs_model1(0.0, MeanFieldState(a=0j, b=0j), s).da == 5.0


def test_fig2a_initial_derivative():
    d = rhs_model1(0.0, preset("fig2a").initial, preset("fig2a"))
    assert d.da == pytest.approx(5 - 0.005j, abs=1e-15)
    assert d.dq == 0 and d.dp == 0


def test_model2_equilibrium_apart_from_pump():
    s = scenario(QUANTIZED_MIRROR, **FULL)
    d = rhs_model2(0.4, MeanFieldState(a=0j, b=0j), s)
    assert d.da == FULL["eps_p"]
    assert (d.db, d.dq, d.dp) == (0, 0, 0)


def test_model2_optomechanical_force():
    s = scenario(QUANTIZED_MIRROR, omega_m=0.0 + 1.0, modulation=Modulation(0.1, 1.36))
    t = math.pi / 2 / 1.36
    base = rhs_model2(t, MeanFieldState(a=0j, b=0j, q=1.0), s).dp
    with_light = rhs_model2(t, MeanFieldState(a=1 + 0j, b=0j, q=1.0), s).dp
    # chi vanishes at this phase; the only light-dependent term is -g_m |a|^2
    assert with_light - base == pytest.approx(-0.136, abs=1e-12)


def test_model3_examples():
    s = scenario(MODULATED_PUMP, eps_p=1.5, modulation=Modulation(eta=0.4, lam=1.0))
    assert rhs_model3(0.0, MeanFieldState(a=0j, b=0j), s).da == pytest.approx(2.1)
    fig6a = preset("fig6a")
    d = rhs_model3(0.0, MeanFieldState(a=1 + 0j, b=0j), fig6a)
    assert d.dp == pytest.approx(-0.1, abs=1e-15)


def test_wrong_variant_rejected():
    with pytest.raises(UnsupportedModelError):
        rhs_model1(0.0, MeanFieldState(), preset("fig6a"))


@pytest.mark.parametrize("variant", [CLASSICAL_MIRROR, QUANTIZED_MIRROR, MODULATED_PUMP])
@pytest.mark.parametrize("chi_form", ["approx", "exact"])
@settings(max_examples=30, deadline=None)
@given(t=times, state=states)
def test_real_kernel_matches_complex_reference(variant, chi_form, t, state):
    s = scenario(variant, **FULL).replace(chi_form=chi_form)
    expected = rhs(t, state, s).to_array()
    got = make_rhs(s)(t, state.to_array())
    assert np.allclose(got, expected, rtol=1e-12, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(t=times, states_=st.lists(states, min_size=1, max_size=5))
def test_batched_kernel_is_columnwise(t, states_):
    s = scenario(QUANTIZED_MIRROR, **FULL)
    f = make_rhs(s)
    Y = np.stack([x.to_array() for x in states_], axis=1)
    out = f(t, Y)
    for j, x in enumerate(states_):
        assert np.array_equal(out[:, j], f(t, x.to_array()))


@settings(max_examples=50, deadline=None)
@given(t=times, state=states)
def test_exchange_terms_conserve_excitations(t, state):
    only_g0 = scenario(CLASSICAL_MIRROR, g0=0.8, kappa=0.0, gamma=0.0, eps_p=0.0,
                       delta_b=0.3, delta_c=1.1, modulation=Modulation())
    d = rhs_model1(t, state, only_g0)
    dA = 2 * (state.a.conjugate() * d.da).real
    dB = 2 * (state.b.conjugate() * d.db).real
    assert abs(dA + dB) <= 1e-12 * (1 + abs(state.a) ** 2 + abs(state.b) ** 2)


@settings(max_examples=50, deadline=None)
@given(t=times, state=states)
def test_model2_without_modulation_is_model1_plus_oscillator(t, state):
    m1 = scenario(CLASSICAL_MIRROR, **FULL, modulation=Modulation(0.0, 1.36))
    m2 = scenario(QUANTIZED_MIRROR, **FULL, modulation=Modulation(0.0, 1.36))
    d1, d2 = rhs_model1(t, state, m1), rhs_model2(t, state, m2)
    assert d2.da == pytest.approx(d1.da, rel=1e-14, abs=1e-14)
    assert d2.db == pytest.approx(d1.db, rel=1e-14, abs=1e-14)
    P = m2.params
    assert d2.dq == pytest.approx(P.omega_m * state.p)
    assert d2.dp == pytest.approx(-P.omega_m * state.q - P.gamma_m * state.p)


@settings(max_examples=50, deadline=None)
@given(t=times, state=states)
def test_model3_reduces_to_unmodulated_model1(t, state):
    params = {**FULL, "gm": 0.0}
    m1 = scenario(CLASSICAL_MIRROR, **params, modulation=Modulation())
    m3 = scenario(MODULATED_PUMP, **params, modulation=Modulation(eta=0.0, lam=1.0))
    d1, d3 = rhs_model1(t, state, m1), rhs_model3(t, state, m3)
    assert d3.da == pytest.approx(d1.da, rel=1e-14, abs=1e-14)
    assert d3.db == pytest.approx(d1.db, rel=1e-14, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(
    t=times,
    kappa=st.floats(0.01, 3), g0=st.floats(0, 5), eps=st.floats(-0.5, 0.5),
    Omega=st.floats(0.1, 10), eps_p=st.floats(0, 5),
)
def test_linear_system_conjugation_symmetry(t, kappa, g0, eps, Omega, eps_p):
    s = scenario(CLASSICAL_MIRROR, kappa=kappa, g0=g0, eps_p=eps_p,
                 modulation=Modulation(eps, Omega))
    sys = linear_system_model1(t, s)
    A, c = sys.drift, sys.drive
    assert np.allclose(A[np.ix_(CONJ_PERM, CONJ_PERM)], A.conj(), atol=0)
    assert np.allclose(c[CONJ_PERM], c.conj(), atol=0)
    D = sys.diffusion
    assert np.count_nonzero(D) == 2
    assert D[0, 2] == 2 * kappa
    assert D[1, 3] == 2 * s.params.gamma


def test_linear_system_entries():
    s = preset("fig2a")
    t = 0.37
    P, M = s.params, s.modulation
    A = linear_system_model1(t, s).drift
    det = P.delta_c + P.omega_c * M.epsilon * math.sin(M.Omega * t)
    assert A[0, 0] == pytest.approx(-(1j * det + P.kappa))
    unmod = linear_system_model1(t, s.replace(modulation=Modulation(0.0, 1.36))).drift
    assert np.all(unmod[:2, 2:] == 0) and np.all(unmod[2:, :2] == 0)


@settings(max_examples=20, deadline=None)
@given(t=times, state=states)
def test_linear_system_reproduces_mean_field_rhs(t, state):
    s = scenario(CLASSICAL_MIRROR, **FULL)
    sys = linear_system_model1(t, s)
    x = np.array([state.a, state.b, state.a.conjugate(), state.b.conjugate()])
    dx = sys.drift @ x + sys.drive
    d = rhs_model1(t, state, s)
    assert dx[0] == pytest.approx(d.da, abs=1e-12)
    assert dx[1] == pytest.approx(d.db, abs=1e-12)
