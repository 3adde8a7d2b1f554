"""Right-hand sides of the three coupled-mode systems.

Two forms are provided for each model:

* ``rhs_model1/2/3`` evaluate the Langevin equations term by term with complex
  arithmetic on a :class:`MeanFieldState` (noise means dropped). They are the
  readable reference.
* :func:`make_rhs` returns a kernel over the packed real vector
  ``[Re a, Im a, Re b, Im b, q, p]`` used by the integrators. It only uses
  real ``+ - *`` so batched evaluation (trailing trajectory axis) gives
  bit-identical results to evaluating one trajectory at a time.

All equations are written in the frame rotating at the pump frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedModelError
from .params import (
    CLASSICAL_MIRROR,
    MODULATED_PUMP,
    QUANTIZED_MIRROR,
    MeanFieldState,
    chi,
    coupling_g,
    coupling_gm,
    pump_amplitude,
)

__all__ = [
    "MeanFieldState",
    "Derivative",
    "LinearSystem",
    "rhs_model1",
    "rhs_model2",
    "rhs_model3",
    "rhs",
    "make_rhs",
    "linear_system_model1",
    "CONJ_PERM",
]

# Index permutation swapping (a, b) <-> (a^dag, b^dag).
CONJ_PERM = np.array([2, 3, 0, 1])

HERMITICITY_RTOL = 1e-12


@dataclass(frozen=True)
class Derivative:
    da: complex
    db: complex
    dq: float = 0.0
    dp: float = 0.0

    def to_array(self):
        return np.array(
            [self.da.real, self.da.imag, self.db.real, self.db.imag, self.dq, self.dp]
        )


@dataclass(frozen=True)
class LinearSystem:
    """dX = (drift @ X + drive) dt + noise, with X = (a, b, a^dag, b^dag).

    ``diffusion[i, j]`` is the rate of <dX_i dX_j> from the vacuum inputs
    (operator order as written), so only the (a, a^dag) and (b, b^dag)
    slots are nonzero.
    """

    drift: np.ndarray
    drive: np.ndarray
    diffusion: np.ndarray


def _check_variant(scenario, expected):
    if scenario.variant != expected:
        raise UnsupportedModelError(
            f"expected variant {expected}, got {scenario.variant}"
        )


def rhs_model1(t, state, scenario):
    _check_variant(scenario, CLASSICAL_MIRROR)
    P, M = scenario.params, scenario.modulation
    a, b = state.a, state.b
    x = chi(t, P, M, scenario.chi_form)
    da = (
        -1j * P.delta_c * a
        - 1j * P.omega_c * M.epsilon * math.sin(M.Omega * t) * a
        - 1j * P.g0 * b
        + 2 * x * a.conjugate()
        + P.eps_p
        - P.kappa * a
    )
    db = -1j * P.delta_b * b - 1j * P.g0 * a - P.gamma * b
    return Derivative(complex(da), complex(db), 0.0, 0.0)


def rhs_model2(t, state, scenario):
    """Quantized-mirror equations under mean-field factorization.

    The exciton-photon term in the momentum equation is the force
    ``-g(t) (a^dag b + b^dag a)`` obtained from ``-dH/dq``; it is real.
    """
    _check_variant(scenario, QUANTIZED_MIRROR)
    P, M = scenario.params, scenario.modulation
    a, b, q, p = state.a, state.b, state.q, state.p
    ac = a.conjugate()
    gm = float(coupling_gm(t, P, M))
    g = float(coupling_g(t, P, M))
    x = float(chi(t, P, M, scenario.chi_form))
    db = -1j * P.delta_b * b - 1j * P.g0 * a - 1j * g * a * q - P.gamma * b
    da = (
        -1j * P.delta_c * a
        - 1j * gm * a * q
        - 1j * P.g0 * b
        - 1j * g * b * q
        + 2 * x * ac * q
        + P.eps_p
        - P.kappa * a
    )
    dq = P.omega_m * p
    terms = (
        -P.omega_m * q,
        -gm * (ac * a),
        -g * (ac * b + b.conjugate() * a),
        -1j * x * (ac * ac - a * a),
        -P.gamma_m * p,
    )
    dp = complex(sum(terms))
    scale = sum(abs(term) for term in terms)
    if abs(dp.imag) > HERMITICITY_RTOL * scale:
        raise ArithmeticError(f"momentum derivative not real: {dp!r}")
    return Derivative(complex(da), complex(db), float(dq), dp.real)


def rhs_model3(t, state, scenario):
    _check_variant(scenario, MODULATED_PUMP)
    P, M = scenario.params, scenario.modulation
    a, b, q, p = state.a, state.b, state.q, state.p
    drive = float(pump_amplitude(t, P, M, scenario.variant))
    db = -1j * P.delta_b * b - 1j * P.g0 * a - P.gamma * b
    da = -1j * P.delta_c * a - 1j * P.gm * a * q - 1j * P.g0 * b + drive - P.kappa * a
    dq = P.omega_m * p
    dp = -P.omega_m * q - P.gm * abs(a) ** 2 - P.gamma_m * p
    return Derivative(complex(da), complex(db), float(dq), float(dp))


_REFERENCE_RHS = {
    CLASSICAL_MIRROR: rhs_model1,
    QUANTIZED_MIRROR: rhs_model2,
    MODULATED_PUMP: rhs_model3,
}


def rhs(t, state, scenario):
    return _REFERENCE_RHS[scenario.variant](t, state, scenario)


# --- packed real kernels -----------------------------------------------------


def make_rhs(scenario):
    """Return ``f(t, y)`` over packed real state(s) for the scenario's variant.

    ``y`` has shape ``(6,)`` or ``(6, n)``; the result has the same shape.
    """
    P, M = scenario.params, scenario.modulation
    dc, db_, g0 = P.delta_c, P.delta_b, P.g0
    kappa, gamma, eps_p = P.kappa, P.gamma, P.eps_p
    wm, gamma_m, gm_static = P.omega_m, P.gamma_m, P.gm
    wc_eps = P.omega_c * M.epsilon
    g_amp = P.g0 * M.epsilon / 2
    Om, eta, lam = M.Omega, M.eta, M.lam
    exact = scenario.chi_form == "exact"
    eps = M.epsilon

    def chi_t(t):
        if exact:
            return eps * Om * math.cos(Om * t) / (4 * (1 + eps * math.sin(Om * t)))
        return eps * Om / 4 * math.cos(Om * t)

    if scenario.variant == CLASSICAL_MIRROR:

        def f(t, y):
            ar, ai, br, bi = y[0], y[1], y[2], y[3]
            det = dc + wc_eps * math.sin(Om * t)
            x2 = 2 * chi_t(t)
            out = np.empty_like(y)
            out[0] = det * ai + g0 * bi + x2 * ar + eps_p - kappa * ar
            out[1] = -det * ar - g0 * br - x2 * ai - kappa * ai
            out[2] = db_ * bi + g0 * ai - gamma * br
            out[3] = -db_ * br - g0 * ar - gamma * bi
            out[4] = 0.0
            out[5] = 0.0
            return out

    elif scenario.variant == QUANTIZED_MIRROR:

        def f(t, y):
            ar, ai, br, bi, q, p = y[0], y[1], y[2], y[3], y[4], y[5]
            s = math.sin(Om * t)
            gm = wc_eps * s
            g = g_amp * s
            x = chi_t(t)
            det = dc + gm * q
            gg = g0 + g * q
            xq = 2 * x * q
            out = np.empty_like(y)
            out[0] = det * ai + gg * bi + xq * ar + eps_p - kappa * ar
            out[1] = -det * ar - gg * br - xq * ai - kappa * ai
            out[2] = db_ * bi + gg * ai - gamma * br
            out[3] = -db_ * br - gg * ar - gamma * bi
            out[4] = wm * p
            out[5] = (
                -wm * q
                - gm * (ar * ar + ai * ai)
                - 2 * g * (ar * br + ai * bi)
                - 4 * x * (ar * ai)
                - gamma_m * p
            )
            return out

    elif scenario.variant == MODULATED_PUMP:

        def f(t, y):
            ar, ai, br, bi, q, p = y[0], y[1], y[2], y[3], y[4], y[5]
            drive = eps_p * (1 + eta * math.cos(lam * t))
            det = dc + gm_static * q
            out = np.empty_like(y)
            out[0] = det * ai + g0 * bi + drive - kappa * ar
            out[1] = -det * ar - g0 * br - kappa * ai
            out[2] = db_ * bi + g0 * ai - gamma * br
            out[3] = -db_ * br - g0 * ar - gamma * bi
            out[4] = wm * p
            out[5] = -wm * q - gm_static * (ar * ar + ai * ai) - gamma_m * p
            return out

    else:  # pragma: no cover - guarded by Scenario validation
        raise UnsupportedModelError(scenario.variant)
    return f


# --- linear form of the classical-mirror model --------------------------------


def linear_system_model1(t, scenario):
    _check_variant(scenario, CLASSICAL_MIRROR)
    P, M = scenario.params, scenario.modulation
    det = P.delta_c + P.omega_c * M.epsilon * math.sin(M.Omega * t)
    x2 = 2 * float(chi(t, P, M, scenario.chi_form))
    A = np.zeros((4, 4), dtype=complex)
    A[0, 0] = -(1j * det + P.kappa)
    A[0, 1] = -1j * P.g0
    A[0, 2] = x2
    A[1, 0] = -1j * P.g0
    A[1, 1] = -(1j * P.delta_b + P.gamma)
    A[2, 2] = 1j * det - P.kappa
    A[2, 3] = 1j * P.g0
    A[2, 0] = x2
    A[3, 2] = 1j * P.g0
    A[3, 3] = 1j * P.delta_b - P.gamma
    c = np.array([P.eps_p, 0, P.eps_p, 0], dtype=complex)
    D = np.zeros((4, 4))
    D[0, 2] = 2 * P.kappa
    D[1, 3] = 2 * P.gamma
    return LinearSystem(A, c, D)
