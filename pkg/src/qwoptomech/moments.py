"""Exact first- and second-moment propagation for the classical-mirror model.

The model is linear in the operators X = (a, b, a^dag, b^dag), so the means
and the normally ordered second moments S[i, j] = <:X_i X_j:> obey a closed
set of ODEs. Writing M[i, j] = <X_i X_j> in written operator order,

    dM/dt = A M + M A^T + c mu^T + mu c^T + D,

with D the vacuum-input correlation rates. The two orderings differ by the
commutator matrix C (C[a, a^dag] = C[b, b^dag] = 1), M = S + C, hence

    dS/dt = A S + S A^T + c mu^T + mu c^T + (A C + C A^T + D).

For pure decay the constant term vanishes (vacuum inputs are sourceless in
normal order); the two-photon coupling leaves a source 2 chi(t) in the
<a^2> and <a^dag 2> slots, which is what creates pairs from vacuum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError, UnsupportedModelError
from .integrators import solve
from .models import linear_system_model1
from .observables import MOMENT_ESTIMATOR, TimeSeries, energy_balance_residual
from .params import CLASSICAL_MIRROR

# Slot indices into X = (a, b, a^dag, b^dag).
A_, B_, AD, BD = 0, 1, 2, 3

COMMUTATOR = np.zeros((4, 4))
COMMUTATOR[A_, AD] = 1.0
COMMUTATOR[B_, BD] = 1.0

NEGATIVITY_TOL = 1e-8


@dataclass(frozen=True)
class MomentState:
    mu: np.ndarray
    sigma: np.ndarray

    def pack(self):
        return np.concatenate([self.mu, self.sigma.ravel()])

    @classmethod
    def unpack(cls, y):
        y = np.asarray(y, dtype=complex)
        return cls(y[:4].copy(), y[4:].reshape(4, 4).copy())

    @classmethod
    def from_scenario(cls, scenario):
        """Initial moments for ``scenario.initial`` under ``initial_style``.

        ``coherent``: a coherent state with the given amplitudes.
        ``fock``: zero means, with the exciton and photon occupations set to
        |b0|^2 and |a0|^2 (number states, no phase).
        """
        a0, b0 = scenario.initial.a, scenario.initial.b
        if scenario.initial_style == "coherent":
            mu = np.array([a0, b0, np.conj(a0), np.conj(b0)], dtype=complex)
            return cls(mu, np.outer(mu, mu))
        sigma = np.zeros((4, 4), dtype=complex)
        sigma[AD, A_] = sigma[A_, AD] = abs(a0) ** 2
        sigma[BD, B_] = sigma[B_, BD] = abs(b0) ** 2
        return cls(np.zeros(4, dtype=complex), sigma)


def _checked_number(value, label):
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise PhysicalityError(f"{label} has imaginary part {value.imag:.3g}")
    re = value.real
    if re < -NEGATIVITY_TOL:
        raise PhysicalityError(f"{label} = {re:.3g} is negative")
    return max(re, 0.0)


def photon_number(ms):
    """<a^dag a>, clamped to 0 within the roundoff tolerance."""
    return _checked_number(complex(ms.sigma[AD, A_]), "<a^dag a>")


def exciton_number(ms):
    return _checked_number(complex(ms.sigma[BD, B_]), "<b^dag b>")


def moment_rhs(scenario):
    def f(t, y):
        mu = y[:4]
        S = y[4:].reshape(4, 4)
        sys = linear_system_model1(t, scenario)
        A, c = sys.drift, sys.drive
        source = A @ COMMUTATOR + COMMUTATOR @ A.T + sys.diffusion
        dmu = A @ mu + c
        cm = np.outer(c, mu)
        dS = A @ S + S @ A.T + cm + cm.T + source
        return np.concatenate([dmu, dS.ravel()])

    return f


def propagate_moments(scenario):
    """Integrate the moment equations; returns a TimeSeries with A = <a^dag a>.

    Mirror channels q and p stay at their initial values. ``extra`` carries
    ``re_a2`` (Re<a^2>) and the full moment arrays ``mu`` and ``sigma``.
    """
    if scenario.variant != CLASSICAL_MIRROR:
        raise UnsupportedModelError(
            f"moment propagation needs {CLASSICAL_MIRROR}, got {scenario.variant}"
        )
    y0 = MomentState.from_scenario(scenario).pack()
    times, Y, steps = solve(
        moment_rhs(scenario), y0, scenario.t_end, scenario.sample_dt, scenario.integrator
    )
    mu = Y[:, :4]
    sigma = Y[:, 4:].reshape(-1, 4, 4)
    A = np.array([photon_number(MomentState(m, s)) for m, s in zip(mu, sigma)])
    B = np.array([exciton_number(MomentState(m, s)) for m, s in zip(mu, sigma)])
    n = len(times)
    series = TimeSeries(
        t=times,
        re_a=mu[:, A_].real,
        im_a=mu[:, A_].imag,
        re_b=mu[:, B_].real,
        im_b=mu[:, B_].imag,
        q=np.full(n, scenario.initial.q),
        p=np.full(n, scenario.initial.p),
        A=A,
        B=B,
        residual=np.full(n, np.nan),
        backend="Moments",
        estimator=MOMENT_ESTIMATOR,
        steps=steps,
        extra={"re_a2": sigma[:, A_, A_].real, "mu": mu, "sigma": sigma},
    )
    if n >= 3:
        series = series.with_residual(energy_balance_residual(series, scenario))
    return series
