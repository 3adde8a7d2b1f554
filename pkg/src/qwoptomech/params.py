"""Scenario data types and the time-dependent coefficients of the three models.

All rates are dimensionless multiples of a reference rate: the exciton decay
rate for the classical- and quantized-mirror models, the mechanical frequency
for the modulated-pump model. The reference rate itself is 1.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import ScenarioError

CLASSICAL_MIRROR = "ClassicalMirror"
QUANTIZED_MIRROR = "QuantizedMirror"
MODULATED_PUMP = "ModulatedPump"
VARIANTS = (CLASSICAL_MIRROR, QUANTIZED_MIRROR, MODULATED_PUMP)

MEAN_FIELD = "MeanField"
MOMENTS = "Moments"
ENSEMBLE = "Ensemble"
BACKENDS = (MEAN_FIELD, MOMENTS, ENSEMBLE)

RK4_FIXED = "RK4Fixed"
RK45_ADAPTIVE = "RK45Adaptive"
EULER_MARUYAMA = "EulerMaruyama"
METHODS = (RK4_FIXED, RK45_ADAPTIVE, EULER_MARUYAMA)

INITIAL_STYLES = ("coherent", "fock")
CHI_FORMS = ("approx", "exact")
NOISE_ORDERINGS = ("normal", "symmetric")

MAX_SEED = 2**64 - 1


def _require(cond, key, message):
    if not cond:
        raise ScenarioError(f"{key}: {message}", key=key)


@dataclass(frozen=True)
class ModelParams:
    """Rates and frequencies of one scenario, in reference-rate units.

    ``delta_b`` and ``delta_c`` are the exciton-pump and cavity-pump
    detunings. They are stored independently of ``omega_b``/``omega_c``;
    ``omega_b`` and ``omega_p`` are informational and may be left unset.
    """

    delta_b: float = 0.0
    delta_c: float = 0.0
    g0: float = 0.0
    kappa: float = 0.0
    gamma: float = 1.0
    eps_p: float = 0.0
    omega_c: float = 0.0
    omega_m: float = 0.0
    gm: float = 0.0
    gamma_m: float = 0.0
    n_th: float = 0.0
    omega_b: float | None = None
    omega_p: float | None = None
    reference_rate_label: str = "gamma"

    def __post_init__(self):
        for name in ("kappa", "gamma", "gamma_m", "n_th", "eps_p"):
            value = getattr(self, name)
            _require(np.isfinite(value), name, "must be finite")
            _require(value >= 0, name, f"must be >= 0 (got {value})")
        for name in ("delta_b", "delta_c", "g0", "omega_c", "omega_m", "gm"):
            _require(np.isfinite(getattr(self, name)), name, "must be finite")
        _require(
            self.reference_rate_label in ("gamma", "omega_m"),
            "reference_rate_label",
            "must be 'gamma' or 'omega_m'",
        )


@dataclass(frozen=True)
class Modulation:
    """Cavity-frequency modulation (epsilon, Omega) or pump modulation (eta, lam).

    ``lam`` is written as ``lambda`` in scenario files.
    """

    epsilon: float = 0.0
    Omega: float = 0.0
    eta: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        _require(abs(self.epsilon) < 1, "epsilon", "|epsilon| must be < 1")
        _require(self.eta >= 0, "eta", f"must be >= 0 (got {self.eta})")
        for name in ("Omega", "lam"):
            _require(np.isfinite(getattr(self, name)), name, "must be finite")


@dataclass(frozen=True)
class MeanFieldState:
    """Mean amplitudes <a>, <b> and mirror coordinates <q>, <p> at one instant."""

    a: complex = 0j
    b: complex = 0j
    q: float = 0.0
    p: float = 0.0

    def to_array(self):
        return np.array(
            [self.a.real, self.a.imag, self.b.real, self.b.imag, self.q, self.p],
            dtype=float,
        )

    @classmethod
    def from_array(cls, y):
        return cls(complex(y[0], y[1]), complex(y[2], y[3]), float(y[4]), float(y[5]))


@dataclass(frozen=True)
class IntegratorSettings:
    method: str = RK45_ADAPTIVE
    h: float = 1e-3
    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    h_min: float = 1e-12
    h_max: float = 0.5

    def __post_init__(self):
        _require(self.method in METHODS, "method", f"must be one of {METHODS}")
        _require(self.h > 0, "h", "must be > 0")
        _require(self.rel_tol > 0, "rel_tol", "must be > 0")
        _require(self.abs_tol > 0, "abs_tol", "must be > 0")
        _require(self.h_min > 0, "h_min", "must be > 0")
        _require(self.h_min <= self.h_max, "h_min", "must be <= h_max")


@dataclass(frozen=True)
class Scenario:
    """Model variant, parameters, initial data and run settings.

    Extra switches beyond the core fields: ``initial_style`` selects how the
    moments backend reads the initial exciton (coherent amplitude vs. a Fock
    state with the same occupation), ``chi_form`` picks the first-order or
    exact two-photon coefficient, and ``noise_ordering`` adds vacuum noise on
    the optical and excitonic modes to ensemble runs when ``symmetric``.
    """

    variant: str
    params: ModelParams
    modulation: Modulation = field(default_factory=Modulation)
    initial: MeanFieldState = field(default_factory=lambda: MeanFieldState(b=1 + 0j))
    backend: str = MEAN_FIELD
    t_end: float = 50.0
    sample_dt: float = 0.01
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings)
    seed: int = 0
    n_traj: int = 1024
    initial_style: str = "fock"
    chi_form: str = "approx"
    noise_ordering: str = "normal"
    name: str = ""

    def __post_init__(self):
        _require(self.variant in VARIANTS, "variant", f"must be one of {VARIANTS}")
        _require(self.backend in BACKENDS, "backend", f"must be one of {BACKENDS}")
        _require(self.t_end >= 0, "t_end", "must be >= 0")
        _require(self.sample_dt > 0, "sample_dt", "must be > 0")
        _require(
            isinstance(self.seed, (int, np.integer)) and 0 <= self.seed <= MAX_SEED,
            "seed",
            "must be an unsigned 64-bit integer",
        )
        _require(
            self.initial_style in INITIAL_STYLES,
            "initial_style",
            f"must be one of {INITIAL_STYLES}",
        )
        _require(self.chi_form in CHI_FORMS, "chi_form", f"must be one of {CHI_FORMS}")
        _require(
            self.noise_ordering in NOISE_ORDERINGS,
            "noise_ordering",
            f"must be one of {NOISE_ORDERINGS}",
        )
        if self.backend == MOMENTS:
            _require(
                self.variant == CLASSICAL_MIRROR,
                "backend",
                f"Moments backend requires variant {CLASSICAL_MIRROR} (got {self.variant})",
            )
        if self.backend == ENSEMBLE:
            _require(self.n_traj >= 1, "n_traj", "must be >= 1 for the Ensemble backend")
            _require(
                self.integrator.method == EULER_MARUYAMA,
                "method",
                "the Ensemble backend requires method EulerMaruyama",
            )
        else:
            _require(
                self.integrator.method != EULER_MARUYAMA,
                "method",
                "EulerMaruyama is only available with the Ensemble backend",
            )
        mod = self.modulation
        if self.variant == MODULATED_PUMP:
            _require(mod.epsilon == 0, "epsilon", f"unused by {MODULATED_PUMP}; must be 0")
            _require(self.params.omega_m > 0, "omega_m", "must be > 0")
        else:
            _require(mod.eta == 0, "eta", f"unused by {self.variant}; must be 0")
        if self.variant == QUANTIZED_MIRROR:
            _require(self.params.omega_m > 0, "omega_m", "must be > 0")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @property
    def reference_rate_symbol(self):
        return "γ" if self.params.reference_rate_label == "gamma" else "ω_m"


# --- time-dependent coefficients -------------------------------------------


def cavity_frequency(t, params, modulation):
    return params.omega_c * (1 + modulation.epsilon * np.sin(modulation.Omega * t))


def chi0(modulation):
    return modulation.epsilon * modulation.Omega / 8


def chi_exact(t, params, modulation):
    """(1/4 w_c(t)) dw_c/dt for the sinusoidally modulated cavity frequency."""
    eps, Om = modulation.epsilon, modulation.Omega
    return eps * Om * np.cos(Om * t) / (4 * (1 + eps * np.sin(Om * t)))


def chi_approx(t, params, modulation):
    return 2 * chi0(modulation) * np.cos(modulation.Omega * t)


def chi(t, params, modulation, form="approx"):
    if form == "exact":
        return chi_exact(t, params, modulation)
    return chi_approx(t, params, modulation)


def coupling_gm(t, params, modulation):
    return params.omega_c * modulation.epsilon * np.sin(modulation.Omega * t)


def coupling_g(t, params, modulation):
    return params.g0 * modulation.epsilon * np.sin(modulation.Omega * t) / 2


def pump_amplitude(t, params, modulation, variant=MODULATED_PUMP):
    if variant != MODULATED_PUMP:
        return params.eps_p + 0 * np.asarray(t, dtype=float)
    return params.eps_p * (1 + modulation.eta * np.cos(modulation.lam * t))
