"""Named parameter sets, one per panel (``fig2a`` ... ``fig7d``).

Naming follows the plots: ``fig2*`` photon number and ``fig3*`` fluorescence
for the classical mirror, ``fig4*`` and ``fig5*`` for the quantized mirror
(bad and good cavity), ``fig6*`` mirror position and ``fig7*`` photon number /
fluorescence for the modulated pump. Every preset starts at the first
modulation amplitude of its panel; :func:`preset_sweep` gives both.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownPresetError
from .params import (
    CLASSICAL_MIRROR,
    MODULATED_PUMP,
    QUANTIZED_MIRROR,
    MeanFieldState,
    ModelParams,
    Modulation,
    Scenario,
)


@dataclass(frozen=True)
class PresetInfo:
    scenario: Scenario
    channel: str
    sweep_key: str
    sweep_values: tuple
    description: str


# Shared rates for the classical and quantized mirror figures (units of gamma).
_CAVITY_BASE = dict(
    delta_b=2.0,
    delta_c=4.712,
    eps_p=5.0,
    gamma=1.0,
    gamma_m=1e-5,
    n_th=175.0,
    omega_c=1.36,
    reference_rate_label="gamma",
)
_OMEGA_M_II = 4.712

# Modulated-pump figures (units of omega_m).
_PUMP_BASE = dict(
    delta_b=0.459,
    delta_c=1.0,
    eps_p=1.5,
    gamma=0.212,
    gamma_m=1e-5,
    n_th=175.0,
    gm=0.1,
    omega_m=1.0,
    reference_rate_label="omega_m",
)

_EPSILONS = (0.1, 0.2)
_ETAS = (0.1, 0.4)
_START = MeanFieldState(a=0j, b=1 + 0j, q=0.0, p=0.0)

STRONG_G0 = 0.005
WEAK_G0 = 5.0
WEAK_G0_PUMP = 1.061
# The good-cavity quantized-mirror mean field runs away (2 chi q outgrows kappa)
# within a few tens of 1/gamma, so those panels stop earlier.
GOOD_CAVITY_T_END = 10.0


def _classical(name, kappa, g0, channel, desc):
    params = ModelParams(kappa=kappa, g0=g0, **_CAVITY_BASE)
    scenario = Scenario(
        variant=CLASSICAL_MIRROR,
        params=params,
        modulation=Modulation(epsilon=_EPSILONS[0], Omega=params.omega_c),
        initial=_START,
        name=name,
    )
    return PresetInfo(scenario, channel, "epsilon", _EPSILONS, desc)


def _quantized(name, kappa, g0, Omega_factor, channel, desc, t_end=50.0):
    params = ModelParams(kappa=kappa, g0=g0, omega_m=_OMEGA_M_II, **_CAVITY_BASE)
    scenario = Scenario(
        variant=QUANTIZED_MIRROR,
        params=params,
        modulation=Modulation(epsilon=_EPSILONS[0], Omega=Omega_factor * _OMEGA_M_II),
        initial=_START,
        t_end=t_end,
        name=name,
    )
    return PresetInfo(scenario, channel, "epsilon", _EPSILONS, desc)


def _pump(name, kappa, g0, channel, desc):
    params = ModelParams(kappa=kappa, g0=g0, **_PUMP_BASE)
    scenario = Scenario(
        variant=MODULATED_PUMP,
        params=params,
        modulation=Modulation(eta=_ETAS[0], lam=params.omega_m),
        initial=_START,
        name=name,
    )
    return PresetInfo(scenario, channel, "eta", _ETAS, desc)


def _build_catalog():
    cat = {}
    grid = (
        ("a", 1.5, STRONG_G0, "bad cavity, strong modulation"),
        ("b", 1.5, WEAK_G0, "bad cavity, weak modulation"),
        ("c", 0.1, STRONG_G0, "good cavity, strong modulation"),
        ("d", 0.1, WEAK_G0, "good cavity, weak modulation"),
    )
    for panel, kappa, g0, desc in grid:
        cat["fig2" + panel] = _classical(
            "fig2" + panel, kappa, g0, "A", f"classical mirror, photon number, {desc}"
        )
        cat["fig3" + panel] = _classical(
            "fig3" + panel, kappa, g0, "B", f"classical mirror, fluorescence, {desc}"
        )

    for panel, g0, channel, desc in (
        ("a", STRONG_G0, "A", "photon number, strong modulation"),
        ("b", WEAK_G0, "A", "photon number, weak modulation"),
        ("c", STRONG_G0, "B", "fluorescence, strong modulation"),
        ("d", WEAK_G0, "B", "fluorescence, weak modulation"),
    ):
        cat["fig4" + panel] = _quantized(
            "fig4" + panel, 1.5, g0, 1, channel,
            f"quantized mirror, bad cavity, Omega = omega_m, {desc}",
        )

    for panel, g0, factor, desc in (
        ("a", STRONG_G0, 1, "strong modulation, Omega = omega_m"),
        ("b", STRONG_G0, 2, "strong modulation, Omega = 2 omega_m"),
        ("c", WEAK_G0, 1, "weak modulation, Omega = omega_m"),
        ("d", WEAK_G0, 2, "weak modulation, Omega = 2 omega_m"),
    ):
        cat["fig5" + panel] = _quantized(
            "fig5" + panel, 0.1, g0, factor, "A", f"quantized mirror, good cavity, {desc}",
            t_end=GOOD_CAVITY_T_END,
        )

    for panel, kappa, g0, desc in (
        ("a", 0.1, WEAK_G0_PUMP, "good cavity, weak modulation"),
        ("b", 0.1, STRONG_G0, "good cavity, strong modulation"),
        ("c", 1.5, WEAK_G0_PUMP, "bad cavity, weak modulation"),
        ("d", 1.5, STRONG_G0, "bad cavity, strong modulation"),
    ):
        cat["fig6" + panel] = _pump(
            "fig6" + panel, kappa, g0, "q", f"modulated pump, mirror position, {desc}"
        )

    for panel, g0, channel, desc in (
        ("a", WEAK_G0_PUMP, "A", "photon number, weak modulation"),
        ("b", STRONG_G0, "A", "photon number, strong modulation"),
        ("c", WEAK_G0_PUMP, "B", "fluorescence, weak modulation"),
        ("d", STRONG_G0, "B", "fluorescence, strong modulation"),
    ):
        cat["fig7" + panel] = _pump(
            "fig7" + panel, 1.5, g0, channel, f"modulated pump, bad cavity, {desc}"
        )
    return cat


CATALOG = _build_catalog()


def preset_names():
    return sorted(CATALOG)


def preset_info(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownPresetError(name) from None


def preset(name):
    """Scenario for the named figure panel, at its first modulation amplitude."""
    return preset_info(name).scenario


def preset_sweep(name):
    """``(key, values)`` of the two modulation amplitudes compared in the panel."""
    info = preset_info(name)
    return info.sweep_key, info.sweep_values
