"""Flat key-value scenario files and sweep specifications.

Scenario files are flat TOML: one ``key = value`` per line, every key a field
name (``lambda`` for the pump modulation frequency, ``a``/``b`` as
``[re, im]`` pairs). Unknown keys are rejected.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ScenarioError, UnknownPresetError
from .params import (
    IntegratorSettings,
    MeanFieldState,
    ModelParams,
    Modulation,
    Scenario,
)
from .presets import CATALOG, preset

_MODULATION_KEYS = {"epsilon": "epsilon", "Omega": "Omega", "eta": "eta", "lambda": "lam"}
_PARAM_KEYS = tuple(f.name for f in fields(ModelParams))
_INTEGRATOR_KEYS = tuple(f.name for f in fields(IntegratorSettings))
_INITIAL_KEYS = ("a", "b", "q", "p")
_TOP_KEYS = (
    "variant",
    "backend",
    "name",
    "t_end",
    "sample_dt",
    "seed",
    "n_traj",
    "initial_style",
    "chi_form",
    "noise_ordering",
)
SCENARIO_KEYS = (
    _TOP_KEYS + _PARAM_KEYS + tuple(_MODULATION_KEYS) + _INITIAL_KEYS + _INTEGRATOR_KEYS
)
_STRING_KEYS = {
    "variant", "backend", "name", "initial_style", "chi_form", "noise_ordering",
    "method", "reference_rate_label",
}
_INT_KEYS = {"seed", "n_traj"}
_OPTIONAL_KEYS = {"omega_b", "omega_p"}


def _coerce(key, value):
    if key in _STRING_KEYS:
        if not isinstance(value, str):
            raise ScenarioError(f"{key}: expected a string, got {value!r}", key=key)
        return value
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"{key}: expected an integer, got {value!r}", key=key)
        return value
    if key in ("a", "b"):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return complex(value, 0.0)
        if (
            isinstance(value, list)
            and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
        ):
            return complex(float(value[0]), float(value[1]))
        raise ScenarioError(f"{key}: expected [re, im], got {value!r}", key=key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{key}: expected a number, got {value!r}", key=key)
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError(f"{key}: must be finite", key=key)
    return value


def scenario_from_dict(data):
    """Build and validate a Scenario from a flat mapping of file keys."""
    unknown = [k for k in data if k not in SCENARIO_KEYS]
    if unknown:
        raise ScenarioError(f"unknown key {unknown[0]!r}", key=unknown[0])
    if "variant" not in data:
        raise ScenarioError("variant: required key missing", key="variant")
    values = {k: _coerce(k, v) for k, v in data.items()}
    params = ModelParams(**{k: values[k] for k in _PARAM_KEYS if k in values})
    modulation = Modulation(
        **{attr: values[k] for k, attr in _MODULATION_KEYS.items() if k in values}
    )
    initial = MeanFieldState(
        **{k: values[k] for k in _INITIAL_KEYS if k in values}
    ) if any(k in values for k in _INITIAL_KEYS) else MeanFieldState(b=1 + 0j)
    integrator = IntegratorSettings(
        **{k: values[k] for k in _INTEGRATOR_KEYS if k in values}
    )
    top = {k: values[k] for k in _TOP_KEYS if k in values}
    return Scenario(
        params=params, modulation=modulation, initial=initial, integrator=integrator, **top
    )


def parse_scenario(text):
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"malformed scenario file: {exc}") from exc
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ScenarioError(f"unknown key {nested[0]!r} (scenario files are flat)", key=nested[0])
    return scenario_from_dict(data)


def scenario_to_dict(scenario):
    d = {k: getattr(scenario, k) for k in _TOP_KEYS}
    d["seed"] = int(d["seed"])
    d["n_traj"] = int(d["n_traj"])
    for k in _PARAM_KEYS:
        v = getattr(scenario.params, k)
        if v is None and k in _OPTIONAL_KEYS:
            continue
        d[k] = v
    for k, attr in _MODULATION_KEYS.items():
        d[k] = getattr(scenario.modulation, attr)
    init = scenario.initial
    d["a"] = [init.a.real, init.a.imag]
    d["b"] = [init.b.real, init.b.imag]
    d["q"] = init.q
    d["p"] = init.p
    for k in _INTEGRATOR_KEYS:
        d[k] = getattr(scenario.integrator, k)
    return d


def _toml_value(v):
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {v!r}")


def write_scenario(scenario):
    d = scenario_to_dict(scenario)
    return "".join(f"{k} = {_toml_value(v)}\n" for k, v in d.items())


def load_scenario(source):
    """Scenario from a preset name, a scenario file, or a run's JSON sidecar."""
    if isinstance(source, str) and source in CATALOG:
        return preset(source)
    path = Path(source)
    if not path.exists():
        if isinstance(source, str) and "/" not in source and "." not in source:
            raise UnknownPresetError(source)
        raise ScenarioError(f"no such scenario file: {path}")
    if path.suffix == ".json":
        import json

        meta = json.loads(path.read_text(encoding="utf-8"))
        return scenario_from_dict(meta["scenario"])
    return parse_scenario(path.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    axes: tuple
    output_dir: str | None = None
    max_runs: int = 10_000

    def __post_init__(self):
        if not self.axes:
            raise ScenarioError("a sweep needs at least one axis", key="axes")
        for key, values in self.axes:
            if key not in SCENARIO_KEYS:
                raise ScenarioError(f"unknown sweep key {key!r}", key=key)
            if not values:
                raise ScenarioError(f"sweep axis {key!r} has no values", key=key)
        if self.size > self.max_runs:
            raise ScenarioError(
                f"sweep has {self.size} runs, above the cap of {self.max_runs}",
                key="max_runs",
            )

    @property
    def size(self):
        return math.prod(len(v) for _, v in self.axes)

    def expand(self):
        """``[(suffix, scenario), ...]`` over the Cartesian product of the axes."""
        base = scenario_to_dict(self.base)
        keys = [k for k, _ in self.axes]
        runs = []
        for combo in itertools.product(*(v for _, v in self.axes)):
            d = dict(base)
            d.update(zip(keys, combo))
            suffix = "_".join(f"{k}-{_fmt(v)}" for k, v in zip(keys, combo))
            runs.append((suffix, scenario_from_dict(d)))
        return runs


def _fmt(v):
    if isinstance(v, float):
        return format(v, "g")
    if isinstance(v, list):
        return "x".join(_fmt(x) for x in v)
    return str(v)


def preset_sweep_spec(name, output_dir=None):
    from .presets import preset_sweep

    key, values = preset_sweep(name)
    return SweepSpec(preset(name), ((key, tuple(values)),), output_dir)


def parse_sweep(text, base_dir="."):
    """Sweep file: ``base``, optional ``output_dir``/``max_runs``, and an ``[axes]`` table."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"malformed sweep file: {exc}") from exc
    allowed = {"base", "output_dir", "max_runs", "axes"}
    unknown = [k for k in data if k not in allowed]
    if unknown:
        raise ScenarioError(f"unknown key {unknown[0]!r}", key=unknown[0])
    if "base" not in data:
        raise ScenarioError("base: required key missing", key="base")
    base_ref = data["base"]
    if base_ref in CATALOG:
        base = preset(base_ref)
    else:
        base = load_scenario(str(Path(base_dir) / base_ref))
    axes = data.get("axes", {})
    if not isinstance(axes, dict):
        raise ScenarioError("axes: expected a table", key="axes")
    axes_t = []
    for key, values in axes.items():
        if not isinstance(values, list):
            raise ScenarioError(f"axes.{key}: expected a list of values", key=key)
        axes_t.append((key, tuple(values)))
    return SweepSpec(
        base,
        tuple(axes_t),
        str(Path(base_dir) / data["output_dir"]) if "output_dir" in data else None,
        int(data.get("max_runs", 10_000)),
    )
