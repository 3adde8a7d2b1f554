import pytest

from qwoptomech.errors import ScenarioError, UnknownPresetError
from qwoptomech.params import CLASSICAL_MIRROR, ModelParams, Scenario
from qwoptomech.presets import preset, preset_names
from qwoptomech.scenario_io import (
    load_scenario,
    parse_scenario,
    parse_sweep,
    preset_sweep_spec,
    write_scenario,
)


def test_minimal_file_fills_defaults():
    s = parse_scenario('variant = "ClassicalMirror"\n')
    assert s == Scenario(variant=CLASSICAL_MIRROR, params=ModelParams())
    assert s.backend == "MeanField" and s.integrator.method == "RK45Adaptive"
    assert s.initial.b == 1 and s.initial.a == 0


def test_negative_kappa_names_key():
    with pytest.raises(ScenarioError) as err:
        parse_scenario('variant = "ClassicalMirror"\nkappa = -1\n')
    assert err.value.key == "kappa" and ">= 0" in str(err.value)


@pytest.mark.parametrize(
    "line, key",
    [
        ("kapa = 1.0", "kapa"),
        ('kappa = "fast"', "kappa"),
        ("seed = 1.5", "seed"),
        ('a = [1.0]', "a"),
        ('backend = "Moments"\nvariant2 = 1', "variant2"),
    ],
)
def test_bad_keys_are_named(line, key):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(f'variant = "ClassicalMirror"\n{line}\n')
    assert err.value.key == key
    assert key in str(err.value)


def test_cross_field_violation():
    with pytest.raises(ScenarioError, match="Moments"):
        parse_scenario('variant = "QuantizedMirror"\nomega_m = 1.0\nbackend = "Moments"\n')


def test_nested_tables_rejected():
    with pytest.raises(ScenarioError, match="flat"):
        parse_scenario('variant = "ClassicalMirror"\n[params]\nkappa = 1.0\n')


def test_malformed_text():
    with pytest.raises(ScenarioError, match="malformed"):
        parse_scenario("variant = \n")


@pytest.mark.parametrize("name", preset_names())
def test_presets_round_trip(name):
    s = preset(name)
    assert parse_scenario(write_scenario(s)) == s


def test_lambda_and_complex_keys():
    s = parse_scenario(
        'variant = "ModulatedPump"\nomega_m = 1.0\neta = 0.2\nlambda = 2.0\n'
        "a = [0.5, -0.25]\nb = 1\n"
    )
    assert s.modulation.lam == 2.0
    assert s.initial.a == 0.5 - 0.25j and s.initial.b == 1


def test_load_scenario_sources(tmp_path):
    assert load_scenario("fig3c") == preset("fig3c")
    f = tmp_path / "x.toml"
    f.write_text(write_scenario(preset("fig7a")), encoding="utf-8")
    assert load_scenario(str(f)) == preset("fig7a")
    with pytest.raises(UnknownPresetError):
        load_scenario("fig9z")
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "missing.toml"))


def test_sweep_file(tmp_path):
    spec = parse_sweep('base = "fig2a"\n[axes]\nepsilon = [0.1, 0.2]\nkappa = [0.1, 1.5]\n',
                       base_dir=tmp_path)
    runs = spec.expand()
    assert spec.size == 4 and len(runs) == 4
    suffix, s = runs[1]
    assert suffix == "epsilon-0.1_kappa-1.5"
    assert s.modulation.epsilon == 0.1 and s.params.kappa == 1.5


def test_sweep_base_file_relative(tmp_path):
    (tmp_path / "base.toml").write_text(write_scenario(preset("fig6b")), encoding="utf-8")
    spec = parse_sweep('base = "base.toml"\noutput_dir = "o"\n[axes]\neta = [0.1, 0.4]\n',
                       base_dir=tmp_path)
    assert spec.base == preset("fig6b")
    assert spec.output_dir == str(tmp_path / "o")


def test_sweep_cap_and_validation():
    with pytest.raises(ScenarioError, match="cap"):
        parse_sweep('base = "fig2a"\nmax_runs = 3\n[axes]\nepsilon = [0.1, 0.2]\n'
                    "kappa = [1.0, 2.0]\n")
    with pytest.raises(ScenarioError, match="axis"):
        parse_sweep('base = "fig2a"\n')
    with pytest.raises(ScenarioError) as err:
        parse_sweep('base = "fig2a"\n[axes]\nkapa = [1.0]\n')
    assert err.value.key == "kapa"
    with pytest.raises(ScenarioError):
        parse_sweep('base = "fig2a"\n[axes]\nepsilon = [1.5]\n').expand()


def test_preset_sweep_spec():
    runs = preset_sweep_spec("fig6d").expand()
    assert [suffix for suffix, _ in runs] == ["eta-0.1", "eta-0.4"]
