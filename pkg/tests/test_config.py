import glob
import json
import os

import numpy as np
import pytest

from conftest import CONFIG_DIR, config_path, load_config
from jcthermo.config import (ExperimentConfig, OutputSpec, SweepAxis, load_defaults, parse_config,
                             parse_config_file)
from jcthermo.eigensystem import JCParams
from jcthermo.exceptions import ConfigError
from jcthermo.transitions import CHB, IHB, BathConfig

ALL_CONFIGS = sorted(os.path.splitext(os.path.basename(path))[0]
                     for path in glob.glob(os.path.join(CONFIG_DIR, '*.json')))

BASE = {
    'label': 'test',
    'model': {'omega0': 1.0, 'omega_c': 1.0, 'g': 0.02},
    'bath': {'topology': 'IHB', 'gamma_sigma': 1e-4, 'gamma_a': 1e-4, 'T_sigma': 2.0, 'T_a': 2.0},
}


def _with(section, **changes):
    data = json.loads(json.dumps(BASE))
    if section is None:
        data.update(changes)
    else:
        data[section].update(changes)
    return data


def test_defaults():
    defaults = load_defaults()
    assert defaults['truncation'] == 17
    assert defaults['verdict_tolerance'] == 1e-6
    assert defaults['negativity_threshold'] == 1e-20
    assert defaults['table1']['g_r'] == [0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4]
    assert defaults['threads_env'] == 'JC_THERMO_THREADS'
    assert load_defaults() is defaults


def test_defaults_from_path(tmp_path):
    path = tmp_path / 'conf.yml'
    path.write_text('truncation: 9\nverdict_tolerance: 1.0e-5\n')
    assert load_defaults(str(path)) == {'truncation': 9, 'verdict_tolerance': 1e-5}
    assert load_defaults()['truncation'] == 17


def test_invalid_defaults_file(tmp_path):
    path = tmp_path / 'conf.yml'
    path.write_text('truncation: 9\n  bad: [\n')
    with pytest.raises(ConfigError) as info:
        load_defaults(str(path))
    assert info.value.line is not None
    scalar = tmp_path / 'scalar.yml'
    scalar.write_text('17\n')
    with pytest.raises(ConfigError):
        load_defaults(str(scalar))


def test_parse_equal_temperatures_config():
    config = load_config('fig2a_equal_temperatures')
    assert config.label == 'fig2a_equal_temperatures'
    assert config.model == JCParams(1.0, 1.0, 0.02)
    assert config.bath == BathConfig.ihb(1e-4, 1e-4, 2.0, 2.0)
    assert config.n_d == 17
    assert config.sweep is None
    assert config.output == OutputSpec(None, 'csv')


def test_parse_common_bath_sweep():
    config = load_config('chb_detuning_sweep')
    assert config.bath.topology == CHB
    assert config.sweep == SweepAxis('omega_c', 0.9, 1.1, 5)
    points = config.sweep_points()
    assert [value for value, _ in points] == pytest.approx([0.9, 0.95, 1.0, 1.05, 1.1])
    assert points[1][1].model.omega_c == pytest.approx(0.95)
    assert points[1][1].bath == config.bath


def test_negativity_config():
    config = load_config('fig5_negativity')
    assert config.model is None
    assert config.s_values == (1.2, 1.4, 2.0, 11.0)
    np.testing.assert_allclose(config.sweep.values(), np.linspace(0.1, 3.0, 30))


def test_fcondition_config():
    config = load_config('fig6a_fcondition')
    assert config.n_values == (0, 1, 2, 5, 10, 20)
    assert config.sweep.parameter == 'g_r'
    assert load_config('fig6b_populations').truncation == 3


@pytest.mark.parametrize('name', ALL_CONFIGS)
def test_packaged_configs_round_trip(name):
    config = load_config(name)
    assert ExperimentConfig.from_dict(config.to_dict()) == config
    assert ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config


def test_defaults_apply_without_truncation():
    config = ExperimentConfig.from_dict(BASE)
    assert config.truncation is None
    assert config.n_d == 17
    assert config.verdict_tolerance == 1e-6
    assert 'truncation' not in config.to_dict()


def test_json_syntax_error_location():
    text = '{\n  "model": {"omega0": 1.0,\n  "g": }\n}'
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == 3
    assert info.value.column == 8
    assert 'line 3 column 8' in str(info.value)


def test_missing_file():
    with pytest.raises(ConfigError):
        parse_config_file(config_path('no_such_config'))


@pytest.mark.parametrize('data, field', [
    (_with(None, extra=1), 'extra'),
    (_with(None, label=3), 'label'),
    (_with('model', omega0=0.0), 'model.omega0'),
    (_with('model', g=-0.1), 'model.g'),
    (_with('model', g='strong'), 'model.g'),
    (_with('model', omega=1.0), 'model.omega'),
    (_with('bath', topology='shared'), 'bath.topology'),
    (_with('bath', gamma_a=-1e-4), 'bath.gamma_a'),
    (_with('bath', T=2.0), 'bath.T'),
    (_with(None, bath={'topology': 'CHB', 'gamma_sigma': 1e-4, 'gamma_a': 1e-4}), 'bath.T'),
    (_with(None, bath={'topology': 'IHB', 'T_sigma': 1.0}), 'bath.T_a'),
    (_with(None, truncation=0), 'truncation'),
    (_with(None, truncation=2.5), 'truncation'),
    (_with(None, truncation=True), 'truncation'),
    (_with(None, sweep={'parameter': 'kappa', 'start': 0, 'stop': 1, 'steps': 3}), 'sweep.parameter'),
    (_with(None, sweep={'parameter': 'g', 'start': 0, 'stop': 1}), 'sweep.steps'),
    (_with(None, sweep={'parameter': 'g', 'start': 0, 'stop': 1, 'steps': 0}), 'sweep.steps'),
    (_with(None, output={'format': 'xml'}), 'output.format'),
    (_with(None, output={'path': 7}), 'output.path'),
    (_with(None, tolerance=0.0), 'tolerance'),
    (_with(None, s_values=[]), 's_values'),
    (_with(None, s_values=[2.0, -1.0]), 's_values[1]'),
    (_with(None, n_values=[]), 'n_values'),
    (_with(None, n_values=[1, -1]), 'n_values[1]'),
    (_with(None, n_values=[0.5]), 'n_values[0]'),
    (_with(None, model=[1.0]), 'model'),
])
def test_validation_errors_name_the_field(data, field):
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.from_dict(data)
    assert info.value.field == field
    assert field in str(info.value)


def test_top_level_must_be_object():
    with pytest.raises(ConfigError):
        parse_config('[1, 2]')


def test_sweep_over_bath_field():
    config = ExperimentConfig.from_dict(_with(None, sweep={'parameter': 'T_a', 'start': 1.0, 'stop': 2.0,
                                                           'steps': 3}))
    temps = [point.bath.T_a for _, point in config.sweep_points()]
    assert temps == pytest.approx([1.0, 1.5, 2.0])
    assert all(point.bath.topology == IHB for _, point in config.sweep_points())


def test_sweep_into_invalid_value():
    config = ExperimentConfig.from_dict(_with(None, sweep={'parameter': 'g', 'start': -0.1, 'stop': 0.1,
                                                           'steps': 3}))
    with pytest.raises(ConfigError) as info:
        config.sweep_points()
    assert info.value.field == 'sweep.parameter'


def test_sweep_over_field_missing_from_topology():
    config = ExperimentConfig.from_dict(_with(None, sweep={'parameter': 'T', 'start': 1.0, 'stop': 2.0,
                                                           'steps': 2}))
    with pytest.raises(ConfigError):
        config.sweep_points()


def test_axis_sweeps_are_not_points():
    config = load_config('fig4_equal_temperatures')
    with pytest.raises(ConfigError):
        config.with_value('T_ref', 2.0)


def test_require():
    config = load_config('fig5_negativity')
    with pytest.raises(ConfigError) as info:
        config.require('model', 'bath')
    assert info.value.field == 'model'
