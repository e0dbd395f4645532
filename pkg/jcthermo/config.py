"""
Runtime defaults and experiment configuration files.

Defaults come from the packaged conf.yml. Experiment configurations are JSON
documents (see config_schema.json at the repository root and the examples in
jcthermo/experiment_configs/) parsed into a frozen ExperimentConfig.
"""
import json
import os
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from .eigensystem import JCParams
from .exceptions import ConfigError, JCThermoError
from .transitions import BathConfig, CHB, IHB, TOPOLOGIES

CONF_FILENAME = 'conf.yml'
FORMATS = ('csv', 'json')
MODEL_FIELDS = ('omega0', 'omega_c', 'g')
BATH_FIELDS = ('gamma_sigma', 'gamma_a', 'T_sigma', 'T_a', 'T')
AXIS_FIELDS = ('T_ref', 'g_r')
SWEEPABLE = MODEL_FIELDS + BATH_FIELDS + AXIS_FIELDS
TOP_LEVEL_KEYS = ('label', 'model', 'bath', 'truncation', 'sweep', 'output', 'tolerance', 's_values', 'n_values')

_defaults = None


def load_defaults(path=None):
    """
        Read the YAML defaults. The packaged conf.yml is read once and cached;
        an explicit path is always read fresh.
    """
    global _defaults
    if path is not None:
        return _read_yaml(path)
    if _defaults is None:
        _defaults = _read_yaml(os.path.realpath(os.path.join(os.path.dirname(__file__), CONF_FILENAME)))
    return _defaults


def _read_yaml(path):
    try:
        with open(path) as f:
            conf = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        mark = getattr(exc, 'problem_mark', None)
        if mark is not None:
            raise ConfigError('Invalid YAML in %s' % path, line=mark.line + 1, column=mark.column + 1)
        raise ConfigError('Invalid YAML in %s: %s' % (path, exc))
    if not isinstance(conf, dict):
        raise ConfigError('Defaults file %s must hold a mapping' % path)
    return conf


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ConfigError('Unknown sweep parameter %r' % (self.parameter,), field='sweep.parameter')
        if self.steps < 1:
            raise ConfigError('Sweep needs at least one step', field='sweep.steps')

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)

    def to_dict(self):
        return {'parameter': self.parameter, 'start': self.start, 'stop': self.stop, 'steps': self.steps}


@dataclass(frozen=True)
class OutputSpec:
    path: str = None
    format: str = 'csv'

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError('Output format must be one of %s' % ', '.join(FORMATS), field='output.format')

    def to_dict(self):
        out = {'format': self.format}
        if self.path is not None:
            out['path'] = self.path
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    label: str = ''
    model: JCParams = None
    bath: BathConfig = None
    truncation: int = None
    sweep: SweepAxis = None
    output: OutputSpec = field(default_factory=OutputSpec)
    tolerance: float = None
    s_values: tuple = None
    n_values: tuple = None

    @property
    def n_d(self):
        return self.truncation if self.truncation is not None else load_defaults()['truncation']

    @property
    def verdict_tolerance(self):
        return self.tolerance if self.tolerance is not None else load_defaults()['verdict_tolerance']

    def require(self, *sections):
        for name in sections:
            if getattr(self, name) is None:
                raise ConfigError('Missing required section', field=name)
        return self

    def with_value(self, parameter, value):
        """ Copy with one model or bath field replaced (sweep application) """
        try:
            if parameter in MODEL_FIELDS:
                self.require('model')
                return replace(self, model=replace(self.model, **{parameter: float(value)}))
            if parameter in BATH_FIELDS:
                self.require('bath')
                return replace(self, bath=replace(self.bath, **{parameter: float(value)}))
        except ConfigError:
            raise
        except JCThermoError as exc:
            raise ConfigError(str(exc), field='sweep.parameter')
        raise ConfigError('Parameter %r is not a model or bath field' % (parameter,), field='sweep.parameter')

    def sweep_points(self):
        """ (value, config) pairs for a model or bath sweep, or [(None, self)] """
        if self.sweep is None:
            return [(None, self)]
        return [(float(v), self.with_value(self.sweep.parameter, v)) for v in self.sweep.values()]

    def to_dict(self):
        out = {'label': self.label}
        if self.model is not None:
            out['model'] = {name: getattr(self.model, name) for name in MODEL_FIELDS}
        if self.bath is not None:
            out['bath'] = self.bath.to_dict()
        if self.truncation is not None:
            out['truncation'] = self.truncation
        if self.sweep is not None:
            out['sweep'] = self.sweep.to_dict()
        out['output'] = self.output.to_dict()
        if self.tolerance is not None:
            out['tolerance'] = self.tolerance
        if self.s_values is not None:
            out['s_values'] = list(self.s_values)
        if self.n_values is not None:
            out['n_values'] = list(self.n_values)
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError('Configuration must be a JSON object')
        unknown = sorted(set(data) - set(TOP_LEVEL_KEYS))
        if unknown:
            raise ConfigError('Unknown key %r' % unknown[0], field=unknown[0])

        label = data.get('label', '')
        if not isinstance(label, str):
            raise ConfigError('Label must be a string', field='label')

        kwargs = {'label': label}
        if 'model' in data:
            kwargs['model'] = _parse_model(_section(data, 'model'))
        if 'bath' in data:
            kwargs['bath'] = _parse_bath(_section(data, 'bath'))
        if 'truncation' in data:
            kwargs['truncation'] = _integer(data['truncation'], 'truncation', minimum=1)
        if 'sweep' in data:
            kwargs['sweep'] = _parse_sweep(_section(data, 'sweep'))
        if 'output' in data:
            kwargs['output'] = _parse_output(_section(data, 'output'))
        if 'tolerance' in data:
            kwargs['tolerance'] = _number(data['tolerance'], 'tolerance', positive=True)
        if 's_values' in data:
            values = data['s_values']
            if not isinstance(values, list) or not values:
                raise ConfigError('s_values must be a nonempty list', field='s_values')
            kwargs['s_values'] = tuple(_number(v, 's_values[%d]' % i, positive=True) for i, v in enumerate(values))
        if 'n_values' in data:
            values = data['n_values']
            if not isinstance(values, list) or not values:
                raise ConfigError('n_values must be a nonempty list', field='n_values')
            kwargs['n_values'] = tuple(_integer(v, 'n_values[%d]' % i, minimum=0) for i, v in enumerate(values))
        return cls(**kwargs)


def parse_config(text, source='<config>'):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError('Invalid JSON in %s: %s' % (source, exc.msg), line=exc.lineno, column=exc.colno)
    return ExperimentConfig.from_dict(data)


def parse_config_file(path):
    try:
        with open(path) as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError('Cannot read config %s: %s' % (path, exc.strerror))
    return parse_config(text, source=path)


def _section(data, name):
    value = data[name]
    if not isinstance(value, dict):
        raise ConfigError('Section must be a JSON object', field=name)
    return value


def _check_keys(section, allowed, prefix):
    for key in section:
        if key not in allowed:
            raise ConfigError('Unknown key %r' % key, field='%s.%s' % (prefix, key))


def _number(value, path, positive=False, nonnegative=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError('Expected a number, got %r' % (value,), field=path)
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError('Expected a finite number', field=path)
    if positive and value <= 0:
        raise ConfigError('Must be positive, got %r' % value, field=path)
    if nonnegative and value < 0:
        raise ConfigError('Must be nonnegative, got %r' % value, field=path)
    return value


def _integer(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError('Expected an integer, got %r' % (value,), field=path)
    if minimum is not None and value < minimum:
        raise ConfigError('Must be at least %d, got %d' % (minimum, value), field=path)
    return value


def _parse_model(section):
    _check_keys(section, MODEL_FIELDS, 'model')
    values = {}
    for name in MODEL_FIELDS:
        if name in section:
            values[name] = _number(section[name], 'model.' + name, nonnegative=(name == 'g'),
                                   positive=(name != 'g'))
    return JCParams(**values)


def _parse_bath(section):
    _check_keys(section, ('topology',) + BATH_FIELDS, 'bath')
    topology = section.get('topology')
    if topology not in TOPOLOGIES:
        raise ConfigError('Topology must be one of %s' % ', '.join(TOPOLOGIES), field='bath.topology')
    required = ('T_sigma', 'T_a') if topology == IHB else ('T',)
    forbidden = ('T',) if topology == IHB else ('T_sigma', 'T_a')
    for name in required:
        if name not in section:
            raise ConfigError('Missing temperature for %s bath' % topology, field='bath.' + name)
    for name in forbidden:
        if name in section:
            raise ConfigError('Temperature not allowed for %s bath' % topology, field='bath.' + name)

    values = {}
    for name in BATH_FIELDS:
        if name in section:
            values[name] = _number(section[name], 'bath.' + name, nonnegative=True)
    if topology == CHB:
        return BathConfig.chb(values.get('gamma_sigma', 0.0), values.get('gamma_a', 0.0), values['T'])
    return BathConfig.ihb(values.get('gamma_sigma', 0.0), values.get('gamma_a', 0.0),
                          values['T_sigma'], values['T_a'])


def _parse_sweep(section):
    _check_keys(section, ('parameter', 'start', 'stop', 'steps'), 'sweep')
    for name in ('parameter', 'start', 'stop', 'steps'):
        if name not in section:
            raise ConfigError('Missing sweep key', field='sweep.' + name)
    if not isinstance(section['parameter'], str):
        raise ConfigError('Sweep parameter must be a string', field='sweep.parameter')
    return SweepAxis(section['parameter'],
                     _number(section['start'], 'sweep.start'),
                     _number(section['stop'], 'sweep.stop'),
                     _integer(section['steps'], 'sweep.steps', minimum=1))


def _parse_output(section):
    _check_keys(section, ('path', 'format'), 'output')
    path = section.get('path')
    if path is not None and not isinstance(path, str):
        raise ConfigError('Output path must be a string', field='output.path')
    return OutputSpec(path=path, format=section.get('format', 'csv'))
