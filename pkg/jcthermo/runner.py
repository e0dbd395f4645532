"""
Experiment commands behind the CLI. Every command returns a ResultTable;
sweep points run on a thread pool and come back in sweep order.
"""
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import AXIS_FIELDS, ExperimentConfig, load_defaults
from .diagnostics import effective_temperatures, thermalization_verdict, trace_distance_curve
from .exceptions import ConfigError
from .logs import LoggingMixin
from .negativity import (critical_coupling, crossover_index, eigenstate_populations, f_condition,
                         log_negativity_analytic, log_negativity_numeric, negativity_params, truncation_index)
from .results import ResultTable, build_metadata
from .steadystate import build_rate_graph, steady_state, top_subspace_population


def worker_count():
    """ Pool size from the threads environment variable, default one per core """
    name = load_defaults()['threads_env']
    value = os.environ.get(name)
    if value is None or value == '':
        return os.cpu_count() or 1
    try:
        count = int(value)
    except ValueError:
        raise ConfigError('%s must be an integer, got %r' % (name, value), field=name)
    if count < 1:
        raise ConfigError('%s must be at least 1, got %d' % (name, count), field=name)
    return count


class SweepRunner(LoggingMixin):

    _log_name = 'sweep'

    def __init__(self, workers=None):
        self.workers = workers if workers is not None else worker_count()

    def map(self, func, items):
        items = list(items)
        self._debug('running %d points on %d workers', len(items), self.workers)
        started = time.monotonic()
        if self.workers == 1 or len(items) < 2:
            results = [func(item) for item in items]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                results = list(executor.map(func, items))
        self._info('finished %d points in %.2f s', len(items), time.monotonic() - started)
        return results


def _axis_values(config, parameter, defaults_key):
    if config is not None and config.sweep is not None and config.sweep.parameter == parameter:
        return config.sweep.values()
    grid = load_defaults()[defaults_key]
    return np.linspace(grid['start'], grid['stop'], grid['steps'])


def _check_sweep(config, allowed_axis=None):
    if config.sweep is None:
        return
    parameter = config.sweep.parameter
    if parameter in AXIS_FIELDS and parameter != allowed_axis:
        raise ConfigError('Sweep over %s is not available for this command' % parameter, field='sweep.parameter')


def _solve(config):
    graph = build_rate_graph(config.model, config.bath, config.n_d)
    populations = steady_state(graph)
    verdict = thermalization_verdict(populations, config.model, config.verdict_tolerance)
    return graph, populations, verdict


def _point_summary(value, populations, verdict, parameter=None):
    summary = verdict.summary()
    summary['top_subspace_population'] = top_subspace_population(populations)
    if parameter is not None:
        summary[parameter] = value
    return summary


def cmd_steady(config, runner=None):
    """ Populations per level with the thermalization verdict in the summary """
    config.require('model', 'bath')
    _check_sweep(config)
    runner = runner or SweepRunner()
    points = config.sweep_points()
    parameter = config.sweep.parameter if config.sweep else None
    solved = runner.map(lambda point: _solve(point[1]), points)

    columns = ([parameter] if parameter else []) + ['k', 'n', 'branch', 'energy', 'population']
    rows, verdicts = [], []
    for (value, _), (graph, populations, verdict) in zip(points, solved):
        prefix = [value] if parameter else []
        for index, level in graph.levels:
            rows.append(prefix + [index.k, level.n, level.branch, level.energy, populations.population(index.k)])
        verdicts.append(_point_summary(value, populations, verdict, parameter))

    summary = verdicts[0] if parameter is None else {'points': verdicts}
    return ResultTable(columns, rows, build_metadata('steady', config), summary)


def cmd_teff(config, runner=None):
    """ Long-format effective temperature grid; masked is 0 valid, 1 infinite, 2 invalid """
    config.require('model', 'bath')
    _check_sweep(config)
    runner = runner or SweepRunner()
    points = config.sweep_points()
    parameter = config.sweep.parameter if config.sweep else None
    solved = runner.map(lambda point: _solve(point[1]), points)

    columns = ([parameter] if parameter else []) + ['m', 'n', 'T_eff', 'masked']
    rows, verdicts = [], []
    for (value, _), (graph, populations, verdict) in zip(points, solved):
        prefix = [value] if parameter else []
        grid = effective_temperatures(populations, graph.levels)
        rows.extend(prefix + list(record) for record in grid.records())
        verdicts.append(_point_summary(value, populations, verdict, parameter))

    summary = verdicts[0] if parameter is None else {'points': verdicts}
    return ResultTable(columns, rows, build_metadata('teff', config), summary)


def cmd_tracedist(configs, runner=None):
    """ D(T_ref) between each configuration's steady state and Gibbs(T_ref); one series per config """
    if isinstance(configs, ExperimentConfig):
        configs = [configs]
    for config in configs:
        config.require('model', 'bath')
        _check_sweep(config, allowed_axis='T_ref')
        if config.sweep is not None and config.sweep.parameter != 'T_ref':
            raise ConfigError('tracedist sweeps T_ref only', field='sweep.parameter')
    runner = runner or SweepRunner()

    def series(config):
        temps = _axis_values(config, 'T_ref', 'tracedist_sweep')
        populations = steady_state(build_rate_graph(config.model, config.bath, config.n_d))
        return temps, trace_distance_curve(populations, config.model, temps)

    curves = runner.map(series, configs)
    rows, minima = [], []
    for number, (config, (temps, distances)) in enumerate(zip(configs, curves)):
        name = config.label or 'series%d' % number
        rows.extend([name, float(T), float(D)] for T, D in zip(temps, distances))
        best = int(np.argmin(distances))
        minima.append({'series': name, 'T_ref_at_min': float(temps[best]), 'min_D': float(distances[best])})
    return ResultTable(['series', 'T_ref', 'D'], rows, build_metadata('tracedist', configs=configs),
                       {'series': minima})


def _negativity_point(point):
    s, g_r = point
    params, T = negativity_params(s, g_r)
    analytic = log_negativity_analytic(params, T)
    numeric = log_negativity_numeric(params, T)
    return analytic, numeric


def _check_g_r_sweep(config, command):
    if config is None:
        return
    _check_sweep(config, allowed_axis='g_r')
    if config.sweep is not None and config.sweep.parameter != 'g_r':
        raise ConfigError('%s sweeps g_r only' % command, field='sweep.parameter')


def _curve_peaks(frame, column, name):
    """ Maximum of column over g_r for each s; interior is false when it sits on a grid end """
    peaks = []
    for s in frame['s'].unique():
        curve = frame[frame['s'] == s]
        best = curve[column].idxmax()
        peaks.append({'s': float(s), 'g_r_at_max': float(frame.at[best, 'g_r']), name: float(frame.at[best, column]),
                      'interior': bool(curve.index[0] < best < curve.index[-1])})
    return peaks


def cmd_negativity(config=None, runner=None):
    """ N versus g_r for each s, analytic block route against the dense oracle """
    _check_g_r_sweep(config, 'negativity')
    defaults = load_defaults()['negativity_sweep']
    s_values = config.s_values if config is not None and config.s_values else defaults['s_values']
    g_values = _axis_values(config, 'g_r', 'negativity_sweep')
    runner = runner or SweepRunner()

    points = [(float(s), float(g_r)) for s in s_values for g_r in g_values]
    results = runner.map(_negativity_point, points)
    rows = []
    for (s, g_r), (analytic, numeric) in zip(points, results):
        n0 = -1 if analytic.n0 is None else analytic.n0
        rows.append([s, g_r, analytic.log_negativity, numeric.log_negativity, n0, analytic.n_max])
    table = ResultTable(['s', 'g_r', 'N_analytic', 'N_numeric', 'n_0', 'n_max'], rows,
                        build_metadata('negativity', config))

    frame = table.frame
    table.summary = {'max_abs_difference': float((frame['N_analytic'] - frame['N_numeric']).abs().max()),
                     'peaks': _curve_peaks(frame, 'N_analytic', 'max_N')}
    return table


def cmd_fcondition(config=None, runner=None):
    """ F_n(g_r) for each n, with the critical coupling where F_n changes sign """
    _check_g_r_sweep(config, 'fcondition')
    defaults = load_defaults()['fcondition_sweep']
    n_values = config.n_values if config is not None and config.n_values else defaults['n_values']
    g_values = _axis_values(config, 'g_r', 'fcondition_sweep')
    runner = runner or SweepRunner()

    curves = runner.map(lambda n: f_condition(np.full(len(g_values), n), g_values), n_values)
    rows = []
    for n, curve in zip(n_values, curves):
        rows.extend([int(n), float(g_r), float(F)] for g_r, F in zip(g_values, curve))
    critical = [{'n': int(n), 'g_r_critical': critical_coupling(int(n))} for n in n_values]
    return ResultTable(['n', 'g_r', 'F_n'], rows, build_metadata('fcondition', config),
                       {'critical_couplings': critical})


def cmd_populations(config=None, runner=None):
    """ Thermal probabilities of the lowest eigenstates versus g_r at resonance """
    _check_g_r_sweep(config, 'populations')
    defaults = load_defaults()['populations_sweep']
    s_values = config.s_values if config is not None and config.s_values else defaults['s_values']
    n_d = config.truncation if config is not None and config.truncation else defaults['truncation']
    g_values = _axis_values(config, 'g_r', 'populations_sweep')
    runner = runner or SweepRunner()

    points = [(float(s), float(g_r)) for s in s_values for g_r in g_values]
    results = runner.map(lambda point: eigenstate_populations(*negativity_params(*point), n_d), points)
    rows = []
    for (s, g_r), p in zip(points, results):
        rows.extend([s, g_r, k, float(p_k)] for k, p_k in enumerate(p, start=1))
    table = ResultTable(['s', 'g_r', 'k', 'p_k'], rows, build_metadata('populations', config))

    frame = table.frame
    peaks = []
    for k in range(2, 2 * n_d + 2):
        for peak in _curve_peaks(frame[frame['k'] == k], 'p_k', 'max_p'):
            peak['k'] = k
            peaks.append(peak)
    table.summary = {'truncation': n_d, 'peaks': peaks}
    return table


def _table1_row(point):
    s, g_r = point
    params, T = negativity_params(s, g_r)
    n0 = crossover_index(g_r)
    return [g_r, -1 if n0 is None else n0 + 2, truncation_index(params, T)]


def cmd_table1(runner=None):
    """ n_0 + 2 and n_max over the tabulated g_r values """
    table1 = load_defaults()['table1']
    runner = runner or SweepRunner()
    rows = runner.map(_table1_row, [(float(table1['s']), float(g_r)) for g_r in table1['g_r']])
    metadata = build_metadata('table1')
    metadata['s'] = float(table1['s'])
    return ResultTable(['g_r', 'n0_plus_2', 'n_max'], rows, metadata)
