"""
Result tables written by the runner: CSV with commented metadata, or JSON.

CSV layout:

    # metadata: {"command": ..., "config": ..., "version": ..., "timestamp": ...}
    col_a,col_b,...
    ...
    # summary: {...}
"""
import json
import math
from datetime import datetime, timezone

import numpy as np
import pandas as pd

from . import __version__
from .config import load_defaults


def format_value(value):
    """ Period decimals, scientific notation below csv_scientific_below """
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if 0 < abs(value) < load_defaults()['csv_scientific_below']:
            return '%.16e' % value
        return repr(value)
    return str(value)


def _plain(value):
    """ JSON-safe scalar; non-finite floats become null """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def build_metadata(command, config=None, configs=None):
    metadata = {'command': command, 'version': __version__,
                'timestamp': datetime.now(timezone.utc).isoformat(timespec='seconds')}
    if config is not None:
        metadata['config'] = config.to_dict()
    if configs is not None:
        metadata['configs'] = [item.to_dict() for item in configs]
    return metadata


class ResultTable(object):

    def __init__(self, columns, rows=(), metadata=None, summary=None):
        self.frame = pd.DataFrame([list(row) for row in rows], columns=list(columns))
        self.metadata = metadata or {}
        self.summary = summary or {}
        if self.frame.shape[1] != len(columns):
            raise ValueError('Row width does not match %d columns' % len(columns))

    @classmethod
    def from_series(cls, series, metadata=None, summary=None):
        """ Build from (name, values) pairs, all of equal length """
        series = [(name, list(values)) for name, values in series]
        lengths = {len(values) for _, values in series}
        if len(lengths) > 1:
            raise ValueError('Series lengths differ: %s' % sorted(lengths))
        return cls([name for name, _ in series], zip(*[values for _, values in series]), metadata, summary)

    @property
    def columns(self):
        return list(self.frame.columns)

    def __len__(self):
        return len(self.frame)

    def column(self, name):
        return self.frame[name].to_numpy()

    def rows(self):
        return [tuple(row) for row in self.frame.itertuples(index=False, name=None)]

    def body_csv(self):
        formatted = pd.DataFrame({name: self.frame[name].map(format_value) for name in self.frame.columns},
                                 columns=self.frame.columns)
        return formatted.to_csv(index=False, lineterminator='\n')

    def to_csv(self):
        lines = ['# metadata: %s\n' % json.dumps(_plain(self.metadata), sort_keys=True), self.body_csv()]
        if self.summary:
            lines.append('# summary: %s\n' % json.dumps(_plain(self.summary), sort_keys=True))
        return ''.join(lines)

    def to_json(self):
        document = {
            'metadata': _plain(self.metadata),
            'columns': {name: _plain(self.frame[name].tolist()) for name in self.frame.columns},
            'summary': _plain(self.summary),
        }
        return json.dumps(document, indent=2, sort_keys=True) + '\n'

    def render(self, fmt='csv'):
        if fmt == 'json':
            return self.to_json()
        return self.to_csv()

    def write(self, path, fmt='csv'):
        with open(path, 'w') as f:
            f.write(self.render(fmt))
        return path
