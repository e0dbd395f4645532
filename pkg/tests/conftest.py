import os

import pytest

from jcthermo.config import parse_config_file
from jcthermo.eigensystem import JCParams

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                          'jcthermo', 'experiment_configs')


def config_path(name):
    return os.path.join(CONFIG_DIR, name + '.json')


def load_config(name):
    return parse_config_file(config_path(name))


@pytest.fixture(autouse=True)
def small_pool(monkeypatch):
    monkeypatch.setenv('JC_THERMO_THREADS', '2')


@pytest.fixture
def resonant():
    return JCParams(omega0=1.0, omega_c=1.0, g=0.02)


@pytest.fixture
def detuned():
    return JCParams(omega0=1.0, omega_c=0.95, g=0.03)
