import logging
import math

import numpy as np
import pytest

from jcthermo.eigensystem import (GROUND, MINUS, PLUS, JCParams, LevelIndex, bare_vector, check_ordering,
                                  eigen_level, enumerate_levels, hamiltonian_block, level_energies,
                                  mixing_amplitudes, mixing_angle, rabi_frequency)
from jcthermo.exceptions import LevelError


@pytest.mark.parametrize('params, n, expected', [
    (JCParams(1.0, 1.0, 0.02), 1, 0.04),
    (JCParams(1.0, 0.9, 0.0), 5, 0.1),
    (JCParams(1.0, 1.0, 0.02), 4, 0.08),
])
def test_rabi_frequency(params, n, expected):
    assert rabi_frequency(params, n) == pytest.approx(expected, abs=1e-15)


def test_rabi_frequency_rejects_vacuum(resonant):
    with pytest.raises(LevelError):
        rabi_frequency(resonant, 0)


@pytest.mark.parametrize('kwargs', [
    {'omega0': 0.0},
    {'omega_c': -1.0},
    {'g': -0.01},
])
def test_params_validation(kwargs):
    with pytest.raises(LevelError):
        JCParams(**kwargs)


def test_delta_is_derived():
    params = JCParams(1.0, 0.9, 0.01)
    assert params.delta == pytest.approx(0.1)


def test_vacuum_level(resonant):
    level = eigen_level(resonant, 0, GROUND)
    assert level.energy == -0.5
    assert level.excited_amplitude == 0.0
    assert level.ground_amplitude == 1.0


def test_first_doublet_at_resonance(resonant):
    plus = eigen_level(resonant, 1, PLUS)
    minus = eigen_level(resonant, 1, MINUS)
    assert plus.energy == pytest.approx(0.52, abs=1e-15)
    assert minus.energy == pytest.approx(0.48, abs=1e-15)
    assert plus.cos_half == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert plus.sin_half == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_mixing_angle_is_exact_at_resonance(resonant):
    assert mixing_angle(resonant, 3) == math.pi / 2


def test_mixing_angle_range():
    for omega_c in (0.8, 1.2):
        params = JCParams(1.0, omega_c, 0.05)
        for n in range(1, 20):
            theta = mixing_angle(params, n)
            assert 0 < theta < math.pi


@pytest.mark.parametrize('n, branch', [
    (0, PLUS),
    (0, MINUS),
    (1, GROUND),
    (-1, GROUND),
    (2, 'up'),
])
def test_invalid_labels(resonant, n, branch):
    with pytest.raises(LevelError):
        eigen_level(resonant, n, branch)


def test_enumerate_levels_count(resonant):
    levels = enumerate_levels(resonant, 17)
    assert len(levels) == 35
    assert [index.k for index, _ in levels] == list(range(1, 36))


def test_enumerate_levels_order(resonant):
    labels = [(level.n, level.branch) for _, level in enumerate_levels(resonant, 1)]
    assert labels == [(0, GROUND), (1, MINUS), (1, PLUS)]


def test_two_subspace_energies(resonant):
    energies = [level.energy for _, level in enumerate_levels(resonant, 2)]
    expected = [-0.5, 0.48, 0.52, 1.5 - 0.02 * math.sqrt(2), 1.5 + 0.02 * math.sqrt(2)]
    np.testing.assert_allclose(energies, expected, rtol=0, atol=1e-15)


def test_enumerate_levels_rejects_zero_truncation(resonant):
    with pytest.raises(LevelError):
        enumerate_levels(resonant, 0)


@pytest.mark.parametrize('params', [
    JCParams(1.0, 1.0, 0.02),
    JCParams(1.0, 0.9, 0.05),
    JCParams(1.0, 1.1, 0.01),
    JCParams(1.0, 1.0, 0.0),
])
def test_vectorized_energies_match_levels(params):
    direct = [level.energy for _, level in enumerate_levels(params, 12)]
    np.testing.assert_allclose(level_energies(params, 12), direct, rtol=0, atol=1e-14)


@pytest.mark.parametrize('params', [
    JCParams(1.0, 1.0, 0.02),
    JCParams(1.0, 0.9, 0.05),
    JCParams(1.0, 1.1, 0.01),
])
def test_mixing_amplitudes_match_levels(params):
    cos_half, sin_half = mixing_amplitudes(params, 10)
    for n in range(1, 11):
        level = eigen_level(params, n, PLUS)
        assert cos_half[n - 1] == pytest.approx(level.cos_half, abs=1e-15)
        assert sin_half[n - 1] == pytest.approx(level.sin_half, abs=1e-15)


@pytest.mark.parametrize('params', [
    JCParams(1.0, 1.0, 0.02),
    JCParams(1.0, 0.9, 0.05),
    JCParams(1.0, 1.07, 0.3),
])
def test_dressed_states_diagonalize_blocks(params):
    for n in range(1, 15):
        block = hamiltonian_block(params, n)
        plus, minus = eigen_level(params, n, PLUS), eigen_level(params, n, MINUS)
        transform = np.column_stack([bare_vector(plus), bare_vector(minus)])
        np.testing.assert_allclose(transform.T @ transform, np.eye(2), rtol=0, atol=1e-14)
        assert abs(np.linalg.det(transform)) == pytest.approx(1.0, abs=1e-14)
        for level in (plus, minus):
            vector = bare_vector(level)
            np.testing.assert_allclose(block @ vector, level.energy * vector, rtol=0, atol=1e-12)
        assert plus.energy - minus.energy == pytest.approx(rabi_frequency(params, n), abs=1e-12)


def test_amplitudes_normalized(detuned):
    for _, level in enumerate_levels(detuned, 17)[1:]:
        assert level.cos_half ** 2 + level.sin_half ** 2 == pytest.approx(1.0, abs=1e-14)
        assert level.sin_half > 0


def test_uncoupled_limit_gives_bare_energies():
    params = JCParams(1.0, 0.9, 1e-9)
    for n in range(1, 8):
        energies = sorted([eigen_level(params, n, MINUS).energy, eigen_level(params, n, PLUS).energy])
        bare = sorted([0.9 * n - 0.5, 0.9 * (n - 1) + 0.5])
        np.testing.assert_allclose(energies, bare, atol=1e-7)


def test_level_index_round_trip():
    for k in range(1, 30):
        n, branch = LevelIndex(k).label
        assert LevelIndex.from_label(n, branch).k == k
    assert LevelIndex.from_label(0, GROUND).k == 1
    assert LevelIndex.from_label(3, MINUS).k == 6
    assert LevelIndex.from_label(3, PLUS).k == 7


def test_level_index_starts_at_one():
    with pytest.raises(LevelError):
        LevelIndex(0)


def test_ordering_violation_is_logged(caplog):
    params = JCParams(1.0, 1.0, 0.45)
    assert eigen_level(params, 2, MINUS).energy < eigen_level(params, 1, PLUS).energy
    with caplog.at_level(logging.WARNING, logger='jcthermo'):
        levels = enumerate_levels(params, 2)
    assert len(levels) == 5
    assert 'not monotone' in caplog.text


def test_weak_coupling_is_ordered(resonant):
    assert check_ordering(level_energies(resonant, 17), resonant)
