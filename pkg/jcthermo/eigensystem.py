"""
Exact eigensystem of the Jaynes-Cummings Hamiltonian.

All energies and frequencies are in units of omega_0 with hbar = 1. The
excitation number N = a^dag a + sigma_+ sigma_- is conserved, so the spectrum
splits into the vacuum |g,0> and dressed doublets

    |n,+> =  cos(theta_n/2)|e,n-1> + sin(theta_n/2)|g,n>
    |n,-> = -sin(theta_n/2)|e,n-1> + cos(theta_n/2)|g,n>

with energies omega_c (n - 1/2) +- Omega_n / 2. Levels are flattened as
E_1 = |0,ground>, E_2n = |n,->, E_2n+1 = |n,+>.
"""
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import LevelError
from .logs import LOG

GROUND = 'ground'
MINUS = 'minus'
PLUS = 'plus'
BRANCHES = (GROUND, MINUS, PLUS)


@dataclass(frozen=True)
class JCParams:
    omega0: float = 1.0
    omega_c: float = 1.0
    g: float = 0.0

    def __post_init__(self):
        if not (self.omega0 > 0 and self.omega_c > 0):
            raise LevelError('Frequencies must be positive: omega0=%r omega_c=%r' % (self.omega0, self.omega_c))
        if not self.g >= 0:
            raise LevelError('Coupling must be nonnegative: g=%r' % self.g)

    @property
    def delta(self):
        return self.omega0 - self.omega_c


@dataclass(frozen=True)
class DressedLevel:
    n: int
    branch: str
    energy: float
    cos_half: float = 1.0
    sin_half: float = 0.0

    @property
    def excited_amplitude(self):
        """ Amplitude on the bare state |e, n-1> """
        if self.branch == PLUS:
            return self.cos_half
        if self.branch == MINUS:
            return -self.sin_half
        return 0.0

    @property
    def ground_amplitude(self):
        """ Amplitude on the bare state |g, n> """
        if self.branch == PLUS:
            return self.sin_half
        if self.branch == MINUS:
            return self.cos_half
        return 1.0


@dataclass(frozen=True)
class LevelIndex:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise LevelError('Flat level index starts at 1, got %r' % self.k)

    @classmethod
    def from_label(cls, n, branch):
        _check_label(n, branch)
        if branch == GROUND:
            return cls(1)
        return cls(2 * n + (1 if branch == PLUS else 0))

    @property
    def label(self):
        if self.k == 1:
            return 0, GROUND
        return self.k // 2, PLUS if self.k % 2 else MINUS


def _check_label(n, branch):
    if branch not in BRANCHES:
        raise LevelError('Unknown branch %r' % (branch,))
    if n == 0 and branch != GROUND:
        raise LevelError('The vacuum subspace only has the ground level, got branch %r' % branch)
    if n < 0 or (n >= 1 and branch == GROUND):
        raise LevelError('Invalid level label (n=%r, branch=%r)' % (n, branch))


def rabi_frequency(params, n):
    if n < 1:
        raise LevelError('No Rabi doublet in subspace n=%r' % n)
    return math.sqrt(params.delta ** 2 + 4.0 * params.g ** 2 * n)


def mixing_angle(params, n):
    """
        theta_n in (0, pi) from tan(theta_n) = 2 g sqrt(n) / delta.
        Exactly pi/2 at resonance.
    """
    if n < 1:
        raise LevelError('No mixing angle in subspace n=%r' % n)
    if params.delta == 0:
        return math.pi / 2
    return math.atan2(2.0 * params.g * math.sqrt(n), params.delta)


def eigen_level(params, n, branch):
    _check_label(n, branch)
    if n == 0:
        return DressedLevel(0, GROUND, -params.omega0 / 2.0)
    half_theta = mixing_angle(params, n) / 2.0
    sign = 1.0 if branch == PLUS else -1.0
    energy = params.omega_c * (n - 0.5) + sign * rabi_frequency(params, n) / 2.0
    return DressedLevel(n, branch, energy, math.cos(half_theta), math.sin(half_theta))


def enumerate_levels(params, n_d):
    """ All 2 n_d + 1 levels of subspaces 0..n_d in flat order """
    if n_d < 1:
        raise LevelError('Truncation must be at least 1, got %r' % n_d)
    levels = [(LevelIndex(1), eigen_level(params, 0, GROUND))]
    for n in range(1, n_d + 1):
        levels.append((LevelIndex(2 * n), eigen_level(params, n, MINUS)))
        levels.append((LevelIndex(2 * n + 1), eigen_level(params, n, PLUS)))
    check_ordering([level.energy for _, level in levels], params)
    return levels


def check_ordering(energies, params):
    """
        Flat ordering follows the label rule; warn when it is not an
        energy ordering. Returns True when energies are nondecreasing.
    """
    steps = np.diff(np.asarray(energies, dtype=float))
    if np.any(steps < 0):
        first = int(np.argmax(steps < 0)) + 2
        LOG.warning('Level energies not monotone in flat index (first drop at E_%d) for %r', first, params)
        return False
    return True


def level_energies(params, n_d):
    """ Vectorized flat-ordered energies, length 2 n_d + 1 """
    n = np.arange(1, n_d + 1, dtype=float)
    rabi = np.sqrt(params.delta ** 2 + 4.0 * params.g ** 2 * n)
    energies = np.empty(2 * n_d + 1)
    energies[0] = -params.omega0 / 2.0
    energies[1::2] = params.omega_c * (n - 0.5) - rabi / 2.0
    energies[2::2] = params.omega_c * (n - 0.5) + rabi / 2.0
    return energies


def mixing_amplitudes(params, n_d):
    """ cos(theta_n/2), sin(theta_n/2) for n = 1..n_d """
    n = np.arange(1, n_d + 1, dtype=float)
    if params.delta == 0:
        theta = np.full_like(n, math.pi / 2)
    else:
        theta = np.arctan2(2.0 * params.g * np.sqrt(n), params.delta)
    return np.cos(theta / 2.0), np.sin(theta / 2.0)


def hamiltonian_block(params, n):
    """ Bare-basis block of H_JC in subspace n >= 1, basis (|e,n-1>, |g,n>) """
    if n < 1:
        raise LevelError('Subspace %r has no 2x2 block' % n)
    coupling = params.g * math.sqrt(n)
    return np.array([[params.omega_c * (n - 1) + params.omega0 / 2.0, coupling],
                     [coupling, params.omega_c * n - params.omega0 / 2.0]])


def bare_vector(level):
    """ (|e,n-1>, |g,n>) components of a dressed level with n >= 1 """
    return np.array([level.excited_amplitude, level.ground_amplitude])
