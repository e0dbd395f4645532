"""
Bath-induced transitions between dressed levels.

Each bath channel l couples through an operator whose dressed-basis matrix
elements chi_l connect neighbouring excitation subspaces only. With flat decay
rates gamma_l the downward and upward rates of a transition at frequency w are

    down = sum_l 1/2 gamma_l |chi_l|^2 (nbar_l(w) + 1)
    up   = sum_l 1/2 gamma_l |chi_l|^2 nbar_l(w)

Individual baths (IHB) act through sigma_x at T_sigma and (a + a^dag) at T_a.
A common bath (CHB) adds a cross channel X with gamma_X = sqrt(gamma_sigma
gamma_a) and |chi_X|^2 = 2 |chi_sigma chi_a|, all at one temperature T.
"""
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import TemperatureError, TransitionError
from .logs import LOG

IHB = 'IHB'
CHB = 'CHB'
TOPOLOGIES = (IHB, CHB)

SIGMA = 'sigma'
FIELD = 'a'
CROSS = 'X'

DEGENERACY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BathConfig:
    topology: str = IHB
    gamma_sigma: float = 0.0
    gamma_a: float = 0.0
    T_sigma: float = None
    T_a: float = None
    T: float = None

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise TransitionError('Unknown bath topology %r' % (self.topology,))
        if not (self.gamma_sigma >= 0 and self.gamma_a >= 0):
            raise TransitionError('Decay rates must be nonnegative: gamma_sigma=%r gamma_a=%r'
                                  % (self.gamma_sigma, self.gamma_a))
        if self.topology == IHB:
            if self.T_sigma is None or self.T_a is None or self.T is not None:
                raise TemperatureError('IHB takes exactly the two temperatures T_sigma and T_a')
        elif self.T is None or self.T_sigma is not None or self.T_a is not None:
            raise TemperatureError('CHB takes exactly one temperature T')
        for temp in self.temperatures:
            if not temp >= 0:
                raise TemperatureError('Temperatures must be nonnegative, got %r' % temp)

    @classmethod
    def ihb(cls, gamma_sigma, gamma_a, T_sigma, T_a):
        return cls(IHB, gamma_sigma, gamma_a, T_sigma=T_sigma, T_a=T_a)

    @classmethod
    def chb(cls, gamma_sigma, gamma_a, T):
        return cls(CHB, gamma_sigma, gamma_a, T=T)

    @property
    def temperatures(self):
        if self.topology == IHB:
            return (self.T_sigma, self.T_a)
        return (self.T,)

    @property
    def gamma_x(self):
        return math.sqrt(self.gamma_sigma * self.gamma_a)

    def channels(self):
        if self.topology == CHB:
            return (SIGMA, FIELD, CROSS)
        return (SIGMA, FIELD)

    def channel_gamma(self, channel):
        if channel == SIGMA:
            return self.gamma_sigma
        if channel == FIELD:
            return self.gamma_a
        if channel == CROSS and self.topology == CHB:
            return self.gamma_x
        raise TransitionError('Channel %r not present in %s bath' % (channel, self.topology))

    def channel_temperature(self, channel):
        if self.topology == CHB:
            return self.T
        if channel == SIGMA:
            return self.T_sigma
        if channel == FIELD:
            return self.T_a
        raise TransitionError('Channel %r not present in %s bath' % (channel, self.topology))

    def to_dict(self):
        out = {'topology': self.topology, 'gamma_sigma': self.gamma_sigma, 'gamma_a': self.gamma_a}
        if self.topology == IHB:
            out['T_sigma'] = self.T_sigma
            out['T_a'] = self.T_a
        else:
            out['T'] = self.T
        return out


@dataclass(frozen=True)
class TransitionCoefficients:
    chi_sigma: float = 0.0
    chi_a: float = 0.0

    @property
    def chi_X(self):
        return math.sqrt(2.0 * abs(self.chi_sigma * self.chi_a))

    def squared(self, channel):
        if channel == SIGMA:
            return self.chi_sigma ** 2
        if channel == FIELD:
            return self.chi_a ** 2
        if channel == CROSS:
            return 2.0 * abs(self.chi_sigma * self.chi_a)
        raise TransitionError('Unknown channel %r' % (channel,))


def _ordered(first, second):
    """ (lower, upper) if the levels are neighbours, else None """
    if second.n == first.n + 1:
        return first, second
    if first.n == second.n + 1:
        return second, first
    return None


def chi_sigma(lower, upper):
    """ <upper| sigma_x |lower>, zero unless the subspaces are neighbours """
    pair = _ordered(lower, upper)
    if pair is None:
        return 0.0
    lower, upper = pair
    return upper.excited_amplitude * lower.ground_amplitude


def chi_a(lower, upper):
    """ <upper| (a + a^dag) |lower>, zero unless the subspaces are neighbours """
    pair = _ordered(lower, upper)
    if pair is None:
        return 0.0
    lower, upper = pair
    n = lower.n
    return (upper.excited_amplitude * lower.excited_amplitude * math.sqrt(n)
            + upper.ground_amplitude * lower.ground_amplitude * math.sqrt(n + 1))


def transition_coefficients(lower, upper):
    return TransitionCoefficients(chi_sigma(lower, upper), chi_a(lower, upper))


def nbar(omega, T):
    """ Bose-Einstein occupation, exactly 0 at T = 0 """
    if not omega > 0:
        raise TransitionError('Transition frequency must be positive, got %r' % omega)
    if not T >= 0:
        raise TemperatureError('Temperature must be nonnegative, got %r' % T)
    if T == 0:
        return 0.0
    x = omega / T
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def transition_frequency(lower, upper):
    omega = upper.energy - lower.energy
    if not omega > 0:
        raise TransitionError('Non-positive transition frequency %r between (%d, %s) and (%d, %s)'
                              % (omega, lower.n, lower.branch, upper.n, upper.branch))
    return omega


def channel_rates(pair, params, bath):
    """ (rate_up, rate_down) for a neighbouring (lower, upper) pair """
    lower, upper = pair
    if upper.n != lower.n + 1:
        raise TransitionError('Levels (%d, %s) and (%d, %s) are not neighbouring subspaces'
                              % (lower.n, lower.branch, upper.n, upper.branch))
    coeffs = transition_coefficients(lower, upper)
    weights = [(channel, 0.5 * bath.channel_gamma(channel) * coeffs.squared(channel))
               for channel in bath.channels()]
    weights = [(channel, weight) for channel, weight in weights if weight > 0]
    if not weights:
        return 0.0, 0.0
    try:
        omega = transition_frequency(lower, upper)
    except TransitionError as exc:
        raise TransitionError('%s for %r' % (exc, params))
    rate_up = rate_down = 0.0
    for channel, weight in weights:
        occupation = nbar(omega, bath.channel_temperature(channel))
        rate_up += weight * occupation
        rate_down += weight * (occupation + 1.0)
    return rate_up, rate_down


def check_degeneracy(frequencies, tolerance=DEGENERACY_TOLERANCE):
    """ Warn when distinct transitions share a frequency; returns the number of coincident pairs """
    omegas = np.sort(np.asarray(frequencies, dtype=float))
    coincident = int(np.count_nonzero(np.diff(omegas) < tolerance))
    if coincident:
        LOG.warning('%d near-degenerate transition frequencies; secular approximation may not hold', coincident)
    return coincident
