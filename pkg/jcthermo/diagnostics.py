"""
Thermalization diagnostics for dressed-basis population vectors.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .config import load_defaults
from .eigensystem import level_energies
from .exceptions import TemperatureError, TruncationError
from .logs import LOG
from .steadystate import PopulationVector

VALID = 0
INFINITE = 1
INVALID = 2


@dataclass(frozen=True, eq=False)
class EffectiveTemperatureGrid:
    values: np.ndarray
    mask: np.ndarray

    @property
    def finite(self):
        return self.mask == VALID

    def spread(self):
        finite = self.values[self.finite]
        if finite.size == 0:
            return 0.0
        return float(finite.max() - finite.min())

    def weighted_mean(self, p):
        """ Mean over unmasked pairs weighted by p_m p_n """
        weights = np.outer(p, p)[self.finite]
        if weights.size == 0 or weights.sum() == 0:
            return None
        return float(np.sum(weights * self.values[self.finite]) / weights.sum())

    def records(self):
        """ (m, n, T_eff, flag) over all m != n, flat indices from 1 """
        size = self.values.shape[0]
        for m in range(size):
            for n in range(size):
                if m != n:
                    yield m + 1, n + 1, float(self.values[m, n]), int(self.mask[m, n])


@dataclass(frozen=True, eq=False)
class GibbsState:
    T: float
    populations: np.ndarray
    Z: float
    log_Z: float
    n_d: int

    def as_population_vector(self):
        return PopulationVector(self.populations, self.n_d)


@dataclass(frozen=True)
class Verdict:
    thermalized: bool
    T_star: float
    spread: float
    tolerance: float

    def summary(self):
        return {'thermalized': self.thermalized, 'T_star_weighted_mean': self.T_star,
                'T_eff_spread': self.spread, 'tolerance': self.tolerance}


def effective_temperatures(p, levels):
    """
        T_eff(m, n) = (E_m - E_n) / ln(p_n / p_m). Pairs with a zero
        population are INVALID, pairs with |p_m - p_n| below the mask
        tolerance are INFINITE.
    """
    energies = np.array([level.energy for _, level in levels])
    probabilities = p.p if isinstance(p, PopulationVector) else np.asarray(p, dtype=float)
    return _temperature_grid(probabilities, energies)


def _temperature_grid(probabilities, energies):
    if probabilities.shape != energies.shape:
        raise TruncationError('Population vector has %d entries for %d levels' % (probabilities.size, energies.size))
    tolerance = load_defaults()['mask_tolerance']

    mask = np.full((energies.size, energies.size), VALID, dtype=int)
    positive = probabilities > 0
    mask[np.abs(probabilities[:, None] - probabilities[None, :]) < tolerance] = INFINITE
    mask[~(positive[:, None] & positive[None, :])] = INVALID
    np.fill_diagonal(mask, INVALID)

    with np.errstate(divide='ignore', invalid='ignore'):
        log_p = np.log(probabilities)
        values = (energies[:, None] - energies[None, :]) / (log_p[None, :] - log_p[:, None])
    values[mask == INFINITE] = np.inf
    values[mask == INVALID] = np.nan
    return EffectiveTemperatureGrid(values, mask)


def gibbs_state(params, T, n_d=None):
    if not T > 0:
        raise TemperatureError('Gibbs reference needs T > 0, got %r; use ground_state_vector for T = 0' % T)
    if n_d is None:
        n_d = load_defaults()['truncation']
    weights = -level_energies(params, n_d) / T
    log_Z = float(logsumexp(weights))
    try:
        Z = math.exp(log_Z)
    except OverflowError:
        Z = math.inf
    return GibbsState(T, np.exp(weights - log_Z), Z, log_Z, n_d)


def ground_state_vector(n_d):
    return PopulationVector.ground(n_d)


def _populations(state):
    if isinstance(state, GibbsState):
        return state.populations, state.n_d
    return state.p, state.n_d


def trace_distance_diag(p, q):
    """ 1/2 sum_k |p_k - q_k| for two states diagonal in the dressed basis """
    p_values, p_n_d = _populations(p)
    q_values, q_n_d = _populations(q)
    if p_n_d != q_n_d:
        raise TruncationError('Truncation mismatch: n_d=%d against n_d=%d' % (p_n_d, q_n_d))
    return 0.5 * float(np.sum(np.abs(p_values - q_values)))


def trace_distance_curve(p, params, temperatures):
    return np.array([trace_distance_diag(p, gibbs_state(params, T, p.n_d)) for T in temperatures])


def thermalization_verdict(p, params, tol=None):
    """
        Thermalized when the spread of all unmasked effective temperatures is
        below tol. A state with no unmasked pair is thermalized at T* = 0 only
        if it is the ground state.
    """
    if tol is None:
        tol = load_defaults()['verdict_tolerance']
    grid = _temperature_grid(p.p, level_energies(params, p.n_d))
    T_star = grid.weighted_mean(p.p)
    if T_star is None:
        grounded = p.p[0] > 1.0 - tol
        return Verdict(bool(grounded), 0.0 if grounded else None, 0.0, tol)
    spread = grid.spread()
    verdict = Verdict(spread < tol, T_star, spread, tol)
    LOG.debug('Verdict %s: T_eff spread %.3e, weighted mean %.9g', verdict.thermalized, spread, T_star)
    return verdict
