"""
Population-sector Pauli rate generator and its steady state.

Under the secular approximation the dressed-basis populations close on
themselves: dp/dt = R p with R[i][j] the flow rate j -> i and
R[j][j] = -sum_{i != j} R[i][j]. The steady state is the normalized kernel
vector of R.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .config import load_defaults
from .eigensystem import enumerate_levels
from .exceptions import ErgodicityError, SolverError, StabilityError
from .logs import LOG
from .transitions import channel_rates, check_degeneracy

NEGATIVE_TOLERANCE = 1e-14
RESIDUAL_WARNING = 1e-10


@dataclass(frozen=True, eq=False)
class RateGraph:
    levels: tuple
    generator: np.ndarray
    params: object = None
    bath: object = None

    @property
    def size(self):
        return self.generator.shape[0]

    @property
    def n_d(self):
        return (self.size - 1) // 2

    @property
    def max_rate(self):
        return float(np.max(np.abs(np.diag(self.generator)))) if self.size else 0.0

    def off_diagonal(self):
        flows = self.generator.copy()
        np.fill_diagonal(flows, 0.0)
        return flows


@dataclass(frozen=True, eq=False)
class PopulationVector:
    p: np.ndarray
    n_d: int

    def __post_init__(self):
        if self.p.shape != (2 * self.n_d + 1,):
            raise SolverError('Population vector of shape %s does not match truncation n_d=%d'
                              % (self.p.shape, self.n_d))

    @classmethod
    def ground(cls, n_d):
        p = np.zeros(2 * n_d + 1)
        p[0] = 1.0
        return cls(p, n_d)

    @classmethod
    def from_solution(cls, p, n_d):
        """ Clamp round-off negatives on output """
        p = np.asarray(p, dtype=float)
        worst = float(p.min())
        if worst < -NEGATIVE_TOLERANCE:
            LOG.warning('Steady state has a negative population %.3e beyond round-off', worst)
        return cls(np.clip(p, 0.0, None), n_d)

    def __len__(self):
        return self.p.shape[0]

    def population(self, k):
        """ p_k for flat level index k >= 1 """
        return float(self.p[k - 1])

    @property
    def total(self):
        return float(np.sum(self.p))


def _neighbour_pairs(levels):
    by_subspace = {}
    for index, level in levels:
        by_subspace.setdefault(level.n, []).append((index, level))
    for n in sorted(by_subspace):
        for lower in by_subspace[n]:
            for upper in by_subspace.get(n + 1, ()):
                yield lower, upper


def build_rate_graph(params, bath, n_d=None):
    """
        Assemble R from the channel rates of every neighbouring pair. Each
        dissipator contributes twice the 1/2 gamma |chi|^2 prefactor to the
        population flow.
    """
    if n_d is None:
        n_d = load_defaults()['truncation']
    levels = tuple(enumerate_levels(params, n_d))
    generator = np.zeros((len(levels), len(levels)))
    frequencies = []
    for (lower_index, lower), (upper_index, upper) in _neighbour_pairs(levels):
        rate_up, rate_down = channel_rates((lower, upper), params, bath)
        if rate_up == 0 and rate_down == 0:
            continue
        frequencies.append(upper.energy - lower.energy)
        i, j = lower_index.k - 1, upper_index.k - 1
        generator[i, j] += 2.0 * rate_down
        generator[j, i] += 2.0 * rate_up
    np.fill_diagonal(generator, -generator.sum(axis=0))
    check_degeneracy(frequencies)
    LOG.debug('Rate graph n_d=%d with %d coupled transitions, max rate %.3e',
              n_d, len(frequencies), float(np.max(np.abs(generator))) if generator.size else 0.0)
    return RateGraph(levels, generator, params, bath)


def check_ergodicity(graph):
    flows = graph.off_diagonal()
    if not np.any(flows > 0):
        raise ErgodicityError('Rate graph has no positive transition rate (all decay rates zero)')
    count, labels = connected_components(csr_matrix(flows > 0), directed=True, connection='weak')
    if count > 1:
        detached = [index.k for (index, _), label in zip(graph.levels, labels) if label != labels[0]]
        raise ErgodicityError('Rate graph has %d disconnected components; levels E_%s are not connected to E_1'
                              % (count, ', E_'.join(str(k) for k in detached)))


def steady_state(graph):
    """
        Solve R p = 0 with sum(p) = 1 by replacing one row of the scaled
        generator with the normalization row; one step of iterative
        refinement follows the LU solve.
    """
    check_ergodicity(graph)
    scaled = graph.generator / graph.max_rate
    size = graph.size
    rank = np.linalg.matrix_rank(scaled)
    if rank != size - 1:
        raise ErgodicityError('Generator kernel has dimension %d, steady state is not unique' % (size - rank))

    system = scaled.copy()
    system[0, :] = 1.0
    rhs = np.zeros(size)
    rhs[0] = 1.0
    lu = scipy.linalg.lu_factor(system)
    p = scipy.linalg.lu_solve(lu, rhs)
    p += scipy.linalg.lu_solve(lu, rhs - system @ p)

    residual = float(np.max(np.abs(scaled @ p)))
    if residual > RESIDUAL_WARNING:
        LOG.warning('Steady state residual %.3e exceeds %.0e (relative to max rate)', residual, RESIDUAL_WARNING)
    populations = PopulationVector.from_solution(p, graph.n_d)

    top = top_subspace_population(populations)
    if top > load_defaults()['adequacy_threshold']:
        LOG.warning('Top subspace n=%d holds population %.3e; consider a larger truncation', graph.n_d, top)
    return populations


def rk4_step_matrix(generator, dt):
    """ One classical RK4 step of the linear system dp/dt = R p """
    hr = dt * generator
    step = np.eye(generator.shape[0])
    term = np.eye(generator.shape[0])
    for order in range(1, 5):
        term = term @ hr / order
        step = step + term
    return step


def evolve_populations(graph, p0, t_final, dt=None):
    """
        RK4 integration of dp/dt = R p from p0 to t_final. The step count
        is applied through the RK4 step polynomial's matrix power.
    """
    limit = load_defaults()['stability_limit']
    if t_final < 0:
        raise SolverError('Cannot integrate backwards in time (t_final=%r)' % t_final)
    if t_final == 0 or graph.max_rate == 0:
        return PopulationVector(p0.p.copy(), p0.n_d)
    if p0.n_d != graph.n_d:
        raise SolverError('Initial populations use n_d=%d, rate graph n_d=%d' % (p0.n_d, graph.n_d))
    if dt is None:
        dt = 0.5 * limit / graph.max_rate
    if not dt > 0 or dt * graph.max_rate >= limit:
        raise StabilityError('Step dt=%r violates dt * max|R_jj| < %s (max rate %.3e)' % (dt, limit, graph.max_rate))

    steps = int(t_final // dt)
    remainder = t_final - steps * dt
    p = np.linalg.matrix_power(rk4_step_matrix(graph.generator, dt), steps) @ p0.p
    if remainder > 0:
        p = rk4_step_matrix(graph.generator, remainder) @ p
    LOG.debug('Evolved %d RK4 steps of %.3e (+%.3e), probability drift %.3e',
              steps, dt, remainder, abs(float(np.sum(p)) - p0.total))
    return PopulationVector(p, p0.n_d)


def relaxation_time(graph):
    """ Inverse spectral gap of the generator """
    decay = np.sort(np.abs(np.linalg.eigvals(graph.generator).real))
    if decay.shape[0] < 2 or decay[1] <= 0:
        raise ErgodicityError('Generator has no spectral gap')
    return 1.0 / float(decay[1])


def top_subspace_population(p, levels=None):
    """ Total population of the highest excitation subspace kept """
    if levels is None:
        return float(np.sum(p.p[-2:]))
    top = max(level.n for _, level in levels)
    return float(sum(p.population(index.k) for index, level in levels if level.n == top))
