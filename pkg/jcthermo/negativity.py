"""
Logarithmic negativity of the JC thermal state.

In the bare basis the thermal state is block diagonal,

    rho = A_0 |g,0><g,0| + sum_n [ A_n |g,n><g,n| + C_n |e,n-1><e,n-1|
                                   + B_n (|g,n><e,n-1| + |e,n-1><g,n|) ]

and its partial transpose on the TLS splits into the one-dimensional block C_1
and 2x2 blocks [[A_n, B_{n+1}], [B_{n+1}, C_{n+2}]], n >= 0. The trace norm is
C_1 plus the sum over blocks of the absolute eigenvalues. At resonance the
sign of A_n C_{n+2} - B_{n+1}^2 is the sign of

    F_n(g_r) = cosh(sqrt(n) g_r) cosh(sqrt(n+2) g_r) - sinh^2(sqrt(n+1) g_r)

with g_r = g / T, and n_0 is the last block with F_n >= 0.
"""
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize
from scipy.special import logsumexp

from .config import load_defaults
from .eigensystem import JCParams, level_energies, mixing_amplitudes
from .exceptions import BlockIndexError, SolverError, TemperatureError, TruncationError
from .logs import LOG

ANALYTIC = 'analytic_blocks'
NUMERIC = 'numeric_oracle'

MIN_TRUNCATION = 2
GENEROUS_LIMIT = 10 ** 7
GENEROUS_LOG_CUTOFF = math.log(1e-40)


@dataclass(frozen=True, eq=False)
class ThermalBlockCoefficients:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    n_max: int
    populations: np.ndarray

    def trace(self):
        return float(self.A[0] + np.sum(self.A[1:] + self.C[1:]))

    def discriminant(self, n=None):
        """ A_n C_{n+2} - B_{n+1}^2 for one block, or for all blocks 0..n_max """
        if n is None:
            last = self.n_max + 1
            return self.A[:last] * self.C[2:last + 2] - self.B[1:last + 1] ** 2
        _check_block(self, n)
        return float(self.A[n] * self.C[n + 2] - self.B[n + 1] ** 2)


@dataclass(frozen=True)
class NegativityResult:
    trace_norm: float
    log_negativity: float
    n0: int
    n_max: int
    method: str


def negativity_params(s, g_r, omega0=1.0):
    """ (JCParams at resonance, T) for s = omega0 / g and g_r = g / T """
    if not (s > 0 and g_r > 0):
        raise TemperatureError('s and g_r must be positive, got s=%r g_r=%r' % (s, g_r))
    g = omega0 / s
    return JCParams(omega0, omega0, g), g / g_r


def _check_temperature(T):
    if not T > 0:
        raise TemperatureError('Thermal state needs T > 0, got %r' % T)


def _log_weights(params, T, n_d):
    return -level_energies(params, n_d) / T


def _generous_log_weights(params, T):
    """
        Log Boltzmann weights over enough subspaces that every omitted
        probability is below 1e-40, and their log partition function.
    """
    n_d = 16
    while True:
        log_w = _log_weights(params, T, n_d)
        log_Z = logsumexp(log_w)
        if np.max(log_w[-2:]) - log_Z < GENEROUS_LOG_CUTOFF:
            return log_w, float(log_Z)
        if n_d > GENEROUS_LIMIT:
            raise TruncationError('Thermal distribution at T=%r not captured below n=%d' % (T, n_d))
        n_d *= 2


def truncation_index(params, T, threshold=None):
    """
        Largest excitation number whose upper dressed level still has thermal
        probability >= threshold, floored at 2.
    """
    _check_temperature(T)
    if threshold is None:
        threshold = load_defaults()['negativity_threshold']
    log_w, log_Z = _generous_log_weights(params, T)
    upper = log_w[2::2] - log_Z
    kept = np.nonzero(upper >= math.log(threshold))[0]
    n_max = int(kept[-1]) + 1 if kept.size else 0
    return max(n_max, MIN_TRUNCATION)


def thermal_populations(params, T, n_max):
    """ Thermal probabilities over subspaces 0..n_max, normalized on that range """
    _check_temperature(T)
    log_w = _log_weights(params, T, n_max)
    return np.exp(log_w - logsumexp(log_w))


def eigenstate_populations(params, T, n_d):
    """ Untruncated thermal probabilities of E_1..E_{2 n_d + 1} """
    _check_temperature(T)
    log_w, log_Z = _generous_log_weights(params, T)
    p = np.zeros(2 * n_d + 1)
    head = np.exp(log_w[:p.size] - log_Z)
    p[:head.size] = head
    return p


def thermal_block_coefficients(params, T, n_max=None):
    if n_max is None:
        n_max = truncation_index(params, T)
    if n_max < MIN_TRUNCATION:
        raise TruncationError('Block decomposition needs n_max >= %d, got %r' % (MIN_TRUNCATION, n_max))
    p = thermal_populations(params, T, n_max)
    cos_half, sin_half = mixing_amplitudes(params, n_max)
    p_minus, p_plus = p[1::2], p[2::2]

    A = np.zeros(n_max + 3)
    B = np.zeros(n_max + 3)
    C = np.zeros(n_max + 3)
    A[0] = p[0]
    A[1:n_max + 1] = sin_half ** 2 * p_plus + cos_half ** 2 * p_minus
    C[1:n_max + 1] = cos_half ** 2 * p_plus + sin_half ** 2 * p_minus
    B[1:n_max + 1] = sin_half * cos_half * (p_plus - p_minus)
    return ThermalBlockCoefficients(A, B, C, n_max, p)


def _check_block(coeffs, n):
    if not 0 <= n <= coeffs.n_max:
        raise BlockIndexError('Block index %r outside 0..%d' % (n, coeffs.n_max))


def block_matrix(coeffs, n):
    """ rho^T rho^T restricted to block n, whose eigenvalues are the squared block eigenvalues """
    _check_block(coeffs, n)
    a, b, c = coeffs.A[n], coeffs.B[n + 1], coeffs.C[n + 2]
    return np.array([[a * a + b * b, b * (a + c)],
                     [b * (a + c), b * b + c * c]])


def block_eigenvalues(coeffs, n):
    return np.clip(np.linalg.eigvalsh(block_matrix(coeffs, n)), 0.0, None)


def sqrt_eig_sum(coeffs, n):
    _check_block(coeffs, n)
    a, b, c = coeffs.A[n], coeffs.B[n + 1], coeffs.C[n + 2]
    if a * c - b * b >= 0:
        return float(a + c)
    return math.sqrt((a - c) ** 2 + 4.0 * b * b)


def _sqrt_eig_sums(coeffs):
    last = coeffs.n_max + 1
    a, b, c = coeffs.A[:last], coeffs.B[1:last + 1], coeffs.C[2:last + 2]
    return np.where(a * c - b * b >= 0, a + c, np.sqrt((a - c) ** 2 + 4.0 * b * b))


def f_condition(n, g_r):
    """
        F_n(g_r), evaluated as sinh(S) sinh(D) + (1 + cosh(a - b)) / 2 with
        a = sqrt(n) g_r, b = sqrt(n+2) g_r, 2S = a + b + 2 sqrt(n+1) g_r and
        the small negative 2D = a + b - 2 sqrt(n+1) g_r in cancellation-free form.
        Accepts scalar or array n.
    """
    n = np.asarray(n, dtype=float)
    root_n, root_n1, root_n2 = np.sqrt(n), np.sqrt(n + 1), np.sqrt(n + 2)
    total = g_r * (root_n + root_n2 + 2.0 * root_n1) / 2.0
    gap = -g_r / ((root_n + root_n2) * (root_n2 + root_n1) * (root_n + root_n1))
    spread = -2.0 * g_r / (root_n + root_n2)
    with np.errstate(over='ignore', invalid='ignore'):
        value = np.sinh(total) * np.sinh(gap) + 0.5 * (1.0 + np.cosh(spread))
    value = np.where(np.isnan(value), -np.inf, value)
    return float(value) if value.ndim == 0 else value


def critical_coupling(n=0, xtol=1e-12):
    """ Root of F_n in g_r (about 1.42 for n = 0) """
    low, high = 0.5, 1.0
    while f_condition(n, low) < 0:
        low /= 2.0
    while f_condition(n, high) >= 0:
        low, high = high, high * 2.0
    root = scipy.optimize.bisect(lambda g_r: f_condition(n, g_r), low, high, xtol=xtol)
    LOG.debug('F_%d root at g_r=%.12g', n, root)
    return root


def crossover_index(g_r):
    """
        n_0 with F_{n_0} >= 0 and F_{n_0+1} < 0, or None when F_0 < 0 already.
        F_n decreases in n: a doubling bracket, then integer bisection.
    """
    if not g_r > 0:
        raise TemperatureError('g_r must be positive, got %r' % g_r)
    if f_condition(0, g_r) < 0:
        return None
    low, high = 0, 1
    while f_condition(high, g_r) >= 0:
        low, high = high, 2 * high
    # F_low >= 0 > F_high
    while high - low > 1:
        middle = (low + high) // 2
        if f_condition(middle, g_r) >= 0:
            low = middle
        else:
            high = middle
    return low


def discriminant_crossover(coeffs):
    """
        n_0 from the block discriminants over fully populated blocks
        (n <= n_max - 2). A discriminant that never turns negative gives the
        last such block.
    """
    signs = coeffs.discriminant()[:coeffs.n_max - 1]
    negative = np.flatnonzero(signs < 0)
    if not negative.size:
        return coeffs.n_max - 2
    return int(negative[0]) - 1 if negative[0] > 0 else None


def _result(trace_norm, n0, n_max, method):
    if trace_norm < 1.0 - 1e-12:
        raise SolverError('Trace norm %.16g below one' % trace_norm)
    return NegativityResult(trace_norm, max(math.log2(trace_norm), 0.0), n0, n_max, method)


def log_negativity_analytic(params, T, n_max=None):
    coeffs = thermal_block_coefficients(params, T, n_max)
    trace_norm = float(coeffs.C[1] + np.sum(_sqrt_eig_sums(coeffs)))
    if params.delta == 0 and params.g > 0:
        n0 = crossover_index(params.g / T)
    else:
        n0 = discriminant_crossover(coeffs)
    return _result(trace_norm, n0, coeffs.n_max, ANALYTIC)


def jc_hamiltonian(params, field_dim):
    """ Dense H_JC on the bare basis index q * field_dim + m, q = 0 for |g>, 1 for |e> """
    ladder = np.diag(np.sqrt(np.arange(1.0, field_dim)), k=1)
    raise_tls = np.array([[0.0, 0.0], [1.0, 0.0]])
    exchange = np.kron(raise_tls, ladder)
    return (params.omega_c * np.kron(np.eye(2), ladder.T @ ladder)
            + 0.5 * params.omega0 * np.kron(np.diag([-1.0, 1.0]), np.eye(field_dim))
            + params.g * (exchange + exchange.T))


def partial_transpose_tls(rho, field_dim):
    return rho.reshape(2, field_dim, 2, field_dim).transpose(2, 1, 0, 3).reshape(2 * field_dim, 2 * field_dim)


def _leak(log_w, log_Z, field_dim):
    """ Thermal probability outside subspaces 0..field_dim - 1 """
    kept = 2 * field_dim - 1
    if log_w.size <= kept:
        return 0.0
    return float(np.exp(logsumexp(log_w[kept:]) - log_Z))


def oracle_dimension(params, T):
    """ Smallest even bare dimension >= 2 n_max + 2 leaking at most the numeric threshold """
    log_w, log_Z = _generous_log_weights(params, T)
    threshold = load_defaults()['numeric_leak_threshold']
    field_dim = truncation_index(params, T) + 1
    while _leak(log_w, log_Z, field_dim) > threshold:
        field_dim += 1
    return 2 * field_dim


def log_negativity_numeric(params, T, dim=None):
    """
        Dense oracle: diagonalize H_JC on subspaces 0..dim/2 - 1, build the
        normalized thermal state, transpose the TLS factor and sum absolute
        eigenvalues.
    """
    _check_temperature(T)
    if dim is None:
        dim = oracle_dimension(params, T)
    if dim < 4 or dim % 2:
        raise TruncationError('Bare basis dimension must be even and >= 4, got %r' % dim)
    field_dim = dim // 2
    kept = 2 * field_dim - 1

    log_w, log_Z = _generous_log_weights(params, T)
    leak = _leak(log_w, log_Z, field_dim)
    if leak > load_defaults()['numeric_leak_threshold']:
        raise TruncationError('Dimension %d too small at T=%r: %.3e thermal probability beyond the basis'
                              % (dim, T, leak))

    # |e, field_dim - 1> has no partner |g, field_dim> in this basis
    hamiltonian = jc_hamiltonian(params, field_dim)[:kept, :kept]
    energies, vectors = scipy.linalg.eigh(hamiltonian)
    weights = np.exp(-(energies - energies[0]) / T)
    weights /= weights.sum()
    rho = np.zeros((dim, dim))
    rho[:kept, :kept] = (vectors * weights) @ vectors.T

    eigenvalues = np.linalg.eigvalsh(partial_transpose_tls(rho, field_dim))
    trace_norm = float(np.sum(np.abs(eigenvalues)))
    LOG.debug('Numeric negativity dim=%d: most negative eigenvalue %.3e', dim, float(eigenvalues.min()))
    return _result(trace_norm, None, field_dim - 1, NUMERIC)


def _padded(p, extra=6):
    return np.concatenate([np.asarray(p, dtype=float), np.zeros(extra)])


def _resonant_sqrt_tail(q, first, last):
    """ sum_{n=first}^{last} 1/2 sqrt((p_2n + p_2n+1 - p_2n+4 - p_2n+5)^2 + 4 (p_2n+3 - p_2n+2)^2) """
    n = np.arange(first, last + 1)
    pairs = q[2 * n - 1] + q[2 * n] - q[2 * n + 3] - q[2 * n + 4]
    flips = q[2 * n + 2] - q[2 * n + 1]
    return 0.5 * float(np.sum(np.sqrt(pairs ** 2 + 4.0 * flips ** 2)))


def trace_norm_strong_coupling(p):
    """ Resonant trace norm when every block discriminant is negative; p[0] is p_1 """
    q = _padded(p)
    last = (len(p) - 1) // 2
    head = 0.5 * (q[1] + q[2]) + math.sqrt((q[0] - 0.5 * (q[3] + q[4])) ** 2 + (q[2] - q[1]) ** 2)
    return head + _resonant_sqrt_tail(q, 1, last)


def trace_norm_crossover(p, n0):
    """ Resonant trace norm when blocks 0..n0 have nonnegative discriminant and the rest negative """
    q = _padded(p)
    last = (len(p) - 1) // 2
    head = float(np.sum(q[:2 * n0 + 1])) + 0.5 * float(np.sum(q[2 * n0 + 1:2 * n0 + 5]))
    return head + _resonant_sqrt_tail(q, n0 + 1, last)


def trace_norm_truncated(p, n_max):
    """ Resonant trace norm of the state truncated at n_max when n_0 >= n_max - 2 """
    q = _padded(p)
    edge = q[2 * n_max - 3] + q[2 * n_max - 2]
    flip = q[2 * n_max] - q[2 * n_max - 1]
    return 0.5 * (2.0 * float(np.sum(q[:2 * n_max + 1])) - edge + math.sqrt(edge ** 2 + 4.0 * flip ** 2))
