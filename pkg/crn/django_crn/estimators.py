# This file is part of django-crn.
#
# django-crn is free software: you can redistribute it and/or modify it under the terms of the GNU
# General Public License as published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# django-crn is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without
# even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with django-crn.  If not,
# see <http://www.gnu.org/licenses/>.

"""Monte Carlo estimators: coupled distance means, Wasserstein oracles, the common monotonicity region
of two update maps and the contraction estimate."""

import csv
import io
import json
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Optional

import numpy as np
from joblib import Parallel
from joblib import delayed

from . import crn_settings
from .constants import Coupling
from .constants import MonotonicityCase
from .errors import DomainError
from .errors import UsageError
from .ifs import couple_replicates
from .ifs import simulate_replicates
from .rng import MU_LANE
from .rng import NU_LANE
from .rng import THETA_LANE
from .rng import UniformStream
from .rng import transform

log = logging.getLogger(__name__)


def _mean_se(values, axis=0):
    """Sample mean and its standard error ``stdev / sqrt(I)`` (zero for a single value)."""
    values = np.asarray(values, dtype=float)
    count = values.shape[axis]
    mean = values.mean(axis=axis)
    if count < 2:
        return mean, np.zeros_like(mean)
    return mean, values.std(axis=axis, ddof=1) / np.sqrt(count)


@dataclass
class EstimateReport:
    """Per-iteration mean of ``|x_n - y_n|^p`` over replicates, with standard errors."""

    means: np.ndarray
    se: np.ndarray
    replicates: int
    horizon: int
    p: float
    coupling: Coupling
    seed: int
    chain: str = ''
    distances: Optional[np.ndarray] = field(default=None, repr=False)

    def rows(self):
        for n, (mean, se) in enumerate(zip(self.means, self.se)):
            yield n, mean, se

    def to_dict(self):
        return {
            'chain': self.chain,
            'coupling': self.coupling.value,
            'seed': self.seed,
            'p': self.p,
            'replicates': self.replicates,
            'horizon': self.horizon,
            'iterations': [{'n': n, 'mean': float(mean), 'se': float(se)} for n, mean, se in self.rows()],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    def to_csv(self, stream=None, float_format='%.17g'):
        value = stream is None
        if value:
            stream = io.StringIO()

        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['iteration', 'mean', 'se'])
        for n, mean, se in self.rows():
            writer.writerow([n, float_format % mean, float_format % se])

        if value:
            return stream.getvalue()


def _coupled_distances(chain, init_mu, init_nu, horizon, ids, mode, seed, shared_init_stream):
    x0 = np.stack([np.atleast_1d(init_mu(UniformStream(seed, r, MU_LANE))) for r in ids])
    nu_lane = MU_LANE if shared_init_stream else NU_LANE
    y0 = np.stack([np.atleast_1d(init_nu(UniformStream(seed, r, nu_lane))) for r in ids])
    chain.check_domain(x0)
    chain.check_domain(y0)

    x, y = couple_replicates(chain, x0, y0, seed, ids, horizon, mode=mode)
    log.debug('%s: Simulated replicates %s to %s.', chain.name, ids[0], ids[-1])
    return np.linalg.norm(x - y, axis=-1)


def algorithm1(chain, init_mu, init_nu, n, replicates, p=1, mode=Coupling.crn, seed=None, workers=None,
               keep_distances=False, shared_init_stream=False):
    """Estimate ``E|X_n - Y_n|^p`` for every ``n <= N`` from coupled replicates.

    ``x_{0,i}`` is drawn by ``init_mu`` and ``y_{0,i}`` by ``init_nu``, each from its own substream of
    replicate ``i`` so the two initial states are independent of each other and of the θ draws. With
    ``shared_init_stream=True`` both samplers read the same substream instead.

    Parameters
    ----------

    chain : :py:class:`~django_crn.ifs.ChainModel`
    init_mu, init_nu : callable
        Initial-state samplers taking a :py:class:`~django_crn.rng.UniformStream`, see
        :py:func:`~django_crn.ifs.point_mass` and :py:func:`~django_crn.ifs.from_distribution`.
    n : int
        Horizon ``N``.
    replicates : int
        Number of replicates ``I``.
    p : float, optional
        Power, at least 1.
    mode : :py:class:`~django_crn.constants.Coupling`, optional
    seed : int, optional
        Defaults to the ``CRN_DEFAULT_SEED`` setting.
    workers : int, optional
        Number of threads. Results do not depend on this value.
    keep_distances : bool, optional
        Keep the ``(I, N + 1)`` matrix of distances in the report.
    """
    if n < 1:
        raise UsageError('n: %s: Must be at least 1' % n)
    if replicates < 1:
        raise UsageError('replicates: %s: Must be at least 1' % replicates)
    if p < 1:
        raise UsageError('p: %s: Must be at least 1' % p)
    if seed is None:
        seed = crn_settings.CRN_DEFAULT_SEED
    if workers is None:
        workers = crn_settings.CRN_DEFAULT_WORKERS
    mode = Coupling(mode)

    chunks = [c.tolist() for c in np.array_split(np.arange(replicates), min(workers, replicates))]
    log.info('%s: Running %s replicates for %s iterations (coupling=%s, seed=%s, workers=%s).',
             chain.name, replicates, n, mode.value, seed, workers)
    parts = Parallel(n_jobs=workers, prefer='threads')(
        delayed(_coupled_distances)(chain, init_mu, init_nu, n, ids, mode, seed, shared_init_stream)
        for ids in chunks
    )
    distances = np.concatenate(parts, axis=0)

    means, se = _mean_se(distances ** p)
    return EstimateReport(means=means, se=se, replicates=replicates, horizon=n, p=p, coupling=mode,
                          seed=seed, chain=chain.name, distances=distances if keep_distances else None)


def _check_samples(samples_a, samples_b):
    a = np.asarray(samples_a, dtype=float).ravel()
    b = np.asarray(samples_b, dtype=float).ravel()
    if len(a) != len(b):
        raise UsageError('Sample sizes differ: %s vs. %s' % (len(a), len(b)))
    if len(a) == 0:
        raise UsageError('Need at least one sample.')
    return a, b


def _wasserstein_pp(a, b, p):
    return float(np.mean(np.abs(np.sort(a) - np.sort(b)) ** p))


def empirical_wasserstein(samples_a, samples_b, p=1):
    """``W_p`` between two empirical laws of equal size, realised by pairing the order statistics."""
    if p < 1:
        raise UsageError('p: %s: Must be at least 1' % p)
    a, b = _check_samples(samples_a, samples_b)
    return _wasserstein_pp(a, b, p) ** (1 / p)


@dataclass(frozen=True)
class OracleEstimate:
    value: float  # W_p^p
    se: float
    distance: float  # W_p
    distance_se: float
    p: float
    batches: int

    def to_dict(self):
        return {'value': self.value, 'se': self.se, 'distance': self.distance,
                'distance_se': self.distance_se, 'p': self.p, 'batches': self.batches}


def oracle_wasserstein(samples_a, samples_b, p=1, batches=None):
    """Quantile-coupling estimate of ``W_p^p`` between the laws of two independent samples.

    The point value uses all samples. Its standard error comes from the spread of the estimates over
    ``batches`` contiguous batches, and the standard error of ``W_p`` itself from the delta method.
    """
    if batches is None:
        batches = crn_settings.CRN_ORACLE_BATCHES
    if p < 1:
        raise UsageError('p: %s: Must be at least 1' % p)
    a, b = _check_samples(samples_a, samples_b)
    if batches < 2 or len(a) < 2 * batches:
        raise UsageError('Need at least two samples in each of at least two batches.')

    value = _wasserstein_pp(a, b, p)
    batch_values = [_wasserstein_pp(x, y, p) for x, y in zip(np.array_split(a, batches),
                                                              np.array_split(b, batches))]
    se = float(np.std(batch_values, ddof=1) / np.sqrt(batches))

    distance = value ** (1 / p)
    if value > 0:
        distance_se = se * value ** (1 / p - 1) / p
    else:
        distance_se = 0.0
    return OracleEstimate(value=value, se=se, distance=distance, distance_se=distance_se, p=p,
                          batches=batches)


def marginal_samples(chain, x0, n, replicates=None, seed=None, lane=THETA_LANE):
    """Independent draws of ``X_n`` started at ``x0``, one per replicate.

    ``replicates`` defaults to ``CRN_ORACLE_SAMPLES``. The result has shape ``(I, )`` for scalar chains and
    ``(I, state_dim)`` otherwise.
    """
    if replicates is None:
        replicates = crn_settings.CRN_ORACLE_SAMPLES
    if seed is None:
        seed = crn_settings.CRN_DEFAULT_SEED
    states = simulate_replicates(chain, x0, seed, range(replicates), n, lane=lane)[:, n]
    if chain.state_dim == 1:
        return states[:, 0]
    return states


@dataclass(frozen=True)
class MonotonicityPartition:
    """Maximal intervals on which ``θ -> f(θ, z)`` is non-decreasing (``increasing``) or not."""

    z: float
    domain: tuple
    grid_points: int
    increasing: tuple
    decreasing: tuple

    def to_dict(self):
        return {'z': self.z, 'domain': list(self.domain), 'grid_points': self.grid_points,
                'increasing': [list(i) for i in self.increasing],
                'decreasing': [list(i) for i in self.decreasing]}


def classify_monotonicity(f, z, domain, m=None):
    """Partition ``domain`` by the direction in which ``f(θ, z)`` moves over each of ``m`` grid cells.

    Cells where ``f`` does not change are counted as non-decreasing.
    """
    if m is None:
        m = crn_settings.CRN_GRID_POINTS
    if m < 2:
        raise UsageError('m: %s: Must be at least 2' % m)
    low, high = (float(d) for d in domain)
    if not (np.isfinite(low) and np.isfinite(high) and low < high):
        raise DomainError('%s: Domain must be a finite, non-empty interval' % (domain, ))

    edges = np.linspace(low, high, m + 1)
    values = np.asarray(f(edges, z), dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError('f(θ, %s) is not finite on %s' % (z, domain))
    rising = np.diff(values) >= 0

    increasing, decreasing = [], []
    start = 0
    for i in range(1, m + 1):
        if i == m or rising[i] != rising[start]:
            interval = (float(edges[start]), float(edges[i]))
            (increasing if rising[start] else decreasing).append(interval)
            start = i
    return MonotonicityPartition(z=z, domain=(low, high), grid_points=m, increasing=tuple(increasing),
                                 decreasing=tuple(decreasing))


def _intersect(first, second):
    i = j = 0
    result = []
    while i < len(first) and j < len(second):
        low = max(first[i][0], second[j][0])
        high = min(first[i][1], second[j][1])
        if low < high:
            result.append((low, high))
        if first[i][1] < second[j][1]:
            i += 1
        else:
            j += 1
    return result


def _merge(intervals):
    merged = []
    for low, high in sorted(intervals):
        if merged and low <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], high))
        else:
            merged.append((low, high))
    return merged


@dataclass(frozen=True)
class CommonRegion:
    """The set ``A`` where two maps move in the same direction, and its probability under the θ law."""

    intervals: tuple
    prob_a: float
    domain: tuple
    domain_mass: float = 1.0
    tolerance: float = 1e-9

    @property
    def case(self):
        if self.prob_a >= self.domain_mass - self.tolerance:
            return MonotonicityCase.common
        elif self.prob_a <= self.tolerance:
            return MonotonicityCase.opposite
        return MonotonicityCase.mixed

    def contains(self, theta):
        theta = np.asarray(theta, dtype=float)
        if not self.intervals:
            return np.zeros(theta.shape, dtype=bool)
        starts = np.array([i[0] for i in self.intervals])
        ends = np.array([i[1] for i in self.intervals])
        index = np.searchsorted(starts, theta, side='right') - 1
        safe = np.maximum(index, 0)
        return (index >= 0) & (theta <= ends[safe])

    def to_dict(self):
        return {'intervals': [list(i) for i in self.intervals], 'prob_a': self.prob_a,
                'domain': list(self.domain), 'case': self.case.value}


def common_region(part_x, part_y, theta_law, tolerance=None):
    """``A = (I_x ∩ I_y) ∪ (D_x ∩ D_y)`` and ``P(θ ∈ A)``."""
    if tolerance is None:
        tolerance = crn_settings.CRN_CASE_TOLERANCE
    if part_x.domain != part_y.domain:
        raise UsageError('Partitions cover different domains: %s vs. %s' % (part_x.domain, part_y.domain))

    intervals = _merge(_intersect(part_x.increasing, part_y.increasing)
                       + _intersect(part_x.decreasing, part_y.decreasing))
    prob_a = float(sum(theta_law.cdf(high) - theta_law.cdf(low) for low, high in intervals))
    low, high = part_x.domain
    mass = float(theta_law.cdf(high) - theta_law.cdf(low))
    return CommonRegion(intervals=tuple(intervals), prob_a=min(max(prob_a, 0.0), 1.0), domain=part_x.domain,
                        domain_mass=mass, tolerance=tolerance)


@dataclass
class OneStepEstimate:
    """One-step estimates of ``W_2²`` between the laws of ``f(θ, x)`` and ``f(θ, y)``."""

    crn_estimate: float
    crn_se: float
    antithetic_estimate: float
    antithetic_se: float
    error_estimate: float
    error_se: float
    region: CommonRegion
    lower_bound: float
    upper_bound: float

    @property
    def case(self):
        return self.region.case

    @property
    def prob_a(self):
        return self.region.prob_a

    @property
    def negative_error(self):
        return self.case == MonotonicityCase.mixed and self.error_estimate < 0

    @property
    def estimate(self):
        """Point estimate of ``W_2²``, or ``None`` in the mixed case where only a bracket is known."""
        if self.case == MonotonicityCase.common:
            return self.crn_estimate
        elif self.case == MonotonicityCase.opposite:
            return self.antithetic_estimate

    def to_dict(self):
        return {
            'case': self.case.value,
            'prob_a': self.prob_a,
            'crn_estimate': self.crn_estimate,
            'crn_se': self.crn_se,
            'antithetic_estimate': self.antithetic_estimate,
            'antithetic_se': self.antithetic_se,
            'error_estimate': self.error_estimate,
            'error_se': self.error_se,
            'negative_error': self.negative_error,
            'lower_bound': self.lower_bound,
            'upper_bound': self.upper_bound,
            'region': self.region.to_dict(),
        }


def one_step_w2(f, x, y, theta_law, replicates, stream=None, seed=None, grid_points=None, epsilon=None,
                tolerance=None):
    """Estimate ``W_2²`` of ``f(θ, x)`` and ``f(θ, y)`` with CRN (``θ_U`` for both) and antithetic
    (``θ_{1-U}`` for ``x``) draws, and bracket it according to the common monotonicity region."""
    if replicates < 1:
        raise UsageError('replicates: %s: Must be at least 1' % replicates)
    if stream is None:
        stream = UniformStream(crn_settings.CRN_DEFAULT_SEED if seed is None else seed, 0, THETA_LANE)
    if epsilon is None:
        epsilon = crn_settings.CRN_QUANTILE_EPSILON

    u = stream.uniforms(replicates)
    theta = theta_law.inv_cdf(u)
    theta_anti = theta_law.inv_cdf(1 - u)

    fx = np.asarray(f(theta, x), dtype=float)
    fy = np.asarray(f(theta, y), dtype=float)
    fx_anti = np.asarray(f(theta_anti, x), dtype=float)

    crn, crn_se = _mean_se((fx - fy) ** 2)
    anti, anti_se = _mean_se((fx_anti - fy) ** 2)

    domain = theta_law.quantile_range(epsilon)
    region = common_region(classify_monotonicity(f, x, domain, grid_points),
                           classify_monotonicity(f, y, domain, grid_points), theta_law, tolerance=tolerance)
    outside = ~region.contains(theta)
    error, error_se = _mean_se(2 * (fx_anti - fx) * fy * outside)

    case = region.case
    if case == MonotonicityCase.common:
        lower = upper = crn
    elif case == MonotonicityCase.opposite:
        lower = upper = anti
    else:
        lower, upper = crn - error, crn
        if error < 0:
            log.warning('Negative error term %s for x=%s, y=%s: Bracket is empty.', error, x, y)

    return OneStepEstimate(
        crn_estimate=float(crn), crn_se=float(crn_se), antithetic_estimate=float(anti),
        antithetic_se=float(anti_se), error_estimate=float(error), error_se=float(error_se), region=region,
        lower_bound=float(lower), upper_bound=float(upper),
    )


def one_step_oracle(f, x, y, theta_law, replicates=None, seed=None, batches=None):
    """Oracle ``W_2²`` of the laws of ``f(θ, x)`` and ``f(θ', y)`` from independent θ samples.

    ``replicates`` samples are drawn for each law, by default ``CRN_ORACLE_SAMPLES``.
    """
    if replicates is None:
        replicates = crn_settings.CRN_ORACLE_SAMPLES
    if seed is None:
        seed = crn_settings.CRN_DEFAULT_SEED
    theta_x = theta_law.inv_cdf(UniformStream(seed, 0, MU_LANE).uniforms(replicates))
    theta_y = theta_law.inv_cdf(UniformStream(seed, 0, NU_LANE).uniforms(replicates))
    return oracle_wasserstein(f(theta_x, x), f(theta_y, y), p=2, batches=batches)


@dataclass(frozen=True)
class ContractionEstimate:
    value: float
    se: float
    ratios: np.ndarray = field(repr=False)
    ses: np.ndarray = field(repr=False)
    skipped: int = 0


def uniform_pairs(low, high, dim=1):
    """Pair sampler drawing both points uniformly from the box ``[low, high]^dim``."""
    def sampler(stream):
        u = stream.uniforms(2 * dim)
        return low + (high - low) * u[:dim], low + (high - low) * u[dim:]
    return sampler


def contraction_estimate(chain, pair_sampler, pairs, thetas, seed=None):
    """Largest estimated ratio ``E d(f(θ, x), f(θ, x')) / d(x, x')`` over sampled pairs.

    Both points of a pair are moved with the same θ draws. Pairs with ``x == x'`` are skipped.
    """
    if pairs < 1 or thetas < 1:
        raise UsageError('Need at least one pair and one theta draw.')
    if seed is None:
        seed = crn_settings.CRN_DEFAULT_SEED

    ratios, ses = [], []
    skipped = 0
    for i in range(pairs):
        x, x_prime = (chain.as_states(s) for s in pair_sampler(UniformStream(seed, i, MU_LANE)))
        distance = float(np.linalg.norm(x - x_prime))
        if distance == 0:
            skipped += 1
            continue

        u = UniformStream(seed, i, THETA_LANE).uniforms(thetas * chain.theta_dim)
        theta = transform(chain.theta_specs, u.reshape(thetas, chain.theta_dim))
        moved = np.linalg.norm(chain.update(theta, np.repeat(x, thetas, axis=0))
                               - chain.update(theta, np.repeat(x_prime, thetas, axis=0)), axis=-1)
        mean, se = _mean_se(moved / distance)
        ratios.append(float(mean))
        ses.append(float(se))

    if skipped:
        log.warning('%s: Skipped %s pair(s) with zero distance.', chain.name, skipped)
    if not ratios:
        raise UsageError('All %s sampled pairs had zero distance.' % pairs)

    ratios = np.array(ratios)
    ses = np.array(ses)
    index = int(np.argmax(ratios))
    return ContractionEstimate(value=float(ratios[index]), se=float(ses[index]), ratios=ratios, ses=ses,
                               skipped=skipped)
