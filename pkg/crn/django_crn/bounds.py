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

"""Rejection constants and the stationarity bound built on them.

If a rejection sampler with proposal ν and target π accepts with probability ``1 / K``, the chain
started from ν is at stationarity after a geometric number of restarts. That gives
``W_p(law(Y_n), π)^p <= K E|X_n - Y_n|^p`` for a CRN-coupled chain ``X``.
"""

import csv
import io
import logging
from dataclasses import dataclass
from typing import Callable
from typing import Optional
from typing import Union

import numpy as np
from scipy import optimize

from . import crn_settings
from .constants import Provenance
from .errors import UsageError
from .rng import DistributionSpec

log = logging.getLogger(__name__)

#: Mass left out at each end when a grid box has to be derived from an unbounded proposal.
BOX_EPSILON = 1e-9


@dataclass(frozen=True)
class DensityPair:
    """Target π (a :py:class:`~django_crn.rng.DistributionSpec` or a vectorised density) and proposal ν.

    ``normalized=False`` marks a target that integrates to an unknown constant. ``ratio_sup`` is an
    analytically known ``sup π/ν``.
    """

    target: Union[DistributionSpec, Callable]
    proposal: DistributionSpec
    normalized: bool = True
    support: Optional[tuple] = None
    ratio_sup: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.proposal, DistributionSpec):
            raise UsageError('The proposal must be a distribution that can be sampled.')
        if self.support is None:
            if isinstance(self.target, DistributionSpec):
                support = self.target.support
            else:
                support = self.proposal.support
            object.__setattr__(self, 'support', tuple(float(s) for s in support))

    def target_pdf(self, x):
        if isinstance(self.target, DistributionSpec):
            return self.target.pdf(x)
        return np.asarray(self.target(x), dtype=float)

    def log_ratio(self, x):
        """``log π(x) - log ν(x)``: ``-inf`` where π vanishes, ``+inf`` where only ν does."""
        x = np.asarray(x, dtype=float)
        if isinstance(self.target, DistributionSpec):
            log_target = self.target.logpdf(x)
        else:
            with np.errstate(divide='ignore'):
                log_target = np.log(self.target_pdf(x))
        log_proposal = self.proposal.logpdf(x)

        with np.errstate(invalid='ignore'):
            ratio = log_target - log_proposal
        ratio = np.where(np.isneginf(log_target), -np.inf, ratio)
        ratio = np.where(np.isneginf(log_proposal) & np.isfinite(log_target), np.inf, ratio)
        return np.where(np.isnan(ratio), -np.inf, ratio)

    def default_box(self):
        low, high = self.support
        q_low, q_high = self.proposal.quantile_range(BOX_EPSILON)
        if not np.isfinite(low):
            low = q_low
        if not np.isfinite(high):
            high = q_high
        return float(low), float(high)


@dataclass(frozen=True)
class RejectionConstant:
    value: float
    provenance: Provenance
    lower_estimate: bool = False
    vacuous: bool = False

    @property
    def separation(self):
        """Separation distance ``1 - 1/K``; 1 for a vacuous constant."""
        if self.vacuous or np.isinf(self.value):
            return 1.0
        return 1 - 1 / self.value

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        return {
            'value': self.value,
            'provenance': self.provenance.value,
            'lower_estimate': self.lower_estimate,
            'vacuous': self.vacuous,
            'separation': self.separation,
        }


def _grid_sup(pair, grid_points, box):
    """``(sup, unbounded)`` of the density ratio over ``box``, by grid search and local refinement."""
    low, high = box
    grid = np.linspace(low, high, grid_points)
    ratio = pair.log_ratio(grid)
    if np.any(np.isposinf(ratio)):
        return np.inf, True

    best = int(np.argmax(ratio))  # lowest index wins ties
    support_low, support_high = pair.support
    if best == grid_points - 1 and high < support_high and ratio[-1] > ratio[-2]:
        return np.inf, True
    if best == 0 and low > support_low and ratio[0] > ratio[1]:
        return np.inf, True

    value = ratio[best]
    bracket = (grid[max(best - 1, 0)], grid[min(best + 1, grid_points - 1)])
    result = optimize.minimize_scalar(lambda x: -float(pair.log_ratio(x)), bounds=bracket, method='bounded')
    if result.success and -result.fun > value:
        value = -result.fun
    return float(np.exp(value)), False


def rejection_constant(pair, method='grid', grid_points=None, box=None):
    """``K = ess sup π / ν`` for a :py:class:`DensityPair`.

    ``method='analytic'`` uses ``pair.ratio_sup``. ``method='grid'`` searches ``grid_points`` points of
    ``box`` (by default the support, cut to a quantile range of the proposal where unbounded) and
    refines the best cell with a bounded scalar minimiser. The result is a lower estimate of the
    supremum. An unbounded ratio gives ``K = inf``, marked ``vacuous``.
    """
    if method == 'analytic':
        if pair.ratio_sup is None:
            raise UsageError('Analytic rejection constant requested, but no supremum was given.')
        value = float(pair.ratio_sup)
        if pair.normalized:
            value = max(value, 1.0)
        return RejectionConstant(value, Provenance.analytic, vacuous=bool(np.isinf(value)))
    elif method != 'grid':
        raise UsageError('%s: Unknown method for the rejection constant.' % method)

    if grid_points is None:
        grid_points = crn_settings.CRN_GRID_POINTS
    if grid_points < 3:
        raise UsageError('grid_points: %s: Must be at least 3' % grid_points)
    if box is None:
        box = pair.default_box()

    value, unbounded = _grid_sup(pair, grid_points, box)
    if unbounded:
        log.warning('Density ratio is unbounded on %s: Bound is vacuous.', box)
        return RejectionConstant(np.inf, Provenance.grid, lower_estimate=True, vacuous=True)

    if pair.normalized:
        value = max(value, 1.0)
    log.info('Grid search estimated K=%s on %s (a lower estimate of the supremum).', value, box)
    return RejectionConstant(value, Provenance.grid, lower_estimate=True)


def separation_distance(pair, **kwargs):
    """``s(π, ν) = ess sup (1 - ν/π) = 1 - 1/K``."""
    return rejection_constant(pair, **kwargs).separation


def k_from_unnormalized(g, nu, L, ratio_sup=None, grid_points=None, box=None):
    """Upper bound ``K <= sup(g / ν) / L`` for an unnormalized target ``g`` with ``∫ g >= L > 0``."""
    if not L > 0:
        raise UsageError('L: %s: Must be positive' % L)

    pair = DensityPair(g, nu, normalized=False, ratio_sup=ratio_sup)
    method = 'grid' if ratio_sup is None else 'analytic'
    sup = rejection_constant(pair, method=method, grid_points=grid_points, box=box)
    if sup.vacuous:
        return RejectionConstant(np.inf, Provenance.unnormalized, lower_estimate=sup.lower_estimate,
                                 vacuous=True)
    return RejectionConstant(sup.value / L, Provenance.unnormalized, lower_estimate=sup.lower_estimate)


def rejection_sample(pair, K, trials, stream):
    """Run ``trials`` rounds of rejection sampling and return the empirical acceptance rate.

    Each round draws the proposal by inverse CDF and then one uniform for the accept decision.
    """
    K = float(K)
    if trials < 1:
        raise UsageError('trials: %s: Must be at least 1' % trials)
    if not np.isfinite(K) or K <= 0:
        raise UsageError('K: %s: Must be positive and finite' % K)

    x = pair.proposal.inv_cdf(stream.uniforms(trials))
    u = stream.uniforms(trials)
    accepted = u * K * pair.proposal.pdf(x) < pair.target_pdf(x)
    return float(np.mean(accepted))


@dataclass
class BoundReport:
    """Per-iteration upper bounds ``(K m_n)^{1/p}`` on the Wasserstein distance to stationarity."""

    K: RejectionConstant
    p: float
    means: np.ndarray
    se: np.ndarray
    bounds: np.ndarray
    bound_se: np.ndarray
    tv_constant: Optional[float] = None
    tv_bounds: Optional[np.ndarray] = None
    tv_se: Optional[np.ndarray] = None

    @property
    def vacuous(self):
        return self.K.vacuous

    @property
    def separation(self):
        return self.K.separation

    def rows(self):
        for n in range(len(self.means)):
            row = {'n': n, 'mean': float(self.means[n]), 'se': float(self.se[n]),
                   'bound': float(self.bounds[n]), 'bound_se': float(self.bound_se[n])}
            if self.tv_bounds is not None:
                row['tv_bound'] = float(self.tv_bounds[n])
                row['tv_se'] = float(self.tv_se[n])
            yield row

    def to_dict(self):
        return {
            'K': self.K.to_dict(),
            'p': self.p,
            'vacuous': self.vacuous,
            'tv_constant': self.tv_constant,
            'iterations': list(self.rows()),
        }

    def to_csv(self, stream=None, float_format='%.17g'):
        value = stream is None
        if value:
            stream = io.StringIO()

        columns = ['n', 'mean', 'se', 'bound', 'bound_se']
        if self.tv_bounds is not None:
            columns += ['tv_bound', 'tv_se']
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['iteration'] + columns[1:])
        for row in self.rows():
            writer.writerow([row['n']] + [float_format % row[c] for c in columns[1:]])

        if value:
            return stream.getvalue()


def stationarity_bound(K, report, tv_constant=None):
    """Turn an :py:class:`~django_crn.estimators.EstimateReport` into bounds ``(K m_n)^{1/p}``.

    The standard error is carried over by the delta method, so for ``p = 1`` it is ``K`` times the
    standard error of the mean. With a vacuous ``K`` every bound is infinite. ``tv_constant``
    additionally scales the bounds into total variation bounds, which only holds for ``p = 1``.
    """
    if not isinstance(K, RejectionConstant):
        K = RejectionConstant(float(K), Provenance.configured, vacuous=bool(np.isinf(K)))
    if K.value < 0:
        raise UsageError('K: %s: Must not be negative' % K.value)
    p = report.p
    if tv_constant is not None and p != 1:
        raise UsageError('tv_constant: Total variation bounds need p = 1, got p = %s' % p)
    means = np.asarray(report.means, dtype=float)
    se = np.asarray(report.se, dtype=float)

    if K.vacuous:
        log.warning('Rejection constant is infinite: Reporting vacuous bounds.')
        bounds = np.full(means.shape, np.inf)
        bound_se = np.full(means.shape, np.inf)
    else:
        bounds = (K.value * means) ** (1 / p)
        if p == 1:
            bound_se = K.value * se
        else:
            with np.errstate(divide='ignore', invalid='ignore'):
                bound_se = np.where(means > 0, K.value ** (1 / p) * means ** (1 / p - 1) * se / p, 0.0)

    tv_bounds = tv_se = None
    if tv_constant is not None:
        tv_bounds = tv_constant * bounds
        tv_se = tv_constant * bound_se
    return BoundReport(K=K, p=p, means=means, se=se, bounds=bounds, bound_se=bound_se,
                       tv_constant=tv_constant, tv_bounds=tv_bounds, tv_se=tv_se)
