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

"""Gibbs sampler for Bayesian linear regression with semi-conjugate priors, and its convergence bound.

The model is ``Y | β, σ² ~ N_k(Xβ, σ² I_k)``, ``β ~ N_q(β_0, Σ_β)`` and
``σ² ~ Inv-χ²(ν_0, c_0²)``. The sampler alternates

* ``β_n | σ²_{n-1} ~ N_q(β̃, V)`` with ``V = (XᵀX / σ² + Σ_β⁻¹)⁻¹`` and
  ``β̃ = V (XᵀY / σ² + Σ_β⁻¹ β_0)``,
* ``σ²_n | β_n = W_n / G_n`` with ``W_n = ν_0 c_0² / 2 + ‖Y - X β_n‖² / 2`` and
  ``G_n ~ Gamma((k + ν_0) / 2, 1)``.

Writing ``β_n = β̃ + V^{1/2} Z_n`` makes ``σ²_n`` a deterministic function of
``(σ²_{n-1}, Z_n, G_n)``, so the σ² chain is an iterated function system and can be coupled with
common random numbers.
"""

import csv
import json
import logging
import os
from dataclasses import dataclass
from dataclasses import field
from dataclasses import fields
from typing import Optional

import numpy as np
from scipy import integrate
from scipy import special

from . import crn_settings
from .bounds import RejectionConstant
from .bounds import stationarity_bound
from .constants import Coupling
from .constants import Provenance
from .errors import NumericError
from .errors import ParameterError
from .errors import ParseError
from .errors import QuadratureError
from .errors import UsageError
from .estimators import algorithm1
from .ifs import ChainModel
from .ifs import from_distribution
from .ifs import point_mass
from .numerics import SpdMatrix
from .numerics import batch_cholesky
from .rng import DistributionSpec
from .rng import transform

log = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
EXAMPLES = {
    'gibbs-regression': os.path.join(DATA_DIR, 'gibbs-regression.json'),
}


@dataclass
class RegressionData:
    y: np.ndarray
    x: np.ndarray
    columns: tuple = ()

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float).ravel()
        self.x = np.asarray(self.x, dtype=float)
        if self.x.ndim != 2 or self.x.shape[0] != len(self.y):
            raise UsageError('Design matrix of shape %s does not match %s observations'
                             % (self.x.shape, len(self.y)))
        if not self.k >= self.q >= 1:
            raise UsageError('Need at least as many observations as parameters, and at least one parameter.')

    @property
    def k(self):
        return self.x.shape[0]

    @property
    def q(self):
        return self.x.shape[1]


def load_design(path, intercept=True):
    """Load a CSV with a header row. The first column is the response, the others are predictors.

    Raises :py:class:`~django_crn.errors.ParseError` (with the 1-based line number) for empty files,
    rows of the wrong length and cells that are not numbers.
    """
    with open(path, newline='') as stream:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError('%s: File is empty.' % path, row=1)

        rows = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError('Expected %s columns, got %s' % (len(header), len(row)), row=reader.line_num)
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise ParseError('Cell is not a number: %s' % ', '.join(row), row=reader.line_num)

    if not rows:
        raise ParseError('%s: No data rows.' % path, row=2)

    values = np.array(rows)
    x = values[:, 1:]
    columns = tuple(h.strip() for h in header[1:])
    if intercept:
        x = np.hstack([np.ones((len(values), 1)), x])
        columns = ('intercept', ) + columns
    log.debug('%s: Loaded %s observations of %s predictors.', path, x.shape[0], x.shape[1])
    return RegressionData(y=values[:, 0], x=x, columns=columns)


@dataclass
class Priors:
    beta0: np.ndarray
    sigma_beta: SpdMatrix
    nu0: float
    c0sq: float

    def __post_init__(self):
        if not isinstance(self.sigma_beta, SpdMatrix):
            self.sigma_beta = SpdMatrix(self.sigma_beta)
        self.sigma_beta.factor  # fails early if Σ_β is not positive definite
        shape = (self.sigma_beta.dimension, )
        self.beta0 = np.broadcast_to(np.asarray(self.beta0, dtype=float), shape).copy()
        if not self.nu0 > 0:
            raise ParameterError('nu0: %s: Must be positive' % self.nu0)
        if not self.c0sq > 0:
            raise ParameterError('c0sq: %s: Must be positive' % self.c0sq)

    @property
    def dimension(self):
        return self.sigma_beta.dimension

    @classmethod
    def from_diagonal(cls, q, beta0=0.0, sigma_beta_diag=1.0, nu0=1.0, c0sq=10.0):
        diag = np.broadcast_to(np.asarray(sigma_beta_diag, dtype=float), (q, ))
        return cls(beta0=beta0, sigma_beta=SpdMatrix.diagonal(diag), nu0=nu0, c0sq=c0sq)


@dataclass
class GibbsState:
    beta: np.ndarray
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise NumericError('sigma2: %s: Must be positive' % self.sigma2)


def tv_constant(k, nu0, c0sq):
    """Constant ``(k + ν_0)² / (2 ν_0 c_0²)``.

    It turns a bound on ``E|σ²_n - σ²_∞|`` into a total variation bound.
    """
    if k < 0:
        raise ParameterError('k: %s: Must not be negative' % k)
    if not nu0 > 0 or not c0sq > 0:
        raise ParameterError('nu0 and c0sq must be positive')
    return (k + nu0) ** 2 / (2 * nu0 * c0sq)


class GibbsSampler:
    """The two conditional updates, vectorised over replicates.

    ``sigma2`` arguments may be scalars or arrays of shape ``(R, )``, ``z`` then has shape ``(q, )`` or
    ``(R, q)``.
    """

    def __init__(self, data, priors):
        if priors.dimension != data.q:
            raise UsageError('Prior has dimension %s, but the design has %s columns.'
                             % (priors.dimension, data.q))
        self.data = data
        self.priors = priors
        self.alpha_prime = (data.k + priors.nu0) / 2
        self.beta_prime = priors.nu0 * priors.c0sq / 2

        self.xtx = data.x.T @ data.x
        self.xty = data.x.T @ data.y
        self.yty = float(data.y @ data.y)
        self.prior_precision = priors.sigma_beta.inverse()
        self.prior_shift = priors.sigma_beta.solve(priors.beta0)
        self.prior_quadratic = float(priors.beta0 @ self.prior_shift)

    def _precision(self, sigma2):
        return self.xtx / sigma2[:, np.newaxis, np.newaxis] + self.prior_precision

    def posterior(self, sigma2):
        """Mean ``β̃`` (shape ``(R, q)``) and the Cholesky factor of ``V`` (shape ``(R, q, q)``)."""
        sigma2 = np.atleast_1d(np.asarray(sigma2, dtype=float))
        if np.any(~(sigma2 > 0)):
            raise NumericError('sigma2 must be positive')
        precision = self._precision(sigma2)
        shift = self.xty / sigma2[:, np.newaxis] + self.prior_shift
        covariance = np.linalg.inv(precision)
        covariance = (covariance + np.swapaxes(covariance, -1, -2)) / 2
        beta_tilde = np.einsum('rij,rj->ri', covariance, shift)
        return beta_tilde, batch_cholesky(covariance)

    def beta_update(self, sigma2, z):
        """``β = β̃ + V^{1/2} Z``."""
        scalar = np.ndim(sigma2) == 0
        beta_tilde, factor = self.posterior(sigma2)
        z = np.asarray(z, dtype=float).reshape(beta_tilde.shape)
        beta = beta_tilde + np.einsum('rij,rj->ri', factor, z)
        return beta[0] if scalar else beta

    def residual_term(self, beta):
        """``W = ν_0 c_0² / 2 + ‖Y - Xβ‖² / 2``."""
        beta = np.asarray(beta, dtype=float)
        residuals = self.data.y - beta @ self.data.x.T
        return self.beta_prime + (residuals ** 2).sum(axis=-1) / 2

    def sigma_conditional(self, beta, g):
        """``σ² = W / G`` for a ``Gamma((k + ν_0) / 2, 1)`` draw ``G``."""
        g = np.asarray(g, dtype=float)
        if np.any(~(g > 0)):
            raise NumericError('Gamma draw is not positive')
        sigma2 = self.residual_term(beta) / g
        return float(sigma2) if np.ndim(sigma2) == 0 else sigma2

    def sigma_marginal_step(self, sigma2, z, g):
        """One step of the σ² marginal chain, ``σ²_{n-1} -> σ²_n``."""
        return self.sigma_conditional(self.beta_update(sigma2, z), g)

    def step(self, state, z, g):
        """One full Gibbs sweep from ``state``; only ``state.sigma2`` is used."""
        beta = self.beta_update(state.sigma2, z)
        return GibbsState(beta=beta, sigma2=self.sigma_conditional(beta, g))

    @property
    def theta_specs(self):
        """Laws of ``(Z_1, ..., Z_q, G)``, in draw order."""
        return tuple(DistributionSpec.normal(0, 1) for _ in range(self.data.q)) + (
            DistributionSpec.gamma(self.alpha_prime, 1), )

    def trajectory(self, sigma2, stream, n):
        """``n`` sweeps from ``sigma2``, each taking ``q + 1`` uniforms from ``stream``."""
        state = GibbsState(beta=self.priors.beta0.copy(), sigma2=sigma2)
        specs = self.theta_specs
        states = [state]
        for _ in range(n):
            theta = transform(specs, stream.uniforms(len(specs)))
            state = self.step(state, theta[:-1], theta[-1])
            states.append(state)
        return states

    def log_marginal_sigma_unnormalized(self, sigma2):
        """``log ∫ g(β, σ²) dβ``, with the Gaussian integral over β done in closed form."""
        sigma2 = np.atleast_1d(np.asarray(sigma2, dtype=float))
        if np.any(~(sigma2 > 0)):
            raise NumericError('sigma2 must be positive')
        precision = self._precision(sigma2)
        shift = self.xty / sigma2[:, np.newaxis] + self.prior_shift
        factor = batch_cholesky(precision)
        log_det = 2 * np.log(np.diagonal(factor, axis1=-2, axis2=-1)).sum(axis=-1)
        mean = np.linalg.solve(precision, shift[..., np.newaxis])[..., 0]

        quadratic = self.yty / sigma2 + self.prior_quadratic - (shift * mean).sum(axis=-1)
        value = (self.data.q / 2 * np.log(2 * np.pi) - log_det / 2 - quadratic / 2
                 - (self.alpha_prime + 1) * np.log(sigma2) - self.beta_prime / sigma2)
        return value


def marginal_sigma_unnormalized(sigma2, data, priors):
    value = np.exp(GibbsSampler(data, priors).log_marginal_sigma_unnormalized(sigma2))
    return float(value[0]) if np.ndim(sigma2) == 0 else value


def compute_L(data, priors, sigma2_range=(0.1, 1e4), quad_points=200, epsrel=1e-8):
    """Certified lower value of ``∫_B ∫ g(β, σ²) dβ dσ²`` over ``B = sigma2_range``.

    The integral is taken over ``log σ²`` with :py:func:`scipy.integrate.quad`, after scaling the
    integrand by its maximum. The returned value is the quadrature result minus its error estimate.
    ``quad_points`` limits the number of adaptive subintervals.
    """
    low, high = sigma2_range
    if not 0 < low < high:
        raise UsageError('sigma2_range: %s: Must satisfy 0 < low < high' % (sigma2_range, ))
    sampler = GibbsSampler(data, priors)

    def log_integrand(t):
        return sampler.log_marginal_sigma_unnormalized(np.exp(t)) + t

    grid = np.linspace(np.log(low), np.log(high), 2049)
    values = log_integrand(grid)
    shift = float(values.max())
    peak = float(grid[int(np.argmax(values))])
    points = [peak] if grid[0] < peak < grid[-1] else None

    result = integrate.quad(lambda t: float(np.exp(log_integrand(t)[0] - shift)), grid[0], grid[-1],
                            points=points, limit=quad_points, epsabs=0, epsrel=epsrel, full_output=1)
    value, error = result[:2]
    if len(result) > 3:
        raise QuadratureError('Quadrature did not converge: %s' % result[3],
                              error_estimate=error * np.exp(shift))

    log.debug('Quadrature over %s: %s +- %s (scaled by exp(%s)), %s evaluations.', sigma2_range, value, error,
              shift, result[2]['neval'])
    return (value - error) * np.exp(shift)


def compute_K_gibbs(L, priors, k, beta_prime=None):
    """``K <= (2π)^{q/2} det(Σ_β)^{1/2} Γ(α') / β'^{α'} / L`` with ``α' = (k + ν_0) / 2``.

    ``beta_prime`` defaults to ``ν_0 c_0² / 2``, the rate of the inverse gamma envelope.
    """
    if not L > 0:
        raise UsageError('L: %s: Must be positive' % L)
    alpha_prime = (k + priors.nu0) / 2
    if beta_prime is None:
        beta_prime = priors.nu0 * priors.c0sq / 2

    log_k = (priors.dimension / 2 * np.log(2 * np.pi) + priors.sigma_beta.log_determinant() / 2
             + special.gammaln(alpha_prime) - alpha_prime * np.log(beta_prime) - np.log(L))
    return float(np.exp(log_k))


def gibbs_sigma_chain(sampler):
    """The σ² marginal chain as a :py:class:`~django_crn.ifs.ChainModel` with ``θ = (Z_1..Z_q, G)``."""
    q = sampler.data.q

    def update(theta, x):
        return sampler.sigma_marginal_step(x[:, 0], theta[:, :q], theta[:, q])[:, np.newaxis]

    return ChainModel(
        name='gibbs-sigma2', state_dim=1, theta_specs=sampler.theta_specs, update=update,
        state_domain=(0.0, np.inf), description='σ² marginal of the regression Gibbs sampler',
        theta_names=tuple('Z%s' % (i + 1) for i in range(q)) + ('G', ),
    )


@dataclass
class GibbsConfig:
    dataset: str
    intercept: bool = True
    beta0: object = 0.0
    sigma_beta_diag: object = 1.0
    nu0: float = 1.0
    c0sq: float = 10.0
    I: int = 1000  # NOQA: E741
    N: int = 100
    seed: Optional[int] = None
    sigma2_init: float = 1.0
    B_low: float = 0.1
    B_high: float = 1e4
    p: float = 1
    n_report: int = 25
    L: Optional[float] = None
    quad_points: int = 200
    workers: Optional[int] = None
    base_dir: str = field(default='', repr=False)

    def __post_init__(self):
        if self.I < 1:
            raise UsageError('I: %s: Must be at least 1' % self.I)
        if self.N < 1:
            raise UsageError('N: %s: Must be at least 1' % self.N)
        if not 0 <= self.n_report <= self.N:
            raise UsageError('n_report: %s: Must be between 0 and N (%s)' % (self.n_report, self.N))
        if self.p < 1:
            raise UsageError('p: %s: Must be at least 1' % self.p)
        if not self.sigma2_init > 0:
            raise UsageError('sigma2_init: %s: Must be positive' % self.sigma2_init)
        if self.L is not None and not self.L > 0:
            raise UsageError('L: %s: Must be positive' % self.L)
        if not 0 < self.B_low < self.B_high:
            raise UsageError('B_low/B_high: Must satisfy 0 < B_low < B_high')

    @classmethod
    def from_dict(cls, data, base_dir=''):
        known = {f.name for f in fields(cls)} - {'base_dir'}
        unknown = set(data) - known
        if unknown:
            raise UsageError('Unknown configuration keys: %s' % ', '.join(sorted(unknown)))
        if 'dataset' not in data:
            raise UsageError('Configuration does not name a dataset.')

        data = dict(data)
        if 'CRN_SEED' in os.environ:
            data['seed'] = os.environ['CRN_SEED']
        try:
            if data.get('seed') is not None:
                data['seed'] = int(data['seed'])
            for key in ['I', 'N', 'n_report', 'quad_points']:
                if key in data:
                    data[key] = int(data[key])
            return cls(base_dir=base_dir, **data)
        except (TypeError, ValueError) as e:
            if isinstance(e, UsageError):
                raise
            raise UsageError('Invalid configuration: %s' % e)

    @property
    def dataset_path(self):
        return os.path.join(self.base_dir, self.dataset)

    @property
    def resolved_seed(self):
        return crn_settings.CRN_DEFAULT_SEED if self.seed is None else self.seed

    def priors(self, q):
        return Priors.from_diagonal(q, beta0=self.beta0, sigma_beta_diag=self.sigma_beta_diag, nu0=self.nu0,
                                    c0sq=self.c0sq)

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ('base_dir', 'workers')}


def load_config(path):
    """Load a :py:class:`GibbsConfig` from JSON; the dataset path is relative to the file."""
    with open(path) as stream:
        try:
            data = json.load(stream)
        except ValueError as e:
            raise UsageError('%s: Invalid JSON: %s' % (path, e))
    if not isinstance(data, dict):
        raise UsageError('%s: Configuration must be a JSON object.' % path)
    return GibbsConfig.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))


@dataclass
class GibbsReport:
    config: GibbsConfig
    K: RejectionConstant
    L: float
    L_quadrature: float
    K_quadrature: float
    K_statement_reading: float
    tv_constant: float
    alpha_prime: float
    beta_prime: float
    estimate: object = field(repr=False)
    bound: object = field(repr=False)

    @property
    def L_certified(self):
        """True if ``L`` does not exceed the certified quadrature value, so ``K`` is a true upper bound."""
        return bool(0 < self.L <= self.L_quadrature)

    @property
    def histogram(self):
        """Per-replicate ``|σ²_n - σ'²_n|`` at the reported iteration."""
        return self.estimate.distances[:, self.config.n_report]

    def rows(self):
        for row in self.bound.rows():
            yield {'n': row['n'], 'mean_abs_diff': row['mean'], 'se': row['se'], 'w_bound': row['bound'],
                   'w_bound_se': row['bound_se'], 'tv_bound': row.get('tv_bound')}

    def to_dict(self):
        return {
            'K': self.K.value,
            'K_provenance': self.K.provenance.value,
            'K_quadrature': self.K_quadrature,
            'K_statement_reading': self.K_statement_reading,
            'L': self.L,
            'L_quadrature': self.L_quadrature,
            'L_certified': self.L_certified,
            'separation': self.K.separation,
            'tv_constant': self.tv_constant,
            'alpha_prime': self.alpha_prime,
            'beta_prime': self.beta_prime,
            'p': self.config.p,
            'replicates': self.config.I,
            'horizon': self.config.N,
            'seed': self.estimate.seed,
            'n_report': self.config.n_report,
            'iterations': list(self.rows()),
        }


def run_example(config, workers=None):
    """Bound the distance of the Gibbs σ² chain to stationarity for the regression in ``config``.

    The μ-chain starts at ``sigma2_init``, the ν-chain is drawn from the inverse gamma envelope
    ``Inv-Gamma(α', β')``. With ``L`` in the configuration that value is used for ``K``; the report
    carries the quadrature value of ``L`` and the ``K`` it implies either way. A configured ``L`` above
    the quadrature value is not certified: it is used as given, logged as a warning and flagged by
    :py:attr:`GibbsReport.L_certified`.
    """
    if workers is None:
        workers = config.workers
    data = load_design(config.dataset_path, intercept=config.intercept)
    priors = config.priors(data.q)
    sampler = GibbsSampler(data, priors)
    chain = gibbs_sigma_chain(sampler)

    init_mu = point_mass(config.sigma2_init)
    init_nu = from_distribution(DistributionSpec.inverse_gamma(sampler.alpha_prime, sampler.beta_prime))
    estimate = algorithm1(chain, init_mu, init_nu, config.N, config.I, p=config.p, mode=Coupling.crn,
                          seed=config.resolved_seed, workers=workers, keep_distances=True)

    L_quadrature = compute_L(data, priors, (config.B_low, config.B_high), quad_points=config.quad_points)
    if L_quadrature > 0:
        K_quadrature = compute_K_gibbs(L_quadrature, priors, data.k)
    else:
        log.warning('Quadrature gave no positive lower value for L over [%s, %s].',
                    config.B_low, config.B_high)
        K_quadrature = np.inf

    if config.L is not None:
        L, provenance = config.L, Provenance.configured
        if not config.L <= L_quadrature:
            log.warning('Configured L=%s exceeds the certified quadrature value %s over [%s, %s], '
                        'K is not a certified upper bound.',
                        config.L, L_quadrature, config.B_low, config.B_high)
        K_value = compute_K_gibbs(L, priors, data.k)
    else:
        L, provenance, K_value = L_quadrature, Provenance.unnormalized, K_quadrature
    K = RejectionConstant(K_value, provenance, vacuous=bool(np.isinf(K_value)))
    K_statement = compute_K_gibbs(L, priors, data.k, beta_prime=2 * sampler.beta_prime) if L > 0 else np.inf

    tv = tv_constant(data.k, priors.nu0, priors.c0sq)
    bound = stationarity_bound(K, estimate, tv_constant=tv if config.p == 1 else None)
    log.info('Gibbs example: K=%s (%s), L=%s, bound at n=%s: %s', K.value, provenance.value, L,
             config.n_report, bound.bounds[config.n_report])
    return GibbsReport(config=config, K=K, L=L, L_quadrature=L_quadrature, K_quadrature=K_quadrature,
                       K_statement_reading=K_statement, tv_constant=tv, alpha_prime=sampler.alpha_prime,
                       beta_prime=sampler.beta_prime, estimate=estimate, bound=bound)
