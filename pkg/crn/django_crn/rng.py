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

"""Deterministic uniform streams and inverse-CDF transforms.

Every random quantity in django-crn is an explicit, non-decreasing function of uniforms drawn from a
:py:class:`UniformStream`. This is what makes common random numbers meaningful: two chains that
consume the same uniforms see comonotone parameter draws.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy import stats

from .constants import Coupling
from .errors import DomainError
from .errors import ParameterError
from .errors import UsageError

log = logging.getLogger(__name__)

#: Spacing of the lattice uniforms live on. ``u = j * LATTICE`` with ``1 <= j < 2**53``, so ``1 - u`` is
#: exact and the antithetic reflection is an involution.
LATTICE = 2.0 ** -53

#: Lanes of a replicate. Each lane is an independent substream.
THETA_LANE = 0
PARTNER_LANE = 1
MU_LANE = 2
NU_LANE = 3

_MASK64 = (1 << 64) - 1


class UniformStream:
    """A reproducible stream of uniforms in the open interval (0, 1).

    The stream is backed by numpy's counter-based Philox generator, keyed by a
    :py:class:`~numpy.random.SeedSequence` with ``spawn_key=(replicate_id, lane)``. Streams with
    different replicate ids or lanes are therefore independent and do not overlap, and a replicate
    produces the same values no matter which worker runs it.

    Parameters
    ----------

    seed : int
        Any integer, reduced modulo 2**64.
    replicate_id : int, optional
        Non-negative replicate index.
    lane : int, optional
        Substream of the replicate, see ``THETA_LANE`` and friends.
    """

    def __init__(self, seed, replicate_id=0, lane=THETA_LANE):
        if replicate_id < 0:
            raise UsageError('replicate_id: %s: Must not be negative' % replicate_id)
        self.seed = int(seed)
        self.replicate_id = int(replicate_id)
        self.lane = int(lane)
        self.position = 0

        sequence = np.random.SeedSequence(entropy=self.seed & _MASK64,
                                          spawn_key=(self.replicate_id, self.lane))
        self._generator = np.random.Generator(np.random.Philox(sequence))

    def uniforms(self, n):
        """Return the next ``n`` uniforms as an array and advance the position by ``n``."""
        values = self._generator.random(n)
        self.position += n
        return np.maximum(values, LATTICE)

    def next_uniform(self):
        return float(self.uniforms(1)[0])

    def skip(self, n):
        self.uniforms(n)

    def substream(self, lane):
        """A fresh stream for another lane of the same replicate."""
        return UniformStream(self.seed, self.replicate_id, lane=lane)

    def partner(self):
        return self.substream(PARTNER_LANE)

    def __repr__(self):
        return '<UniformStream: seed=%s, replicate=%s, lane=%s, position=%s>' % (
            self.seed, self.replicate_id, self.lane, self.position)


class RecordedStream(UniformStream):
    """A stream replaying a fixed list of uniforms, used to pin down draws in tests."""

    def __init__(self, values, seed=0, replicate_id=0):
        values = np.asarray(values, dtype=float)
        if np.any(~((values > 0) & (values < 1))):
            raise DomainError('Recorded uniforms must lie in (0, 1)')
        self.seed = seed
        self.replicate_id = replicate_id
        self.lane = THETA_LANE
        self.position = 0
        self._values = values

    def uniforms(self, n):
        if self.position + n > len(self._values):
            raise UsageError('Recorded stream exhausted after %s draws' % len(self._values))
        values = self._values[self.position:self.position + n]
        self.position += n
        return values.copy()

    def substream(self, lane):
        raise UsageError('Recorded streams have no substreams')


@dataclass(frozen=True)
class DistributionSpec:
    """A univariate law, sampled by inverse CDF.

    Use the named constructors (:py:meth:`normal`, :py:meth:`gamma`, ...) instead of instantiating the
    class directly. Rates are rates, not scales: ``gamma(2, 3)`` has mean ``2/3``.
    """

    family: str
    params: tuple

    FAMILIES = ('uniform', 'normal', 'gamma', 'inverse_gamma', 'beta')

    def __post_init__(self):
        if self.family not in self.FAMILIES:
            raise ParameterError('%s: Unknown distribution family' % self.family)

        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, 'params', params)
        if len(params) != 2 or not np.all(np.isfinite(params)):
            raise ParameterError('%s%s: Expected two finite parameters' % (self.family, params))

        if self.family == 'uniform':
            if params[0] >= params[1]:
                raise ParameterError('uniform%s: Lower bound must be below upper bound' % (params, ))
        elif self.family == 'normal':
            if params[1] <= 0:
                raise ParameterError('normal%s: Standard deviation must be positive' % (params, ))
        elif params[0] <= 0 or params[1] <= 0:
            raise ParameterError('%s%s: Parameters must be positive' % (self.family, params))

    @classmethod
    def uniform(cls, a=0.0, b=1.0):
        return cls('uniform', (a, b))

    @classmethod
    def normal(cls, mu=0.0, sigma=1.0):
        return cls('normal', (mu, sigma))

    @classmethod
    def gamma(cls, shape, rate=1.0):
        return cls('gamma', (shape, rate))

    @classmethod
    def exponential(cls, rate=1.0):
        return cls('gamma', (1.0, rate))

    @classmethod
    def inverse_gamma(cls, shape, rate=1.0):
        return cls('inverse_gamma', (shape, rate))

    @classmethod
    def inverse_chi_squared(cls, nu, c2):
        """Scaled inverse chi-squared ``Inv-χ²(ν, c²)``, i.e. ``inverse_gamma(ν/2, ν c²/2)``."""
        if nu <= 0 or c2 <= 0:
            raise ParameterError('inverse_chi_squared(%s, %s): Parameters must be positive' % (nu, c2))
        return cls('inverse_gamma', (nu / 2, nu * c2 / 2))

    @classmethod
    def beta(cls, a, b):
        return cls('beta', (a, b))

    @classmethod
    def parse(cls, value):
        """Parse a string like ``normal:0,1`` or ``beta:1.5,0.5``."""
        try:
            family, params = value.split(':', 1)
            params = tuple(float(p) for p in params.split(','))
        except ValueError:
            raise ParameterError('%s: Could not parse distribution, use e.g. "normal:0,1"' % value)

        family = family.strip().lower().replace('-', '_')
        if family in ('exponential', 'inverse_chi_squared'):
            try:
                return getattr(cls, family)(*params)
            except TypeError:
                raise ParameterError('%s: Wrong number of parameters' % value)
        return cls(family, params)

    def __str__(self):
        return '%s(%s)' % (self.family, ', '.join('%g' % p for p in self.params))

    @property
    def support(self):
        if self.family == 'uniform':
            return self.params
        elif self.family == 'normal':
            return (-np.inf, np.inf)
        elif self.family == 'beta':
            return (0.0, 1.0)
        return (0.0, np.inf)

    def quantile_range(self, epsilon):
        """Compact range carrying all but ``2 * epsilon`` of the mass; the support if that is bounded."""
        lower, upper = self.support
        if np.isinf(lower):
            lower = self.inv_cdf(epsilon)
        if np.isinf(upper):
            upper = self.inv_cdf(1 - epsilon)
        return float(lower), float(upper)

    def inv_cdf(self, u):
        """Generalized inverse of the CDF, evaluated elementwise on ``u`` in (0, 1)."""
        u = np.asarray(u, dtype=float)
        if np.any(~((u > 0) & (u < 1))):
            raise DomainError('inv_cdf: Uniforms must lie in the open interval (0, 1)')

        p1, p2 = self.params
        if self.family == 'uniform':
            value = p1 + (p2 - p1) * u
        elif self.family == 'normal':
            value = p1 + p2 * special.ndtri(u)
        elif self.family == 'gamma':
            value = special.gammaincinv(p1, u) / p2
        elif self.family == 'inverse_gamma':
            value = p2 / special.gammainccinv(p1, u)
        else:
            value = special.betaincinv(p1, p2, u)

        return float(value) if value.ndim == 0 else value

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        p1, p2 = self.params
        if self.family == 'uniform':
            value = np.clip((x - p1) / (p2 - p1), 0, 1)
        elif self.family == 'normal':
            value = special.ndtr((x - p1) / p2)
        elif self.family == 'gamma':
            value = special.gammainc(p1, p2 * np.maximum(x, 0))
        elif self.family == 'inverse_gamma':
            with np.errstate(divide='ignore'):
                value = np.where(x > 0, special.gammaincc(p1, p2 / np.where(x > 0, x, 1)), 0.0)
        else:
            value = special.betainc(p1, p2, np.clip(x, 0, 1))
        return float(value) if np.ndim(value) == 0 else value

    def frozen(self):
        """The matching frozen :py:mod:`scipy.stats` distribution."""
        p1, p2 = self.params
        if self.family == 'uniform':
            return stats.uniform(loc=p1, scale=p2 - p1)
        elif self.family == 'normal':
            return stats.norm(loc=p1, scale=p2)
        elif self.family == 'gamma':
            return stats.gamma(p1, scale=1 / p2)
        elif self.family == 'inverse_gamma':
            return stats.invgamma(p1, scale=p2)
        return stats.beta(p1, p2)

    def pdf(self, x):
        return self.frozen().pdf(x)

    def logpdf(self, x):
        return self.frozen().logpdf(x)


def next_uniform(stream):
    return stream.next_uniform()


def inv_cdf(spec, u):
    return spec.inv_cdf(u)


def transform(specs, u):
    """Map uniforms of shape ``(..., k)`` to θ draws, column ``i`` through ``specs[i]``."""
    u = np.asarray(u, dtype=float)
    theta = np.empty_like(u)
    for i, spec in enumerate(specs):
        theta[..., i] = spec.inv_cdf(u[..., i])
    return theta


def draw_theta(specs, stream, mode=Coupling.crn, partner_stream=None):
    """Draw one θ vector for each of two coupled chains.

    Exactly ``len(specs)`` uniforms are taken from ``stream``, in the order of ``specs``. Under
    ``independent`` coupling the same number is taken from ``partner_stream``.

    Returns
    -------

    (theta, theta_prime) : tuple of ndarray
    """
    if not specs:
        raise UsageError('draw_theta: Need at least one distribution')
    mode = Coupling(mode)

    u = stream.uniforms(len(specs))
    if mode == Coupling.crn:
        u_prime = u
    elif mode == Coupling.antithetic:
        u_prime = 1 - u
    else:
        if partner_stream is None:
            raise UsageError('draw_theta: Independent coupling requires a partner stream')
        u_prime = partner_stream.uniforms(len(specs))

    return transform(specs, u), transform(specs, u_prime)
