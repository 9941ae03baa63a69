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

"""Concrete chains and the registry they are looked up in."""

from dataclasses import dataclass
from threading import local
from typing import Callable

import numpy as np

from . import crn_settings
from .errors import ParameterError
from .errors import UsageError
from .ifs import ChainModel
from .rng import DistributionSpec


def ar1(phi=0.9, sigma=1.0):
    """Autoregressive chain ``X_n = phi * X_{n-1} + Z_n`` with ``Z_n ~ N(0, sigma)``."""
    if sigma <= 0:
        raise ParameterError('sigma: %s: Must be positive' % sigma)

    def update(theta, x):
        return phi * x + theta[:, :1]

    return ChainModel(
        name='ar1', state_dim=1, theta_specs=(DistributionSpec.normal(0, sigma), ), update=update,
        description='X_n = %g X_{n-1} + Z_n' % phi, theta_names=('Z', ),
        metadata={'phi': phi, 'sigma': sigma, 'contraction': abs(phi)},
    )


def random_logistic(a=1.0):
    """Random logistic map ``X_n = 4 θ_n X_{n-1} (1 - X_{n-1})`` with ``θ_n ~ Beta(a + 1/2, a - 1/2)``."""
    if a <= 0.5:
        raise ParameterError('a: %s: Must be greater than 1/2' % a)

    def update(theta, x):
        return 4 * theta[:, :1] * x * (1 - x)

    return ChainModel(
        name='logistic', state_dim=1, theta_specs=(DistributionSpec.beta(a + .5, a - .5), ), update=update,
        state_domain=(0.0, 1.0), description='X_n = 4 θ_n X_{n-1} (1 - X_{n-1})', theta_names=('θ', ),
        metadata={'a': a, 'monotone_in_theta': True},
    )


def trig_chain():
    """``X_n = sin[(1 - |X_{n-1}|) cos(θ_n)]`` with ``θ_n ~ Unif(-π/2, 3π/2)``."""
    def update(theta, x):
        return np.sin((1 - np.abs(x)) * np.cos(theta[:, :1]))

    return ChainModel(
        name='trig', state_dim=1, theta_specs=(DistributionSpec.uniform(-np.pi / 2, 3 * np.pi / 2), ),
        update=update, state_domain=(-1.0, 1.0), description='X_n = sin[(1 - |X_{n-1}|) cos(θ_n)]',
        theta_names=('θ', ),
    )


def dirichlet_means(a=1.5):
    """Dirichlet process means ``X_n = (1 - θ_n) Z_n + θ_n X_{n-1}``.

    ``θ_n ~ Beta(a, 1)`` and ``Z_n ~ N(0, 1)`` are drawn in that order.

    θ is two-dimensional, so the one-dimensional optimality result for CRN does not cover this
    chain. That is recorded as ``metadata['theorem_applicable'] = False``.
    """
    if a <= 0:
        raise ParameterError('a: %s: Must be positive' % a)

    def update(theta, x):
        weight = theta[:, :1]
        return (1 - weight) * theta[:, 1:2] + weight * x

    return ChainModel(
        name='dirichlet-means', state_dim=1,
        theta_specs=(DistributionSpec.beta(a, 1), DistributionSpec.normal(0, 1)), update=update,
        description='X_n = (1 - θ_n) Z_n + θ_n X_{n-1}', theta_names=('θ', 'Z'),
        metadata={'a': a, 'theorem_applicable': False},
    )


def metropolis_target(x, lower=0.5, upper=2.0):
    """Unnormalized multimodal density ``|x³ sin(x⁴) cos(x⁵)|`` on ``[lower, upper]``, zero outside."""
    x = np.asarray(x, dtype=float)
    inside = (x >= lower) & (x <= upper)
    value = np.abs(x ** 3 * np.sin(x ** 4) * np.cos(x ** 5))
    return np.where(inside, value, 0.0)


def metropolis_demo(step=0.1, lower=0.5, upper=2.0):
    """Random-walk Metropolis on :py:func:`metropolis_target`.

    θ is ``(Z, U)``: the proposal is ``x + Z`` with ``Z ~ N(0, step)``, and it is accepted if
    ``U < g(x + Z) / g(x)``. Proposals outside of ``[lower, upper]`` have zero density and are always
    rejected. Two CRN copies share ``Z`` and ``U`` and therefore do not necessarily meet.
    """
    if step <= 0:
        raise ParameterError('step: %s: Must be positive' % step)
    if lower >= upper:
        raise ParameterError('lower: %s: Must be lower than upper (%s)' % (lower, upper))

    def accept(theta, x):
        current = metropolis_target(x[:, 0], lower, upper)
        proposed = metropolis_target(x[:, 0] + theta[:, 0], lower, upper)
        with np.errstate(divide='ignore', invalid='ignore'):
            ratio = np.where(current > 0, proposed / np.where(current > 0, current, 1), np.inf)
        return theta[:, 1] < ratio

    def update(theta, x):
        return np.where(accept(theta, x)[:, np.newaxis], x + theta[:, :1], x)

    return ChainModel(
        name='metropolis', state_dim=1,
        theta_specs=(DistributionSpec.normal(0, step), DistributionSpec.uniform(0, 1)), update=update,
        state_domain=(lower, upper), description='Random-walk Metropolis on |x³ sin(x⁴) cos(x⁵)|',
        theta_names=('Z', 'U'), accept=accept, metadata={'step': step},
    )


@dataclass(frozen=True)
class MonotonicityTarget:
    """A function ``f(θ, z)`` (vectorised in θ) together with the law of θ."""

    name: str
    function: Callable
    theta_law: DistributionSpec
    description: str = ''

    def domain(self, epsilon=None):
        if epsilon is None:
            epsilon = crn_settings.CRN_QUANTILE_EPSILON
        return self.theta_law.quantile_range(epsilon)


def cos_family(x_scale=1.0):
    """``f(θ, x) = cos(π x_scale x θ)`` with ``θ ~ Unif(0, 2)``, used as a monotonicity target only."""
    def f(theta, x):
        return np.cos(np.pi * x_scale * x * np.asarray(theta, dtype=float))
    return MonotonicityTarget('cos', f, DistributionSpec.uniform(0, 2), 'cos(π x θ), θ ~ Unif(0, 2)')


def linear_family():
    def f(theta, x):
        return x * np.asarray(theta, dtype=float)
    return MonotonicityTarget('linear', f, DistributionSpec.uniform(0, 1), 'x θ, θ ~ Unif(0, 1)')


@dataclass(frozen=True)
class ChainRegistryEntry:
    name: str
    chain: ChainModel
    default_inits: tuple
    citation: str = ''
    description: str = ''

    def __post_init__(self):
        for init in self.default_inits:
            self.chain.check_domain(self.chain.as_states(init))


FACTORIES = {
    'ar1': ar1,
    'random_logistic': random_logistic,
    'trig_chain': trig_chain,
    'dirichlet_means': dirichlet_means,
    'metropolis_demo': metropolis_demo,
}


def get_chain_entry(name, **params):
    """Build the registry entry for ``name``, with ``params`` overriding the configured parameters."""
    try:
        config = crn_settings.CRN_CHAINS[name]
    except KeyError:
        raise UsageError('%s: Unknown chain, known chains are: %s' % (name, ', '.join(sorted(
            crn_settings.CRN_CHAINS))))

    factory = config['factory']
    if not callable(factory):
        try:
            factory = FACTORIES[factory]
        except KeyError:
            raise UsageError('%s: Unknown chain factory: %s' % (name, factory))

    kwargs = dict(config['params'], **params)
    try:
        chain = factory(**kwargs)
    except TypeError as e:
        raise ParameterError('%s: %s' % (name, e))

    inits = tuple(config.get('inits', (0.0, 0.0)))
    return ChainRegistryEntry(name=name, chain=chain, default_inits=inits, citation=str(config['citation']),
                              description=str(config['description']))


def get_chain(name, **params):
    if params:
        return get_chain_entry(name, **params).chain
    return chains[name].chain


class Chains:
    """Thread-local cache of registry entries built with their configured parameters."""

    def __init__(self):
        self._chains = local()

    def __getitem__(self, name):
        try:
            return self._chains.chains[name]
        except AttributeError:
            self._chains.chains = {}
        except KeyError:
            pass

        self._chains.chains[name] = get_chain_entry(name)
        return self._chains.chains[name]

    def __iter__(self):
        for name in sorted(crn_settings.CRN_CHAINS):
            yield self[name]

    def _reset(self):
        self._chains = local()


chains = Chains()


def monotonicity_targets():
    """All functions the ``monotonicity`` command can classify, by name."""
    targets = {
        'cos': cos_family(),
        'linear': linear_family(),
    }
    for entry in chains:
        chain = entry.chain
        if chain.theta_dim == 1 and chain.state_dim == 1:
            targets[entry.name] = MonotonicityTarget(entry.name, chain.as_function(), chain.theta_specs[0],
                                                     chain.description)
    return targets
