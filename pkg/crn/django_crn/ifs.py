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

"""Chains as iterated function systems, and their forward, backward and coupled simulation.

A chain is ``X_n = f(θ_n, X_{n-1})`` with i.i.d. ``θ_n``. All simulations here are vectorised over
replicates: states are arrays of shape ``(R, state_dim)``, θ draws arrays of shape ``(R, theta_dim)``.
Replicate ``r`` only ever consumes uniforms from its own :py:class:`~django_crn.rng.UniformStream`
substreams, so results do not depend on how replicates are grouped.
"""

import csv
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Callable
from typing import Optional

import numpy as np

from .constants import Coupling
from .constants import Direction
from .errors import DomainError
from .errors import NumericError
from .errors import UsageError
from .rng import PARTNER_LANE
from .rng import THETA_LANE
from .rng import UniformStream
from .rng import transform

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainModel:
    """An iterated function system.

    ``update(theta, x)`` receives θ draws of shape ``(R, theta_dim)`` and states of shape
    ``(R, state_dim)`` and returns the next states. It must be deterministic. θ coordinates are drawn
    in the order of ``theta_specs``, which is what aligns the uniforms of two CRN-coupled chains.
    """

    name: str
    state_dim: int
    theta_specs: tuple
    update: Callable
    state_domain: Optional[tuple] = None
    description: str = ''
    theta_names: tuple = ()
    accept: Optional[Callable] = None
    metadata: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        if self.state_dim < 1:
            raise UsageError('%s: state_dim must be at least 1' % self.name)
        if not self.theta_specs:
            raise UsageError('%s: Need at least one theta coordinate' % self.name)
        object.__setattr__(self, 'theta_specs', tuple(self.theta_specs))

    def __repr__(self):
        return '<ChainModel: %s>' % self.name

    @property
    def theta_dim(self):
        return len(self.theta_specs)

    def as_states(self, x, replicates=None):
        """Convert a scalar, a single state or a stack of states to shape ``(R, state_dim)``."""
        x = np.asarray(x, dtype=float)
        if x.ndim <= 1:
            if x.size != self.state_dim:
                raise UsageError('%s: Expected states of dimension %s, got shape %s'
                                 % (self.name, self.state_dim, x.shape))
            x = x.reshape(1, self.state_dim)
            if replicates is not None:
                x = np.repeat(x, replicates, axis=0)
        if x.ndim != 2 or x.shape[1] != self.state_dim:
            raise UsageError('%s: Expected states of dimension %s, got shape %s'
                             % (self.name, self.state_dim, x.shape))
        return x

    def in_domain(self, x):
        if self.state_domain is None:
            return True
        low, high = self.state_domain
        return bool(np.all((x >= low) & (x <= high)))

    def check_domain(self, x):
        if not self.in_domain(x):
            raise DomainError('%s: Initial state %s outside of %s' % (self.name, x, self.state_domain))

    def step(self, theta, x):
        """Apply the update to a single state with a single θ vector."""
        theta = np.asarray(theta, dtype=float).reshape(1, self.theta_dim)
        return self.update(theta, self.as_states(x))[0]

    def as_function(self):
        """The update as ``f(theta, z)`` for a scalar chain with scalar θ, vectorised over ``theta``."""
        if self.theta_dim != 1 or self.state_dim != 1:
            raise UsageError('%s: Only chains with scalar state and scalar theta are functions of theta'
                             % self.name)

        def f(theta, z):
            theta = np.asarray(theta, dtype=float).reshape(-1, 1)
            x = np.full(theta.shape, float(z))
            return self.update(theta, x)[:, 0]
        return f


@dataclass
class Trajectory:
    """States ``x_0 ... x_N`` of one replicate, shape ``(N + 1, state_dim)``."""

    states: np.ndarray
    direction: Direction = Direction.forward
    seed: Optional[int] = None
    replicate_id: int = 0
    accepted: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.states)

    @property
    def horizon(self):
        return len(self.states) - 1

    def rows(self):
        for iteration, state in enumerate(self.states):
            for coordinate, value in enumerate(state):
                yield iteration, coordinate, value

    def to_csv(self, stream, float_format='%.17g'):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['iteration', 'coordinate', 'value'])
        for iteration, coordinate, value in self.rows():
            writer.writerow([iteration, coordinate, float_format % value])


@dataclass
class CoupledRun:
    x_traj: Trajectory
    y_traj: Trajectory
    coupling: Coupling

    @property
    def distances(self):
        return np.linalg.norm(self.x_traj.states - self.y_traj.states, axis=-1)

    def to_csv(self, stream, float_format='%.17g'):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['iteration', 'coordinate', 'x', 'y', 'distance'])
        distances = self.distances
        for iteration, (x, y) in enumerate(zip(self.x_traj.states, self.y_traj.states)):
            for coordinate in range(len(x)):
                writer.writerow([iteration, coordinate, float_format % x[coordinate],
                                 float_format % y[coordinate], float_format % distances[iteration]])


def point_mass(x):
    """Initial-state sampler that always returns ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))

    def sampler(stream):
        return x.copy()
    sampler.description = 'point mass at %s' % x.tolist()
    return sampler


def from_distribution(*specs):
    """Initial-state sampler drawing coordinate ``i`` from ``specs[i]`` by inverse CDF."""
    def sampler(stream):
        return transform(specs, stream.uniforms(len(specs)))
    sampler.description = ', '.join(str(s) for s in specs)
    return sampler


def _check_finite(states, iteration, replicate_ids):
    finite = np.isfinite(states).reshape(len(states), -1).all(axis=1)
    if not finite.all():
        index = int(np.argmin(finite))
        replicate = replicate_ids[index] if replicate_ids is not None else index
        raise NumericError('Update returned a non-finite state', iteration=iteration, replicate=replicate)


def iterate_forward(chain, x0, thetas, replicate_ids=None):
    """Run ``x_n = f(θ_n, x_{n-1})`` for all replicates.

    Parameters
    ----------

    x0 : ndarray
        Initial states, shape ``(R, state_dim)``.
    thetas : ndarray
        θ draws, shape ``(R, N, theta_dim)``.

    Returns
    -------

    (states, accepted) : ``states`` has shape ``(R, N + 1, state_dim)``, ``accepted`` is ``None`` unless
        the chain records acceptance indicators.
    """
    replicates, horizon, _ = thetas.shape
    states = np.empty((replicates, horizon + 1, chain.state_dim))
    states[:, 0] = x0
    accepted = np.empty((replicates, horizon), dtype=bool) if chain.accept is not None else None

    for n in range(horizon):
        theta = thetas[:, n]
        if accepted is not None:
            accepted[:, n] = chain.accept(theta, states[:, n])
        states[:, n + 1] = chain.update(theta, states[:, n])
        _check_finite(states[:, n + 1], n + 1, replicate_ids)
    return states, accepted


def iterate_backward(chain, x0, thetas, replicate_ids=None):
    """Backward process ``x̃_n = f(θ_1, f(θ_2, ... f(θ_n, x_0)))`` for every ``n <= N``.

    All prefixes are advanced together: for ``j = N, ..., 1`` the map ``f(θ_j, .)`` is applied to the
    partial compositions of every ``n >= j``. This costs ``N`` vectorised calls of ``update``.
    """
    replicates, horizon, theta_dim = thetas.shape
    dim = chain.state_dim
    states = np.empty((replicates, horizon + 1, dim))
    states[:, 0] = x0

    work = np.repeat(x0[:, np.newaxis, :], horizon, axis=1)  # work[:, n - 1] holds x̃_n
    for j in range(horizon, 0, -1):
        block = work[:, j - 1:]
        width = block.shape[1]
        theta = np.repeat(thetas[:, j - 1][:, np.newaxis, :], width, axis=1)
        updated = chain.update(theta.reshape(-1, theta_dim), block.reshape(-1, dim))
        work[:, j - 1:] = updated.reshape(replicates, width, dim)
        _check_finite(work[:, j - 1], j, replicate_ids)

    states[:, 1:] = work
    return states


def replicate_uniforms(seed, replicate_ids, horizon, theta_dim, lane=THETA_LANE):
    """Uniform blocks of shape ``(R, N, theta_dim)``, row ``r`` from the substream of ``replicate_ids[r]``."""
    blocks = [UniformStream(seed, r, lane).uniforms(horizon * theta_dim).reshape(horizon, theta_dim)
              for r in replicate_ids]
    if not blocks:
        return np.empty((0, horizon, theta_dim))
    return np.stack(blocks)


def coupled_uniforms(u, mode, partner):
    """Uniforms of the second chain, given those of the first one."""
    mode = Coupling(mode)
    if mode == Coupling.crn:
        return u
    elif mode == Coupling.antithetic:
        return 1 - u
    return partner()


def simulate_replicates(chain, x0, seed, replicate_ids, horizon, direction=Direction.forward,
                        lane=THETA_LANE):
    """Uncoupled runs of many replicates; returns states of shape ``(R, N + 1, state_dim)``."""
    replicate_ids = list(replicate_ids)
    x0 = chain.as_states(x0, replicates=len(replicate_ids))
    u = replicate_uniforms(seed, replicate_ids, horizon, chain.theta_dim, lane=lane)
    thetas = transform(chain.theta_specs, u)

    if Direction(direction) == Direction.backward:
        return iterate_backward(chain, x0, thetas, replicate_ids)
    return iterate_forward(chain, x0, thetas, replicate_ids)[0]


def couple_replicates(chain, x0, y0, seed, replicate_ids, horizon, mode=Coupling.crn):
    """Coupled runs of many replicates; returns the two state arrays, each ``(R, N + 1, state_dim)``."""
    replicate_ids = list(replicate_ids)
    x0 = chain.as_states(x0, replicates=len(replicate_ids))
    y0 = chain.as_states(y0, replicates=len(replicate_ids))

    u = replicate_uniforms(seed, replicate_ids, horizon, chain.theta_dim)
    u_prime = coupled_uniforms(u, mode, lambda: replicate_uniforms(
        seed, replicate_ids, horizon, chain.theta_dim, lane=PARTNER_LANE))

    x_states = iterate_forward(chain, x0, transform(chain.theta_specs, u), replicate_ids)[0]
    y_states = iterate_forward(chain, y0, transform(chain.theta_specs, u_prime), replicate_ids)[0]
    return x_states, y_states


def _theta_block(chain, stream, horizon):
    u = stream.uniforms(horizon * chain.theta_dim).reshape(1, horizon, chain.theta_dim)
    return u


def simulate_forward(chain, x0, stream, n):
    """Forward process of a single replicate, consuming exactly ``n * theta_dim`` uniforms."""
    if n < 0:
        raise UsageError('n: %s: Must not be negative' % n)
    x0 = chain.as_states(x0)
    chain.check_domain(x0)

    thetas = transform(chain.theta_specs, _theta_block(chain, stream, n))
    states, accepted = iterate_forward(chain, x0, thetas, [stream.replicate_id])
    return Trajectory(states[0], Direction.forward, seed=stream.seed, replicate_id=stream.replicate_id,
                      accepted=accepted[0] if accepted is not None else None)


def simulate_backward(chain, x0, stream, n):
    """Backward process of a single replicate, from the same θ draws :py:func:`simulate_forward` uses."""
    if n < 0:
        raise UsageError('n: %s: Must not be negative' % n)
    x0 = chain.as_states(x0)
    chain.check_domain(x0)

    thetas = transform(chain.theta_specs, _theta_block(chain, stream, n))
    states = iterate_backward(chain, x0, thetas, [stream.replicate_id])
    return Trajectory(states[0], Direction.backward, seed=stream.seed, replicate_id=stream.replicate_id)


def simulate_coupled(chain, x0, y0, stream, partner_stream, n, mode=Coupling.crn):
    """Two copies of ``chain`` driven per coupling ``mode``.

    Under ``crn`` both copies use the θ draws of one forward run, under ``antithetic`` the second copy
    uses the reflected uniforms ``1 - u``, under ``independent`` uniforms from ``partner_stream``.
    """
    if n < 0:
        raise UsageError('n: %s: Must not be negative' % n)
    mode = Coupling(mode)
    x0 = chain.as_states(x0)
    y0 = chain.as_states(y0)
    chain.check_domain(x0)
    chain.check_domain(y0)

    if mode == Coupling.independent and partner_stream is None:
        raise UsageError('Independent coupling requires a partner stream')

    u = _theta_block(chain, stream, n)
    u_prime = coupled_uniforms(u, mode, lambda: _theta_block(chain, partner_stream, n))
    ids = [stream.replicate_id]
    x_states, x_accepted = iterate_forward(chain, x0, transform(chain.theta_specs, u), ids)
    y_states, y_accepted = iterate_forward(chain, y0, transform(chain.theta_specs, u_prime), ids)

    x_traj = Trajectory(x_states[0], seed=stream.seed, replicate_id=stream.replicate_id,
                        accepted=x_accepted[0] if x_accepted is not None else None)
    y_traj = Trajectory(y_states[0], seed=stream.seed, replicate_id=stream.replicate_id,
                        accepted=y_accepted[0] if y_accepted is not None else None)
    return CoupledRun(x_traj, y_traj, mode)
