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

import os

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.utils.translation import gettext_lazy as _

if 'CRN_DIR' in os.environ:  # pragma: no cover
    CRN_DIR = os.path.join(os.environ['CRN_DIR'], 'files')
else:
    CRN_DIR = getattr(settings, 'CRN_DIR', os.path.join(settings.BASE_DIR, 'files'))

CRN_CHAINS = {
    'ar1': {
        'factory': 'ar1',
        'params': {'phi': 0.9, 'sigma': 1.0},
        'inits': (25.0, -25.0),
        'description': _('Autoregressive chain with normal noise, X_n = phi X_{n-1} + Z_n.'),
        'citation': 'autoregressive forward/backward example',
    },
    'logistic': {
        'factory': 'random_logistic',
        'params': {'a': 1.0},
        'inits': (0.99, 0.1),
        'description': _('Random logistic map with Beta(a + 1/2, a - 1/2) parameter.'),
        'citation': 'random logistic map example',
    },
    'trig': {
        'factory': 'trig_chain',
        'params': {},
        'inits': (0.75, 0.05),
        'description': _('Trigonometric chain sin[(1 - |x|) cos(theta)], theta uniform on (-pi/2, 3pi/2).'),
        'citation': 'trigonometric chain example',
    },
    'dirichlet-means': {
        'factory': 'dirichlet_means',
        'params': {'a': 1.5},
        'inits': (10.0, -10.0),
        'description': _('Dirichlet process means recursion with two-dimensional theta.'),
        'citation': 'Dirichlet process means example',
    },
    'metropolis': {
        'factory': 'metropolis_demo',
        'params': {'step': 0.1},
        'inits': (0.6, 1.9),
        'description': _('Random-walk Metropolis on a multimodal density, accept via shared uniform.'),
        'citation': 'Metropolis counterexample',
    },
}

# Add ability just override/add some chains
_CRN_CHAIN_OVERRIDES = getattr(settings, 'CRN_CHAINS', {})
for name, chain in _CRN_CHAIN_OVERRIDES.items():
    if chain is None:
        del CRN_CHAINS[name]
    elif name in CRN_CHAINS:
        CRN_CHAINS[name] = dict(CRN_CHAINS[name], **chain)
    else:
        CRN_CHAINS[name] = chain

for name, chain in CRN_CHAINS.items():
    if 'factory' not in chain:
        raise ImproperlyConfigured('CRN_CHAINS: %s: No factory given.' % name)
    chain.setdefault('params', {})
    chain.setdefault('description', '')
    chain.setdefault('citation', '')

if 'CRN_SEED' in os.environ:
    try:
        CRN_DEFAULT_SEED = int(os.environ['CRN_SEED'])
    except ValueError:
        raise ImproperlyConfigured('CRN_SEED: %s: Must be an integer' % os.environ['CRN_SEED'])
else:
    CRN_DEFAULT_SEED = getattr(settings, 'CRN_DEFAULT_SEED', 0)

CRN_GRID_POINTS = getattr(settings, 'CRN_GRID_POINTS', 4096)
CRN_QUANTILE_EPSILON = getattr(settings, 'CRN_QUANTILE_EPSILON', 1e-6)
CRN_CASE_TOLERANCE = getattr(settings, 'CRN_CASE_TOLERANCE', 1e-9)
CRN_ORACLE_SAMPLES = getattr(settings, 'CRN_ORACLE_SAMPLES', 100000)
CRN_ORACLE_BATCHES = getattr(settings, 'CRN_ORACLE_BATCHES', 10)
CRN_DEFAULT_WORKERS = getattr(settings, 'CRN_DEFAULT_WORKERS', 1)
CRN_FLOAT_FORMAT = getattr(settings, 'CRN_FLOAT_FORMAT', '%.17g')
CRN_PLOT_SIZE = getattr(settings, 'CRN_PLOT_SIZE', (800, 500))

if not isinstance(CRN_DEFAULT_SEED, int):
    raise ImproperlyConfigured('CRN_DEFAULT_SEED: %s: Must be an integer' % CRN_DEFAULT_SEED)
if not isinstance(CRN_GRID_POINTS, int) or CRN_GRID_POINTS < 2:
    raise ImproperlyConfigured('CRN_GRID_POINTS: %s: Must be an integer of at least 2' % CRN_GRID_POINTS)
if not 0 < CRN_QUANTILE_EPSILON < 0.5:
    raise ImproperlyConfigured('CRN_QUANTILE_EPSILON: %s: Must be between 0 and 0.5' % CRN_QUANTILE_EPSILON)
if CRN_ORACLE_BATCHES < 2:
    raise ImproperlyConfigured('CRN_ORACLE_BATCHES: %s: Must be at least 2' % CRN_ORACLE_BATCHES)
if CRN_ORACLE_SAMPLES < CRN_ORACLE_BATCHES:
    raise ImproperlyConfigured('CRN_ORACLE_SAMPLES cannot be lower then CRN_ORACLE_BATCHES')
if CRN_DEFAULT_WORKERS < 1:
    raise ImproperlyConfigured('CRN_DEFAULT_WORKERS: %s: Must be at least 1' % CRN_DEFAULT_WORKERS)
