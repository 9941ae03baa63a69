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

from enum import Enum


class Coupling(Enum):
    """How the θ draws of the second chain are derived from the uniforms of the first one."""

    crn = 'crn'
    antithetic = 'antithetic'
    independent = 'independent'


class Direction(Enum):
    forward = 'forward'
    backward = 'backward'


class MonotonicityCase(Enum):
    """The three cases for the probability of the common monotonicity region ``A``."""

    common = 'common'  # P(A) = 1
    opposite = 'opposite'  # P(A) = 0
    mixed = 'mixed'  # 0 < P(A) < 1


class Provenance(Enum):
    """Where a rejection constant ``K`` came from."""

    analytic = 'analytic'
    grid = 'grid'
    unnormalized = 'L-based'
    configured = 'configured'
