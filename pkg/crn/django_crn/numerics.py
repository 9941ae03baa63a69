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

"""Special functions and small dense linear algebra.

The special functions are thin wrappers around :py:mod:`scipy.special` that add the domain checks the
rest of the package relies on. Linear algebra is sized for the handful of regression coefficients
of the Gibbs example and uses :py:mod:`scipy.linalg`.
"""

import numpy as np
from scipy import linalg
from scipy import special

from .errors import DomainError
from .errors import FactorizationError

SYMMETRY_TOLERANCE = 1e-12


def log_gamma(x):
    """Natural logarithm of the gamma function for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError('log_gamma: %s: Must be positive' % x)
    value = special.gammaln(x)
    return float(value) if value.ndim == 0 else value


def reg_inc_gamma_lower(a, x):
    """Regularized lower incomplete gamma function ``P(a, x)``."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~(a > 0)):
        raise DomainError('reg_inc_gamma_lower: a=%s: Must be positive' % a)
    if np.any(~(x >= 0)):
        raise DomainError('reg_inc_gamma_lower: x=%s: Must not be negative' % x)
    value = special.gammainc(a, x)
    return float(value) if value.ndim == 0 else value


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta function ``I_x(a, b)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise DomainError('reg_inc_beta: a=%s, b=%s: Must be positive' % (a, b))
    if np.any(~((x >= 0) & (x <= 1))):
        raise DomainError('reg_inc_beta: x=%s: Must be in [0, 1]' % x)
    value = special.betainc(a, b, x)
    return float(value) if value.ndim == 0 else value


class SpdMatrix:
    """A symmetric positive definite matrix with a cached lower Cholesky factor.

    Parameters
    ----------

    values : array_like
        A square matrix. It must be symmetric to a relative tolerance of ``1e-12``.
    """

    def __init__(self, values):
        values = np.array(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise FactorizationError('Matrix must be square, got shape %s' % (values.shape, ))

        scale = max(np.abs(values).max(), 1.0)
        if np.abs(values - values.T).max() > SYMMETRY_TOLERANCE * scale:
            raise FactorizationError('Matrix is not symmetric')

        self.values = values
        self._factor = None

    @classmethod
    def diagonal(cls, diag):
        return cls(np.diag(np.asarray(diag, dtype=float)))

    @property
    def dimension(self):
        return self.values.shape[0]

    @property
    def factor(self):
        if self._factor is None:
            try:
                self._factor = linalg.cholesky(self.values, lower=True)
            except linalg.LinAlgError as e:
                raise FactorizationError('Matrix is not positive definite: %s' % e)
        return self._factor

    def inverse(self):
        return self.solve(np.eye(self.dimension))

    def solve(self, b):
        return linalg.cho_solve((self.factor, True), np.asarray(b, dtype=float))

    def log_determinant(self):
        return 2 * float(np.log(np.diag(self.factor)).sum())

    def __repr__(self):
        return '<SpdMatrix: dimension=%s>' % self.dimension


def _as_spd(m):
    return m if isinstance(m, SpdMatrix) else SpdMatrix(m)


def cholesky(m):
    """Lower triangular ``L`` with ``L @ L.T == m``.

    Raises :py:class:`~django_crn.errors.FactorizationError` if ``m`` is not symmetric positive definite.
    """
    return _as_spd(m).factor


def solve(m, b):
    """Solve ``m @ x = b`` using the Cholesky factor of ``m``."""
    return _as_spd(m).solve(b)


def log_determinant(m):
    """``log det(m)``, computed as twice the sum of the logs of the Cholesky diagonal."""
    return _as_spd(m).log_determinant()


def batch_cholesky(stack):
    """Lower Cholesky factors of a stack of SPD matrices, shape ``(..., q, q)``."""
    try:
        factors = np.linalg.cholesky(np.asarray(stack, dtype=float))
    except np.linalg.LinAlgError as e:
        raise FactorizationError('Matrix is not positive definite: %s' % e)
    if not np.all(np.isfinite(factors)):
        raise FactorizationError('Cholesky factor is not finite')
    return factors
