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

"""Exceptions raised by the library modules.

Value-type problems derive from :py:class:`ValueError`, numerical breakdowns from
:py:class:`ArithmeticError`, so callers that only care about the broad category can keep catching the
builtin classes.
"""


class CRNError(Exception):
    """Base class for all errors raised by django-crn."""


class ParameterError(CRNError, ValueError):
    """Invalid parameters for a distribution or chain."""


class DomainError(CRNError, ValueError):
    """An argument lies outside the domain of a function."""


class UsageError(CRNError, ValueError):
    """The caller combined arguments in an unsupported way."""


class ParseError(CRNError, ValueError):
    """A data file could not be parsed."""

    def __init__(self, message, row=None):
        if row is not None:
            message = 'row %s: %s' % (row, message)
        super().__init__(message)
        self.row = row


class NumericError(CRNError, ArithmeticError):
    """A computation produced a non-finite or otherwise unusable value."""

    def __init__(self, message, iteration=None, replicate=None):
        context = []
        if replicate is not None:
            context.append('replicate %s' % replicate)
        if iteration is not None:
            context.append('iteration %s' % iteration)
        if context:
            message = '%s (%s)' % (message, ', '.join(context))
        super().__init__(message)
        self.iteration = iteration
        self.replicate = replicate


class FactorizationError(NumericError):
    """A matrix that should be symmetric positive definite could not be factorized."""


class QuadratureError(NumericError):
    """Adaptive quadrature did not converge."""

    def __init__(self, message, error_estimate=None):
        if error_estimate is not None:
            message = '%s (achieved error estimate: %g)' % (message, error_estimate)
        super().__init__(message)
        self.error_estimate = error_estimate
