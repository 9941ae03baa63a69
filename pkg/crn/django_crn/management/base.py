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

import argparse
import os

from django.core.management.base import BaseCommand as _BaseCommand
from django.core.management.base import CommandError

from .. import crn_settings
from ..chains import get_chain_entry
from ..constants import Coupling
from ..errors import DomainError
from ..errors import NumericError
from ..errors import ParameterError
from ..errors import ParseError
from ..errors import UsageError
from ..rng import DistributionSpec
from ..utils import parse_key_value
from ..utils import write_manifest


class ChainAction(argparse.Action):
    """Action to look up a registered chain by name."""

    def __call__(self, parser, namespace, value, option_string=None):
        if value not in crn_settings.CRN_CHAINS:
            parser.error('%s: Unknown chain. Known chains are: %s' % (
                value, ', '.join(sorted(crn_settings.CRN_CHAINS))))
        setattr(namespace, self.dest, value)


class CouplingAction(argparse.Action):
    def __call__(self, parser, namespace, value, option_string=None):
        try:
            value = Coupling(value)
        except ValueError:
            choices = ', '.join(c.value for c in Coupling)
            parser.error('%s: Unknown coupling, use one of %s.' % (value, choices))
        setattr(namespace, self.dest, value)


class DistributionAction(argparse.Action):
    """Action to parse a distribution like ``normal:0,1``."""

    def __call__(self, parser, namespace, value, option_string=None):
        try:
            value = DistributionSpec.parse(value)
        except ValueError as e:
            parser.error(str(e))
        setattr(namespace, self.dest, value)


class PositiveIntegerAction(argparse.Action):
    minimum = 1

    def __call__(self, parser, namespace, value, option_string=None):
        if value < self.minimum:
            parser.error('%s must be at least %s.' % (option_string or self.dest, self.minimum))
        setattr(namespace, self.dest, value)


class NonNegativeIntegerAction(PositiveIntegerAction):
    minimum = 0


class MinimumFloatAction(argparse.Action):
    def __init__(self, minimum=1, **kwargs):
        self.minimum = minimum
        super().__init__(**kwargs)

    def __call__(self, parser, namespace, value, option_string=None):
        if value < self.minimum:
            parser.error('%s must be at least %s.' % (option_string or self.dest, self.minimum))
        setattr(namespace, self.dest, value)


class ParamAction(argparse.Action):
    """Collect ``KEY=VALUE`` pairs into a dict."""

    def __call__(self, parser, namespace, value, option_string=None):
        params = dict(getattr(namespace, self.dest) or {})
        try:
            key, param = parse_key_value(value)
        except ValueError as e:
            parser.error(str(e))
        params[key] = param
        setattr(namespace, self.dest, params)


class BaseCommand(_BaseCommand):
    """Base class for all commands of this app.

    Errors raised by the library are turned into a :py:class:`~django:django.core.management.CommandError`
    with exit status 1 for numeric failures and 2 for invalid input.
    """

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except NumericError as e:
            raise CommandError(str(e), returncode=1)
        except (UsageError, ParseError, ParameterError, DomainError) as e:
            raise CommandError(str(e), returncode=2)
        except FileNotFoundError as e:
            raise CommandError('%s: File not found.' % e.filename, returncode=2)

    def add_chain(self, parser):
        parser.add_argument('--chain', required=True, action=ChainAction, metavar='NAME',
                            help='Name of a registered chain, see the list_chains command.')
        parser.add_argument('--param', action=ParamAction, metavar='KEY=VALUE', default={},
                            help='Override a parameter of the chain, e.g. "phi=0.5".')

    def add_seed(self, parser):
        parser.add_argument(
            '--seed', type=int, default=None,
            help='Seed for all random numbers (default: %s).' % crn_settings.CRN_DEFAULT_SEED)

    def add_workers(self, parser):
        parser.add_argument(
            '--workers', type=int, action=PositiveIntegerAction, default=crn_settings.CRN_DEFAULT_WORKERS,
            help='Number of threads simulating replicates. Results do not depend on it '
                 '(default: %(default)s).')

    def add_out(self, parser):
        parser.add_argument('--out', metavar='DIR',
                            help='Directory for output files (default: %s/<command>).' % crn_settings.CRN_DIR)

    def add_plot(self, parser, default=True):
        if default:
            parser.add_argument('--no-plot', dest='plot', action='store_false', default=True,
                                help='Do not write SVG plots.')
        else:
            parser.add_argument('--plot', action='store_true', default=False, help='Also write an SVG plot.')

    def get_chain_entry(self, options):
        return get_chain_entry(options['chain'], **options['param'])

    def get_seed(self, options):
        if options['seed'] is None:
            return crn_settings.CRN_DEFAULT_SEED
        return options['seed']

    def output_dir(self, options, name):
        path = options['out'] or os.path.join(crn_settings.CRN_DIR, name)
        os.makedirs(path, exist_ok=True)
        return path

    def write_manifest(self, directory, command, options, seed, files):
        return write_manifest(directory, command, options, seed, files)
