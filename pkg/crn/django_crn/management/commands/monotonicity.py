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

from ... import crn_settings
from ...chains import monotonicity_targets
from ...estimators import classify_monotonicity
from ...estimators import common_region
from ...utils import dump_json
from ...utils import dumps
from ..base import BaseCommand
from ..base import PositiveIntegerAction


class Command(BaseCommand):
    help = '''Classify where θ -> f(θ, x) and θ -> f(θ, y) are non-decreasing or non-increasing, and
compute the region A where both move in the same direction.'''

    def add_arguments(self, parser):
        parser.add_argument('--function', required=True, choices=sorted(monotonicity_targets()),
                            help='Function to classify. "cos" is cos(π x θ), "linear" is x θ, the other '
                                 'names are the update maps of scalar chains.')
        parser.add_argument('--x', type=float, required=True, help='First state.')
        parser.add_argument('--y', type=float, required=True, help='Second state.')
        parser.add_argument('--grid', type=int, default=crn_settings.CRN_GRID_POINTS,
                            action=PositiveIntegerAction, metavar='M',
                            help='Number of grid cells (default: %(default)s).')
        parser.add_argument('--out', metavar='FILE', help='Also write the report to FILE.')

    def handle(self, **options):
        target = monotonicity_targets()[options['function']]
        domain = target.domain()
        part_x = classify_monotonicity(target.function, options['x'], domain, options['grid'])
        part_y = classify_monotonicity(target.function, options['y'], domain, options['grid'])
        region = common_region(part_x, part_y, target.theta_law)

        report = {
            'function': target.name,
            'description': target.description,
            'theta_law': target.theta_law,
            'grid_points': options['grid'],
            'x': part_x,
            'y': part_y,
            'region': region,
        }
        if options['out']:
            dump_json(report, options['out'])
        self.stdout.write(dumps(report), ending='')
