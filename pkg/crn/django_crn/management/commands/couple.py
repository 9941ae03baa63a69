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

import logging
import os

import numpy as np

from ...constants import Coupling
from ...estimators import algorithm1
from ...ifs import from_distribution
from ...ifs import point_mass
from ...utils import dump_json
from ...utils import line_plot
from ...utils import write_csv
from ..base import BaseCommand
from ..base import CouplingAction
from ..base import DistributionAction
from ..base import MinimumFloatAction
from ..base import PositiveIntegerAction

log = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Estimate E|X_n - Y_n|^p for every n from coupled replicates of a chain.'

    def add_arguments(self, parser):
        self.add_chain(parser)
        parser.add_argument('--n', type=int, default=100, action=PositiveIntegerAction,
                            help='Number of iterations (default: %(default)s).')
        parser.add_argument('--replicates', type=int, default=1000, action=PositiveIntegerAction,
                            help='Number of coupled replicates (default: %(default)s).')
        parser.add_argument('--p', type=float, default=1.0, action=MinimumFloatAction,
                            help='Power of the distance, at least 1 (default: %(default)s).')
        parser.add_argument('--coupling', default=Coupling.crn, action=CouplingAction,
                            metavar='{crn,antithetic,independent}',
                            help='How the second chain uses random numbers (default: crn).')

        group = parser.add_argument_group('Initial states', 'Point masses or distributions for X_0 and Y_0.')
        group.add_argument('--x0', type=float, nargs='+', metavar='X',
                           help='Initial state of the first chain.')
        group.add_argument('--y0', type=float, nargs='+', metavar='Y',
                           help='Initial state of the second chain.')
        group.add_argument('--init-mu', action=DistributionAction, metavar='SPEC',
                           help='Draw X_0 from this distribution, e.g. "normal:0,1".')
        group.add_argument('--init-nu', action=DistributionAction, metavar='SPEC',
                           help='Draw Y_0 from this distribution, e.g. "inverse_gamma:10.5,5".')

        self.add_seed(parser)
        self.add_workers(parser)
        self.add_out(parser)
        self.add_plot(parser)

    def get_init(self, entry, options, point, spec, index):
        if options[spec] is not None:
            return from_distribution(*([options[spec]] * entry.chain.state_dim))
        value = options[point] if options[point] is not None else entry.default_inits[index]
        return point_mass(value)

    def handle(self, **options):
        entry = self.get_chain_entry(options)
        seed = self.get_seed(options)
        init_mu = self.get_init(entry, options, 'x0', 'init_mu', 0)
        init_nu = self.get_init(entry, options, 'y0', 'init_nu', 1)

        report = algorithm1(entry.chain, init_mu, init_nu, options['n'], options['replicates'],
                            p=options['p'], mode=options['coupling'], seed=seed, workers=options['workers'])

        path = self.output_dir(options, 'couple')
        data = report.to_dict()
        data['init_mu'] = init_mu.description
        data['init_nu'] = init_nu.description
        files = [
            dump_json(data, os.path.join(path, 'report.json')),
            write_csv(os.path.join(path, 'report.csv'), ['iteration', 'mean', 'se'], report.rows()),
        ]
        if options['plot']:
            files.append(line_plot(
                os.path.join(path, 'report.svg'), np.arange(report.horizon + 1), {'mean': report.means},
                title='%s, %s coupling' % (entry.name, report.coupling.value), xlabel='n',
                ylabel='mean |X_n - Y_n|^%g' % report.p, logy=True))

        manifest_options = {
            'chain': entry.name, 'params': options['param'], 'n': options['n'],
            'replicates': options['replicates'], 'p': options['p'], 'coupling': report.coupling.value,
            'init_mu': init_mu.description, 'init_nu': init_nu.description,
        }
        files.append(self.write_manifest(path, 'couple', manifest_options, seed, files))
        log.info('%s: Estimated %s iterations from %s replicates in %s.', entry.name, report.horizon,
                 report.replicates, path)

        self.stdout.write('n=%s: mean=%.6g, se=%.3g' % (report.horizon, report.means[-1], report.se[-1]))
        for filename in files:
            self.stdout.write(filename)
