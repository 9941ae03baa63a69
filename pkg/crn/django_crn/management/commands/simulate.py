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

from ...ifs import simulate_backward
from ...ifs import simulate_forward
from ...rng import UniformStream
from ...utils import line_plot
from ...utils import write_csv
from ..base import BaseCommand
from ..base import NonNegativeIntegerAction

log = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Simulate the forward or backward process of a registered chain and write it as CSV.'

    def add_arguments(self, parser):
        self.add_chain(parser)
        parser.add_argument('--n', type=int, default=100, action=NonNegativeIntegerAction,
                            help='Number of iterations (default: %(default)s).')
        parser.add_argument('--x0', type=float, nargs='+', metavar='X',
                            help='Initial state (default: the first default init of the chain).')
        parser.add_argument('--replicate', type=int, default=0, action=NonNegativeIntegerAction,
                            help='Replicate id, selecting an independent substream (default: %(default)s).')
        parser.add_argument('--backward', default=False, action='store_true',
                            help='Simulate the backward process from the same random maps.')
        self.add_seed(parser)
        self.add_out(parser)
        self.add_plot(parser, default=False)

    def handle(self, **options):
        entry = self.get_chain_entry(options)
        chain = entry.chain
        seed = self.get_seed(options)
        x0 = np.array(options['x0'] if options['x0'] is not None else entry.default_inits[0], dtype=float)

        stream = UniformStream(seed, options['replicate'])
        if options['backward']:
            trajectory = simulate_backward(chain, x0, stream, options['n'])
        else:
            trajectory = simulate_forward(chain, x0, stream, options['n'])

        path = self.output_dir(options, 'simulate')
        files = [write_csv(os.path.join(path, 'trajectory.csv'), ['iteration', 'coordinate', 'value'],
                           trajectory.rows())]
        if options['plot']:
            files.append(line_plot(
                os.path.join(path, 'trajectory.svg'), np.arange(len(trajectory)),
                {'x_%s' % i: trajectory.states[:, i] for i in range(chain.state_dim)},
                title='%s, %s process' % (entry.name, trajectory.direction.value), xlabel='n', ylabel='X_n'))

        manifest_options = {
            'chain': entry.name, 'params': options['param'], 'n': options['n'], 'x0': x0.tolist(),
            'replicate': options['replicate'], 'backward': options['backward'],
        }
        files.append(self.write_manifest(path, 'simulate', manifest_options, seed, files))
        log.info('%s: Wrote %s iterations to %s.', entry.name, options['n'], path)
        for filename in files:
            self.stdout.write(filename)
