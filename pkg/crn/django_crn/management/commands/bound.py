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

from ...gibbs import EXAMPLES
from ...gibbs import load_config
from ...gibbs import run_example
from ...utils import dump_json
from ...utils import histogram_plot
from ...utils import line_plot
from ...utils import write_csv
from ..base import BaseCommand

log = logging.getLogger(__name__)


class Command(BaseCommand):
    help = '''Bound the distance of the Gibbs sampler to stationarity for a regression configuration.

The configuration is a JSON file, see the bundled "gibbs-regression" example.'''

    def add_arguments(self, parser):
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument('--config', metavar='FILE', help='JSON configuration file.')
        group.add_argument('--example', choices=sorted(EXAMPLES), help='Run a bundled example.')
        self.add_seed(parser)
        self.add_workers(parser)
        self.add_out(parser)
        self.add_plot(parser)

    def handle(self, **options):
        config = load_config(options['config'] or EXAMPLES[options['example']])
        if options['seed'] is not None:
            config.seed = options['seed']

        report = run_example(config, workers=options['workers'])
        path = self.output_dir(options, 'bound')
        rows = list(report.rows())
        columns = ['n', 'mean_abs_diff', 'se', 'w_bound', 'w_bound_se', 'tv_bound']
        files = [
            dump_json(report.to_dict(), os.path.join(path, 'bound.json')),
            write_csv(os.path.join(path, 'bound.csv'), ['iteration'] + columns[1:],
                      ([row[c] for c in columns] for row in rows)),
            write_csv(os.path.join(path, 'histogram.csv'), ['replicate', 'abs_diff'],
                      enumerate(report.histogram)),
        ]
        if options['plot']:
            iterations = np.arange(len(rows))
            series = {'Wasserstein bound': report.bound.bounds}
            if report.bound.tv_bounds is not None:
                series['TV bound'] = report.bound.tv_bounds
            files.append(line_plot(
                os.path.join(path, 'bound.svg'), iterations, series,
                title='Gibbs sampler, K = %.4f' % report.K.value, xlabel='n', ylabel='bound', logy=True))
            files.append(histogram_plot(
                os.path.join(path, 'histogram.svg'), report.histogram,
                title='|σ²_n - σ\'²_n| at n = %s' % config.n_report, xlabel='absolute difference'))

        files.append(self.write_manifest(path, 'bound', config.to_dict(), report.estimate.seed, files))

        if not report.L_certified:
            self.stderr.write(self.style.WARNING(
                'WARNING: L = %.6g exceeds the certified quadrature value %.6g, the bounds are not certified.'
                % (report.L, report.L_quadrature)))
        self.stdout.write('K = %.6g (%s), L = %.6g, TV constant = %.6g' % (
            report.K.value, report.K.provenance.value, report.L, report.tv_constant))
        self.stdout.write('%9s  %12s  %12s  %12s' % ('iteration', 'mean', 'bound', 'se'))
        for row in rows:
            self.stdout.write('%9d  %12.6g  %12.6g  %12.6g' % (row['n'], row['mean_abs_diff'], row['w_bound'],
                                                               row['w_bound_se']))
        for filename in files:
            self.stdout.write(filename)
