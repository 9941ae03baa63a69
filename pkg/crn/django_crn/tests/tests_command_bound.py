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

import json
import os
import re

from .. import crn_settings
from ..gibbs import load_config
from ..gibbs import run_example
from ..utils import dumps
from .base import DATA_DIR
from .base import CRNTestCase

HEADER = '%9s  %12s  %12s  %12s' % ('iteration', 'mean', 'bound', 'se')
K_LINE = r'^K = 2\.\d+ \(configured\), L = 0\.9687, TV constant = 22\.05$'
NOT_CERTIFIED = (r'^WARNING: L = 0\.9687 exceeds the certified quadrature value \S+e-2\d, '
                 r'the bounds are not certified\.\n$')


class BoundTestCase(CRNTestCase):
    def write_config(self, **kwargs):
        config = {
            'dataset': os.path.join(DATA_DIR, 'carbs.csv'),
            'I': 40,
            'N': 10,
            'n_report': 5,
            'L': 0.9687,
        }
        config.update(kwargs)
        path = os.path.join(crn_settings.CRN_DIR, 'config.json')
        with open(path, 'w') as stream:
            json.dump(config, stream)
        return path

    def path(self, *parts):
        return os.path.join(crn_settings.CRN_DIR, 'bound', *parts)

    def test_config(self):
        with self.tmpcrndir():
            config = self.write_config()
            stdout, stderr = self.cmd('bound', '--config=%s' % config, '--no-plot')
            self.assertRegex(stderr, NOT_CERTIFIED)

            lines = stdout.splitlines()
            self.assertRegex(lines[0], K_LINE)
            self.assertEqual(lines[1], HEADER)
            self.assertEqual(len(lines), 2 + 11 + 4)
            self.assertTrue(lines[2].startswith('%9d  ' % 0))
            self.assertTrue(lines[12].startswith('%9d  ' % 10))
            self.assertEqual(lines[13:], [self.path('bound.json'), self.path('bound.csv'),
                                          self.path('histogram.csv'), self.path('manifest.json')])

            expected = run_example(load_config(config))
            self.assertEqual(self.read(self.path('bound.json')), dumps(expected.to_dict()))

            content = self.read(self.path('bound.csv')).splitlines()
            self.assertEqual(content[0], 'iteration,mean_abs_diff,se,w_bound,w_bound_se,tv_bound')
            self.assertEqual(len(content), 12)
            self.assertTrue(content[1].startswith('0,'))

            histogram = self.read(self.path('histogram.csv')).splitlines()
            self.assertEqual(histogram[0], 'replicate,abs_diff')
            self.assertEqual(len(histogram), 41)

            manifest = self.load_json(self.path('manifest.json'))
            self.assertEqual(manifest['command'], 'bound')
            self.assertEqual(manifest['seed'], crn_settings.CRN_DEFAULT_SEED)
            self.assertEqual(manifest['files'], ['bound.csv', 'bound.json', 'histogram.csv'])
            self.assertEqual(manifest['options']['I'], 40)
            self.assertEqual(manifest['options']['L'], 0.9687)

    def test_plot(self):
        with self.tmpcrndir():
            stdout, stderr = self.cmd('bound', '--config=%s' % self.write_config())
            self.assertEqual(sorted(os.listdir(self.path())), [
                'bound.csv', 'bound.json', 'bound.svg', 'histogram.csv', 'histogram.svg', 'manifest.json',
            ])
            self.assertIn(self.path('bound.svg'), stdout.splitlines())
            self.assertIn(self.path('histogram.svg'), stdout.splitlines())

    def test_seed_and_workers(self):
        with self.tmpcrndir():
            config = self.write_config(seed=1)
            first = os.path.join(crn_settings.CRN_DIR, 'first')
            second = os.path.join(crn_settings.CRN_DIR, 'second')
            self.cmd('bound', '--config=%s' % config, '--no-plot', '--workers=1', '--out=%s' % first)
            self.cmd('bound', '--config=%s' % config, '--no-plot', '--workers=3', '--out=%s' % second)
            for name in ['bound.json', 'bound.csv', 'histogram.csv', 'manifest.json']:
                self.assertEqual(self.read(os.path.join(first, name)), self.read(os.path.join(second, name)))
            self.assertEqual(self.load_json(os.path.join(first, 'bound.json'))['seed'], 1)

            # --seed overrides the seed of the configuration
            self.cmd('bound', '--config=%s' % config, '--no-plot', '--seed=2', '--out=%s' % second)
            self.assertEqual(self.load_json(os.path.join(second, 'bound.json'))['seed'], 2)
            self.assertEqual(self.load_json(os.path.join(second, 'manifest.json'))['seed'], 2)
            self.assertNotEqual(self.read(os.path.join(first, 'histogram.csv')),
                                self.read(os.path.join(second, 'histogram.csv')))

    def test_quadrature(self):
        with self.tmpcrndir():
            config = self.write_config(L=None)
            stdout, stderr = self.cmd('bound', '--config=%s' % config, '--no-plot')
            self.assertRegex(stdout.splitlines()[0], r'^K = \S+ \(L-based\), L = ')
            self.assertEqual(stderr, '')

            report = self.load_json(self.path('bound.json'))
            self.assertEqual(report['K_provenance'], 'L-based')
            self.assertEqual(report['L'], report['L_quadrature'])
            self.assertIs(report['L_certified'], True)

    def test_example(self):
        with self.tmpcrndir():
            stdout, stderr = self.cmd('bound', '--example=gibbs-regression', '--no-plot')
            lines = stdout.splitlines()
            self.assertRegex(lines[0], K_LINE)
            self.assertEqual(len(lines), 2 + 101 + 4)

            report = self.load_json(self.path('bound.json'))
            self.assertEqual(report['replicates'], 1000)
            self.assertEqual(report['n_report'], 25)
            self.assertEqual(report['alpha_prime'], 10.5)
            self.assertIs(report['L_certified'], False)
            self.assertRegex(stderr, NOT_CERTIFIED)

    def test_errors(self):
        with self.tmpcrndir():
            with self.assertCommandError(r'^Error: one of the arguments --config --example is required$'):
                self.cmd('bound')
            with self.assertCommandError(r'^Error: argument --example: not allowed with argument --config$'):
                self.cmd('bound', '--config=foo.json', '--example=gibbs-regression')
            with self.assertCommandError(r'^Error: --workers must be at least 1\.$'):
                self.cmd('bound', '--example=gibbs-regression', '--workers=0')

            path = os.path.join(crn_settings.CRN_DIR, 'missing.json')
            with self.assertCommandError(r'^%s: File not found\.$' % re.escape(path), returncode=2):
                self.cmd('bound', '--config=%s' % path)

            path = os.path.join(crn_settings.CRN_DIR, 'invalid.json')
            with open(path, 'w') as stream:
                stream.write('{')
            with self.assertCommandError(r'^%s: Invalid JSON: ' % re.escape(path), returncode=2):
                self.cmd('bound', '--config=%s' % path)

            with self.assertCommandError(r'^n_report: 20: Must be between 0 and N \(10\)$', returncode=2):
                self.cmd('bound', '--config=%s' % self.write_config(n_report=20))

            dataset = os.path.join(crn_settings.CRN_DIR, 'missing.csv')
            with self.assertCommandError(r'^%s: File not found\.$' % re.escape(dataset), returncode=2):
                self.cmd('bound', '--config=%s' % self.write_config(dataset=dataset))

    def test_exit_status(self):
        with self.tmpcrndir():
            self.assertE2EExit(['bound', '--config=%s' % self.write_config(I=0)], 2)
