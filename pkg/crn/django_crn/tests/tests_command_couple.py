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

import numpy as np

from .. import crn_settings
from ..chains import get_chain
from ..constants import Coupling
from ..estimators import algorithm1
from ..ifs import point_mass
from .base import CRNTestCase


class CoupleTestCase(CRNTestCase):
    def path(self, *parts):
        return os.path.join(crn_settings.CRN_DIR, 'couple', *parts)

    def test_basic(self):
        with self.tmpcrndir():
            stdout, stderr = self.cmd('couple', '--chain=ar1', '--n=5', '--replicates=20', '--no-plot')
            self.assertEqual(stderr, '')
            lines = stdout.splitlines()
            self.assertRegex(lines[0], r'^n=5: mean=29\.524\d*, se=')
            self.assertEqual(lines[1:], [self.path('report.json'), self.path('report.csv'),
                                         self.path('manifest.json')])
            self.assertEqual(sorted(os.listdir(self.path())), ['manifest.json', 'report.csv', 'report.json'])

            report = self.load_json(self.path('report.json'))
            self.assertEqual(report['chain'], 'ar1')
            self.assertEqual(report['coupling'], 'crn')
            self.assertEqual(report['replicates'], 20)
            self.assertEqual(report['horizon'], 5)
            self.assertEqual(report['seed'], crn_settings.CRN_DEFAULT_SEED)
            self.assertEqual(report['init_mu'], 'point mass at [25.0]')
            self.assertEqual(report['init_nu'], 'point mass at [-25.0]')
            self.assertEqual([i['n'] for i in report['iterations']], list(range(6)))

            # CRN contracts the AR(1) distance deterministically
            for item in report['iterations']:
                self.assertAlmostEqual(item['mean'], 50 * .9 ** item['n'], places=9)
                self.assertLess(item['se'], 1e-9)

            expected = algorithm1(get_chain('ar1'), point_mass(25.), point_mass(-25.), 5, 20)
            self.assertEqual(self.read(self.path('report.csv')), expected.to_csv())

            manifest = self.load_json(self.path('manifest.json'))
            self.assertEqual(manifest['command'], 'couple')
            self.assertEqual(manifest['files'], ['report.csv', 'report.json'])
            self.assertEqual(manifest['options'], {
                'chain': 'ar1', 'params': {}, 'n': 5, 'replicates': 20, 'p': 1.0, 'coupling': 'crn',
                'init_mu': 'point mass at [25.0]', 'init_nu': 'point mass at [-25.0]',
            })

    def test_plot(self):
        with self.tmpcrndir():
            stdout, stderr = self.cmd('couple', '--chain=logistic', '--n=10', '--replicates=10')
            self.assertIn(self.path('report.svg'), stdout.splitlines())
            self.assertTrue(self.read(self.path('report.svg')).startswith('<?xml'))
            self.assertEqual(self.load_json(self.path('manifest.json'))['files'],
                             ['report.csv', 'report.json', 'report.svg'])

    def test_workers(self):
        with self.tmpcrndir():
            single = os.path.join(crn_settings.CRN_DIR, 'single')
            threads = os.path.join(crn_settings.CRN_DIR, 'threads')
            args = ['couple', '--chain=trig', '--n=20', '--replicates=50', '--seed=9', '--no-plot']
            stdout_single, _ = self.cmd(*args, '--workers=1', '--out=%s' % single)
            stdout_threads, _ = self.cmd(*args, '--workers=4', '--out=%s' % threads)

            self.assertEqual(stdout_single.splitlines()[0], stdout_threads.splitlines()[0])
            for name in ['report.json', 'report.csv', 'manifest.json']:
                self.assertEqual(self.read(os.path.join(single, name)),
                                 self.read(os.path.join(threads, name)))

    def test_independent_larger(self):
        with self.tmpcrndir():
            crn_dir = os.path.join(crn_settings.CRN_DIR, 'crn')
            independent_dir = os.path.join(crn_settings.CRN_DIR, 'independent')
            args = ['couple', '--chain=ar1', '--n=20', '--replicates=100000', '--no-plot']
            self.cmd(*args, '--out=%s' % crn_dir)
            self.cmd(*args, '--coupling=independent', '--out=%s' % independent_dir)

            crn = self.load_json(os.path.join(crn_dir, 'report.json'))['iterations'][20]
            independent = self.load_json(os.path.join(independent_dir, 'report.json'))['iterations'][20]

        # CRN gives exactly 50 * 0.9^20, independent noise adds about 0.07 on average
        self.assertAlmostEqual(crn['mean'], 50 * .9 ** 20, places=9)
        se = np.hypot(crn['se'], independent['se'])
        self.assertGreater(independent['mean'] - crn['mean'], 3 * se)

    def test_options(self):
        with self.tmpcrndir():
            self.cmd('couple', '--chain=logistic', '--param=a=2', '--x0=0.2', '--y0=0.8', '--n=3',
                     '--replicates=10', '--p=2', '--coupling=independent', '--seed=4', '--no-plot')
            report = self.load_json(self.path('report.json'))
            self.assertEqual(report['coupling'], 'independent')
            self.assertEqual(report['p'], 2.0)
            self.assertEqual(report['seed'], 4)
            self.assertEqual(report['init_mu'], 'point mass at [0.2]')
            self.assertEqual(report['init_nu'], 'point mass at [0.8]')

            expected = algorithm1(get_chain('logistic', a=2.), point_mass(.2), point_mass(.8), 3, 10, p=2,
                                  mode=Coupling.independent, seed=4)
            self.assertEqual(self.read(self.path('report.csv')), expected.to_csv())

            options = self.load_json(self.path('manifest.json'))['options']
            self.assertEqual(options['params'], {'a': 2.0})
            self.assertEqual(options['coupling'], 'independent')
            self.assertEqual(options['p'], 2.0)

    def test_distributions(self):
        with self.tmpcrndir():
            self.cmd('couple', '--chain=ar1', '--init-mu=normal:0,1', '--init-nu=normal:5,1', '--x0=100',
                     '--n=5', '--replicates=100', '--no-plot')
            report = self.load_json(self.path('report.json'))

            # distributions take precedence over point masses
            self.assertEqual(report['init_mu'], 'normal(0, 1)')
            self.assertEqual(report['init_nu'], 'normal(5, 1)')
            self.assertLess(report['iterations'][0]['mean'], 10)

    def test_errors(self):
        with self.tmpcrndir():
            with self.assertCommandError(r'^Error: --p must be at least 1\.$'):
                self.cmd('couple', '--chain=ar1', '--p=0.5')
            with self.assertCommandError(r'^Error: --replicates must be at least 1\.$'):
                self.cmd('couple', '--chain=ar1', '--replicates=0')
            with self.assertCommandError(r'^Error: --n must be at least 1\.$'):
                self.cmd('couple', '--chain=ar1', '--n=0')
            with self.assertCommandError(r'^Error: foo: Unknown coupling, use one of '):
                self.cmd('couple', '--chain=ar1', '--coupling=foo')
            with self.assertCommandError(r'^Error: normal: Could not parse distribution'):
                self.cmd('couple', '--chain=ar1', '--init-mu=normal')
            with self.assertCommandError(r'^logistic: Initial state .* outside of ', returncode=2):
                self.cmd('couple', '--chain=logistic', '--y0=1.5', '--replicates=1', '--n=2')

    def test_exit_status(self):
        with self.tmpcrndir():
            self.assertE2EExit(['couple', '--chain=logistic', '--x0=-1', '--replicates=2', '--n=2'], 2)
