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

import io

import numpy as np

from ..bounds import DensityPair
from ..bounds import RejectionConstant
from ..bounds import k_from_unnormalized
from ..bounds import rejection_constant
from ..bounds import rejection_sample
from ..bounds import separation_distance
from ..bounds import stationarity_bound
from ..chains import ar1
from ..constants import Coupling
from ..constants import Provenance
from ..errors import UsageError
from ..estimators import EstimateReport
from ..estimators import algorithm1
from ..ifs import from_distribution
from ..rng import DistributionSpec
from .base import CRNTestCase


def estimate_report(means, se, p=1):
    return EstimateReport(means=np.array(means, dtype=float), se=np.array(se, dtype=float), replicates=10,
                          horizon=len(means) - 1, p=p, coupling=Coupling.crn, seed=1)


class RejectionConstantTestCase(CRNTestCase):
    exp1 = DistributionSpec.exponential(1)

    def test_identical(self):
        specs = [DistributionSpec.normal(1, 2), DistributionSpec.gamma(2.5, 3), DistributionSpec.beta(2, 3),
                 DistributionSpec.inverse_gamma(10.5, 5)]
        for spec in specs:
            with self.subTest(spec=str(spec)):
                pair = DensityPair(spec, spec)
                constant = rejection_constant(pair, grid_points=1000)
                self.assertAlmostEqual(constant.value, 1.0, places=9)
                self.assertAlmostEqual(separation_distance(pair, grid_points=1000), 0.0, places=9)
                self.assertEqual(constant.provenance, Provenance.grid)
                self.assertTrue(constant.lower_estimate)

    def test_exponential(self):
        pair = DensityPair(self.exp1, DistributionSpec.exponential(0.5))
        constant = rejection_constant(pair)
        self.assertAlmostEqual(constant.value, 2.0, places=9)
        self.assertAlmostEqual(constant.separation, 0.5, places=9)
        self.assertFalse(constant.vacuous)
        self.assertEqual(float(constant), constant.value)

    def test_unbounded(self):
        pair = DensityPair(self.exp1, DistributionSpec.exponential(2))
        with self.assertLogs('django_crn.bounds', 'WARNING'):
            constant = rejection_constant(pair)
        self.assertTrue(constant.vacuous)
        self.assertEqual(constant.value, np.inf)
        self.assertEqual(constant.separation, 1.0)

    def test_wider_proposal(self):
        pair = DensityPair(DistributionSpec.normal(0, 1), DistributionSpec.normal(0, 2))
        self.assertAlmostEqual(rejection_constant(pair).value, 2.0, places=7)

    def test_narrower_proposal(self):
        pair = DensityPair(DistributionSpec.normal(0, 2), DistributionSpec.normal(0, 1))
        with self.assertLogs('django_crn.bounds', 'WARNING'):
            self.assertTrue(rejection_constant(pair).vacuous)

    def test_analytic(self):
        pair = DensityPair(self.exp1, DistributionSpec.exponential(0.5), ratio_sup=2)
        constant = rejection_constant(pair, method='analytic')
        self.assertEqual(constant.value, 2.0)
        self.assertEqual(constant.provenance, Provenance.analytic)
        self.assertFalse(constant.lower_estimate)
        self.assertEqual(constant.to_dict(), {'value': 2.0, 'provenance': 'analytic', 'lower_estimate': False,
                                              'vacuous': False, 'separation': 0.5})

        # a normalized target can never be dominated by less than the proposal itself
        pair = DensityPair(self.exp1, DistributionSpec.exponential(0.5), ratio_sup=0.5)
        self.assertEqual(rejection_constant(pair, method='analytic').value, 1.0)

    def test_invalid(self):
        pair = DensityPair(self.exp1, self.exp1)
        with self.assertRaisesRegex(UsageError, 'no supremum was given'):
            rejection_constant(pair, method='analytic')
        with self.assertRaisesRegex(UsageError, r'^foo: Unknown method'):
            rejection_constant(pair, method='foo')
        with self.assertRaisesRegex(UsageError, r'^grid_points: 2: Must be at least 3$'):
            rejection_constant(pair, grid_points=2)
        with self.assertRaises(UsageError):
            DensityPair(self.exp1, lambda x: x)

    def test_unnormalized(self):
        nu = DistributionSpec.normal(0, 1)
        constant = k_from_unnormalized(nu.pdf, nu, 1)
        self.assertAlmostEqual(constant.value, 1.0, places=9)
        self.assertEqual(constant.provenance, Provenance.unnormalized)

        constant = k_from_unnormalized(lambda x: 2 * nu.pdf(x), nu, 2)
        self.assertAlmostEqual(constant.value, 1.0, places=9)

        # unnormalized targets are not clamped to 1
        constant = k_from_unnormalized(lambda x: 0.5 * nu.pdf(x), nu, 1)
        self.assertAlmostEqual(constant.value, 0.5, places=9)

        constant = k_from_unnormalized(nu.pdf, nu, 1.5, ratio_sup=3)
        self.assertEqual(constant.value, 2.0)
        self.assertFalse(constant.lower_estimate)

        with self.assertRaisesRegex(UsageError, r'^L: 0: Must be positive$'):
            k_from_unnormalized(nu.pdf, nu, 0)

    def test_rejection_sample(self):
        pair = DensityPair(self.exp1, DistributionSpec.exponential(0.5))
        stream = self.stream()
        rate = rejection_sample(pair, 2, 10 ** 6, stream)
        self.assertAllClose(rate, 0.5, rtol=0, atol=0.0015)
        self.assertEqual(stream.position, 2 * 10 ** 6)

        with self.assertRaises(UsageError):
            rejection_sample(pair, np.inf, 10, stream)
        with self.assertRaises(UsageError):
            rejection_sample(pair, 2, 0, stream)


class StationarityBoundTestCase(CRNTestCase):
    def test_identity(self):
        report = stationarity_bound(1, estimate_report([1, 0.5], [0.1, 0.05]))
        self.assertEqual(report.bounds.tolist(), [1, 0.5])
        self.assertEqual(report.bound_se.tolist(), [0.1, 0.05])
        self.assertEqual(report.K.provenance, Provenance.configured)
        self.assertEqual(report.separation, 0)

    def test_scaling(self):
        report = stationarity_bound(RejectionConstant(2.0, Provenance.analytic),
                                    estimate_report([1, 0.5], [0.1, 0.05]))
        self.assertEqual(report.bounds.tolist(), [2, 1])
        self.assertEqual(report.bound_se.tolist(), [0.2, 0.1])

    def test_typical_values(self):
        report = stationarity_bound(2.115, estimate_report([0.0014], [0.0001]))
        self.assertAlmostEqual(report.bounds[0], 0.002961)

    def test_p2(self):
        report = stationarity_bound(4, estimate_report([1, 0.25, 0], [0.1, 0.1, 0], p=2))
        self.assertEqual(report.bounds.tolist(), [2, 1, 0])
        # d sqrt(4 m) / dm = 1 / sqrt(m)
        self.assertAllClose(report.bound_se, [0.1, 0.2, 0])

    def test_vacuous(self):
        with self.assertLogs('django_crn.bounds', 'WARNING'):
            report = stationarity_bound(np.inf, estimate_report([1, 0.5], [0.1, 0.05]))
        self.assertTrue(report.vacuous)
        self.assertTrue(np.all(np.isinf(report.bounds)))
        self.assertEqual(report.separation, 1)

    def test_tv(self):
        report = stationarity_bound(2, estimate_report([1, 0.5], [0.1, 0.05]), tv_constant=10)
        self.assertEqual(report.tv_bounds.tolist(), [20, 10])
        self.assertEqual(report.tv_se.tolist(), [2, 1])
        self.assertEqual(list(report.rows())[1], {'n': 1, 'mean': 0.5, 'se': 0.05, 'bound': 1.0,
                                                  'bound_se': 0.1, 'tv_bound': 10.0, 'tv_se': 1.0})

    def test_tv_needs_p1(self):
        msg = r'^tv_constant: Total variation bounds need p = 1, got p = 2$'
        with self.assertRaisesRegex(UsageError, msg):
            stationarity_bound(4, estimate_report([1, 0.25], [0.1, 0.1], p=2), tv_constant=10)

    def test_negative(self):
        with self.assertRaises(UsageError):
            stationarity_bound(-1, estimate_report([1], [0]))

    def test_to_csv(self):
        stream = io.StringIO()
        stationarity_bound(2, estimate_report([1, 0.5], [0.25, 0])).to_csv(stream)
        self.assertEqual(stream.getvalue(), 'iteration,mean,se,bound,bound_se\n0,1,0.25,2,0.5\n1,0.5,0,1,0\n')
        csv = stationarity_bound(2, estimate_report([1], [0]), tv_constant=1).to_csv()
        self.assertEqual(csv.splitlines()[0], 'iteration,mean,se,bound,bound_se,tv_bound,tv_se')

    def test_to_dict(self):
        data = stationarity_bound(2, estimate_report([1], [0])).to_dict()
        self.assertEqual(data['K']['value'], 2)
        self.assertEqual(data['K']['provenance'], 'configured')
        self.assertFalse(data['vacuous'])
        self.assertIsNone(data['tv_constant'])

    def test_ar1(self):
        # the stationary law of the chain, and a proposal twice as wide in variance
        variance = 1 / 0.19
        target = DistributionSpec.normal(0, np.sqrt(variance))
        proposal = DistributionSpec.normal(0, np.sqrt(2 * variance))
        K = rejection_constant(DensityPair(target, proposal))
        self.assertAlmostEqual(K.value, np.sqrt(2), places=7)

        n = 50
        estimate = algorithm1(ar1(), from_distribution(target), from_distribution(proposal), n, 2000, p=2)
        report = stationarity_bound(K, estimate)
        steps = np.arange(n + 1)
        sd_n = np.sqrt(0.81 ** steps * 2 * variance + (1 - 0.81 ** steps) * variance)
        true_w2 = np.abs(sd_n - np.sqrt(variance))
        self.assertTrue(np.all(true_w2 <= report.bounds + 3 * report.bound_se))
