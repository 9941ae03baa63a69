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
from scipy import special
from scipy import stats

from .. import ifs
from ..chains import ar1
from ..chains import random_logistic
from ..chains import trig_chain
from ..constants import Coupling
from ..constants import Direction
from ..errors import DomainError
from ..errors import NumericError
from ..errors import UsageError
from ..ifs import ChainModel
from ..rng import DistributionSpec
from ..rng import RecordedStream
from ..rng import UniformStream
from .base import CRNTestCase


def exploding_chain():
    return ChainModel(name='explode', state_dim=1, theta_specs=(DistributionSpec.uniform(0, 1), ),
                      update=lambda theta, x: x * 1e200)


class ChainModelTestCase(CRNTestCase):
    def test_basic(self):
        chain = ar1()
        self.assertEqual(chain.theta_dim, 1)
        self.assertEqual(repr(chain), '<ChainModel: ar1>')
        self.assertEqual(chain.step([0.0], [10.0]).tolist(), [9.0])

    def test_as_states(self):
        chain = ar1()
        self.assertEqual(chain.as_states(1.0).shape, (1, 1))
        self.assertEqual(chain.as_states(1.0, replicates=3).shape, (3, 1))
        with self.assertRaises(UsageError):
            chain.as_states([1.0, 2.0])

    def test_as_function(self):
        f = random_logistic().as_function()
        self.assertEqual(f(np.array([0.5, 1.0]), 0.5).tolist(), [0.5, 1.0])

        chain = ChainModel(name='two', state_dim=1, theta_specs=(DistributionSpec.normal(), ) * 2,
                           update=lambda theta, x: x)
        with self.assertRaisesRegex(UsageError, 'Only chains with scalar state and scalar theta'):
            chain.as_function()

    def test_invalid(self):
        with self.assertRaises(UsageError):
            ChainModel(name='empty', state_dim=1, theta_specs=(), update=lambda theta, x: x)
        with self.assertRaises(UsageError):
            ChainModel(name='empty', state_dim=0, theta_specs=(DistributionSpec.normal(), ),
                       update=lambda theta, x: x)


class SimulateForwardTestCase(CRNTestCase):
    def test_one_step(self):
        u = 0.3
        trajectory = ifs.simulate_forward(ar1(), 25.0, RecordedStream([u]), 1)
        self.assertEqual(trajectory.states[1, 0], 0.9 * 25 + special.ndtri(u))

    def test_zero_steps(self):
        stream = self.stream()
        trajectory = ifs.simulate_forward(ar1(), 25.0, stream, 0)
        self.assertEqual(trajectory.states.tolist(), [[25.0]])
        self.assertEqual(stream.position, 0)
        self.assertEqual(trajectory.horizon, 0)

    def test_draw_count(self):
        stream = self.stream()
        trajectory = ifs.simulate_forward(ar1(), 25.0, stream, 50)
        self.assertEqual(len(trajectory), 51)
        self.assertEqual(stream.position, 50)
        self.assertEqual(trajectory.direction, Direction.forward)

    def test_logistic_domain(self):
        trajectory = ifs.simulate_forward(random_logistic(), 0.99, self.stream(), 10 ** 4)
        self.assertTrue(np.all(trajectory.states >= 0))
        self.assertTrue(np.all(trajectory.states <= 1))

    def test_outside_domain(self):
        with self.assertRaisesRegex(DomainError, r'^logistic: Initial state'):
            ifs.simulate_forward(random_logistic(), 2.0, self.stream(), 10)

    def test_negative_n(self):
        with self.assertRaises(UsageError):
            ifs.simulate_forward(ar1(), 0.0, self.stream(), -1)

    def test_non_finite(self):
        with np.errstate(over='ignore'):
            with self.assertRaisesRegex(NumericError, r'iteration 2') as cm:
                ifs.simulate_forward(exploding_chain(), 1.0, self.stream(replicate_id=3), 5)
        self.assertEqual(cm.exception.iteration, 2)
        self.assertEqual(cm.exception.replicate, 3)

    def test_to_csv(self):
        stream = io.StringIO()
        ifs.simulate_forward(ar1(), 25.0, RecordedStream([0.5]), 1).to_csv(stream)
        self.assertEqual(stream.getvalue(), 'iteration,coordinate,value\n0,0,25\n1,0,22.5\n')


class SimulateBackwardTestCase(CRNTestCase):
    def test_one_step(self):
        forward = ifs.simulate_forward(ar1(), 25.0, self.stream(), 1)
        backward = ifs.simulate_backward(ar1(), 25.0, self.stream(), 1)
        self.assertEqual(forward.states.tolist(), backward.states.tolist())
        self.assertEqual(backward.direction, Direction.backward)

    def test_composition(self):
        chain = ar1()
        u = [0.2, 0.7, 0.4]
        theta = DistributionSpec.normal().inv_cdf(np.array(u))
        backward = ifs.simulate_backward(chain, 1.0, RecordedStream(u), 3)

        # x̃_3 = f(θ_1, f(θ_2, f(θ_3, x_0)))
        expected = 0.9 * (0.9 * (0.9 * 1.0 + theta[2]) + theta[1]) + theta[0]
        self.assertAlmostEqual(backward.states[3, 0], expected, places=12)
        expected = 0.9 * (0.9 * 1.0 + theta[1]) + theta[0]
        self.assertAlmostEqual(backward.states[2, 0], expected, places=12)

    def test_differs_from_forward(self):
        forward = ifs.simulate_forward(ar1(), 25.0, self.stream(), 10)
        backward = ifs.simulate_backward(ar1(), 25.0, self.stream(), 10)
        self.assertNotEqual(forward.states[5, 0], backward.states[5, 0])

    def test_flattens(self):
        backward = ifs.simulate_backward(ar1(), 25.0, self.stream(), 400)
        self.assertLess(abs(backward.states[400, 0] - backward.states[399, 0]), 1e-6)

    def test_marginals_agree(self):
        chain = ar1()
        forward = ifs.simulate_replicates(chain, 25.0, 1, range(10 ** 4), 30)[:, 30, 0]
        backward = ifs.simulate_replicates(chain, 25.0, 2, range(10 ** 4), 30, direction=Direction.backward)
        result = stats.ks_2samp(forward, backward[:, 30, 0])
        self.assertGreater(result.pvalue, 0.01)

    def test_replicates_match_single_runs(self):
        chain = trig_chain()
        batch = ifs.simulate_replicates(chain, 0.75, 5, [3, 4], 20, direction=Direction.backward)
        single = ifs.simulate_backward(chain, 0.75, UniformStream(5, 4), 20)
        np.testing.assert_allclose(batch[1], single.states, rtol=1e-15)


class SimulateCoupledTestCase(CRNTestCase):
    def test_ar1_crn(self):
        stream = self.stream()
        run = ifs.simulate_coupled(ar1(), 25.0, -25.0, stream, None, 50)
        self.assertAllClose(run.distances, 0.9 ** np.arange(51) * 50)
        self.assertEqual(stream.position, 50)
        self.assertEqual(run.coupling, Coupling.crn)

    def test_same_start(self):
        run = ifs.simulate_coupled(trig_chain(), 0.3, 0.3, self.stream(), None, 100)
        self.assertEqual(run.distances.tolist(), [0.0] * 101)

    def test_coalescence_absorbing(self):
        # both 0 and 1 are mapped to 0 in the first step
        run = ifs.simulate_coupled(random_logistic(), 0.0, 1.0, self.stream(), None, 100)
        self.assertEqual(run.distances[0], 1.0)
        self.assertEqual(run.distances[1:].tolist(), [0.0] * 100)

    def test_logistic_contracts(self):
        chain = random_logistic()
        x, y = ifs.couple_replicates(chain, 0.99, 0.1, 1, range(100), 100)
        distances = np.abs(x[:, 100, 0] - y[:, 100, 0])
        self.assertGreaterEqual(np.mean(distances < 1e-3), 0.95)

    def test_antithetic(self):
        stream = self.stream()
        run = ifs.simulate_coupled(ar1(), 0.0, 0.0, stream, None, 1, mode=Coupling.antithetic)
        self.assertAlmostEqual(run.x_traj.states[1, 0], -run.y_traj.states[1, 0], places=12)
        self.assertEqual(stream.position, 1)

    def test_independent(self):
        stream = self.stream()
        partner = stream.partner()
        run = ifs.simulate_coupled(ar1(), 0.0, 0.0, stream, partner, 10, mode=Coupling.independent)
        self.assertEqual(stream.position, 10)
        self.assertEqual(partner.position, 10)
        self.assertNotEqual(run.distances[10], 0)

        with self.assertRaisesRegex(UsageError, 'requires a partner stream'):
            ifs.simulate_coupled(ar1(), 0.0, 0.0, self.stream(), None, 10, mode=Coupling.independent)

    def test_batch_matches_single(self):
        chain = ar1()
        x, y = ifs.couple_replicates(chain, 25.0, -25.0, 9, [0, 1, 2], 20, mode=Coupling.independent)
        stream = UniformStream(9, 2)
        run = ifs.simulate_coupled(chain, 25.0, -25.0, stream, stream.partner(), 20,
                                   mode=Coupling.independent)
        np.testing.assert_array_equal(x[2], run.x_traj.states)
        np.testing.assert_array_equal(y[2], run.y_traj.states)

    def test_grouping(self):
        chain = random_logistic()
        all_states = ifs.simulate_replicates(chain, 0.5, 3, range(10), 20)
        parts = [ifs.simulate_replicates(chain, 0.5, 3, ids, 20) for ids in [range(4), range(4, 10)]]
        np.testing.assert_array_equal(all_states, np.concatenate(parts))

    def test_to_csv(self):
        stream = io.StringIO()
        ifs.simulate_coupled(ar1(), 1.0, -1.0, RecordedStream([0.5]), None, 1).to_csv(stream)
        self.assertEqual(stream.getvalue().splitlines(), [
            'iteration,coordinate,x,y,distance',
            '0,0,1,-1,2',
            '1,0,0.90000000000000002,-0.90000000000000002,1.8000000000000000',
        ])

    def test_samplers(self):
        self.assertEqual(ifs.point_mass(2.0)(self.stream()).tolist(), [2.0])
        spec = DistributionSpec.normal(0, 1)
        stream = self.stream()
        self.assertEqual(ifs.from_distribution(spec)(stream).tolist(),
                         [spec.inv_cdf(self.stream().next_uniform())])
        self.assertEqual(stream.position, 1)
