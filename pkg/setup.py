#!/usr/bin/env python3
#
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

from setuptools import setup

long_description = """django-crn estimates how far a Markov chain is from its stationary distribution. It
simulates two copies of a chain driven by common random numbers, estimates the expected distance between them
and turns that estimate into an upper bound on the Wasserstein and total variation distance to stationarity.
It is based on `NumPy <https://numpy.org/>`_, `SciPy <https://www.scipy.org/>`_ and `Django
<https://www.djangoproject.com/>`_. Everything is available from Python and via ``manage.py`` commands.

Features:

* Reproducible parallel simulation of iterated random function systems from a single seed.
* Forward and backward processes, coupled under common, antithetic or independent random numbers.
* Monte Carlo estimates of E|X_n - Y_n|^p with standard errors and quantile-coupling oracles.
* Rejection constants from density ratios and stationarity bounds for a Gibbs sampler.

Please see the documentation in ``docs/`` for more extensive information.
"""

install_requires = [
    'django>=3.1',
    'numpy>=1.17',
    'scipy>=1.4',
    'matplotlib>=3.1',
    'joblib>=0.14',
    'PyYAML>=5.1',
    'packaging',
]


def find_package_data(dir):
    data = []
    package_root = os.path.join('crn', 'django_crn')
    for root, dirs, files in os.walk(os.path.join(package_root, dir)):
        for file in files:
            data.append(os.path.relpath(os.path.join(root, file), package_root))
    return data


package_data = find_package_data('data')

setup(
    name='django-crn',
    version='0.4.0.dev1',
    description='A Django app bounding the convergence of Markov chains with common random numbers.',
    long_description=long_description,
    packages=[
        'django_crn',
        'django_crn.management',
        'django_crn.management.commands',
    ],
    package_dir={'': 'crn'},
    package_data={'django_crn': package_data},
    python_requires='>=3.6',
    zip_safe=False,  # because of the bundled data files
    install_requires=install_requires,
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Framework :: Django :: 3.1',
        'Framework :: Django',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
