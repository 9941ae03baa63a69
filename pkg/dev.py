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

import argparse
import os
import shutil
import subprocess
import sys
import warnings

import packaging.version  # isort:skip

import numpy  # isort:skip
import scipy  # isort:skip

import django  # isort:skip

test_base = argparse.ArgumentParser(add_help=False)
test_base.add_argument('-s', '--suites', default=[], nargs='+',
                       help="Modules to test (e.g. tests_estimators).")

parser = argparse.ArgumentParser(
    description='Helper-script for various tasks during development.'
)
commands = parser.add_subparsers(dest='command')
cq_parser = commands.add_parser('code-quality', help='Run various checks for coding standards.')
ti_parser = commands.add_parser('test-imports', help='Import django-crn modules to test dependencies.')

test_parser = commands.add_parser('test', parents=[test_base])
cov_parser = commands.add_parser('coverage', parents=[test_base])
cov_parser.add_argument('-f', '--format', choices=['html', 'text'], default='html',
                        help='Write coverage report as text (default: %(default)s).')
cov_parser.add_argument('--fail-under', type=int, default=100, metavar='[0-100]',
                        help='Fail if coverage is below given percentage (default: %(default)s%%).')

commands.add_parser('clean', help="Remove generated files.")
args = parser.parse_args()

_rootdir = os.path.dirname(os.path.realpath(__file__))


def setup_django(settings_module="crn.test_settings"):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", settings_module)
    sys.path.insert(0, os.path.join(_rootdir, 'crn'))

    django.setup()


def test(suites):
    warnings.filterwarnings(action='always')
    warnings.filterwarnings(action='error', module='django_crn')

    work_dir = os.path.join(_rootdir, 'crn')

    os.chdir(work_dir)
    sys.path.insert(0, work_dir)

    suites = ['django_crn.tests.%s' % s.strip('.') for s in suites]

    from django.core.management import call_command
    call_command('test', *suites)


def remove(path):
    if os.path.isdir(path):
        print('rm -r', path)
        shutil.rmtree(path)
    elif os.path.exists(path):
        print('rm', path)
        os.remove(path)


# Versions each library is tested with. Coverage ignores code marked for other versions, for example
# "pragma: only numpy<1.18".
PRAGMA_VERSIONS = {
    'py': [(3, 6), (3, 7), (3, 8), (3, 9)],
    'django': [(3, 1), (3, 2)],
    'numpy': [(1, 17), (1, 18), (1, 19)],
    'scipy': [(1, 4), (1, 5)],
}

# operators that are *false* for a pragma version relative to the installed one
_FALSE_OPERATORS = {
    -1: ('==', '<', '<='),  # pragma version older than the installed version
    0: ('>', '<'),
    1: ('==', '>', '>='),
}


def installed_versions():
    versions = {
        'py': sys.version_info[:2],
        'django': django.VERSION[:2],
    }
    for lib in (numpy, scipy):
        versions[lib.__name__] = packaging.version.parse(lib.__version__).release[:2]
    return versions


def exclude_pragmas(cov):
    installed = installed_versions()
    for lib, versions in PRAGMA_VERSIONS.items():
        for version in versions:
            order = (version > installed[lib]) - (version < installed[lib])
            version_str = '.'.join(str(v) for v in version)
            for op in _FALSE_OPERATORS[order]:
                cov.exclude(r'pragma: only %s%s%s' % (lib, op, version_str))


def check_call(*cmd, **kwargs):
    print(' '.join(cmd))
    status = subprocess.call(cmd, **kwargs)
    if status != 0:
        sys.exit(status)


if args.command == 'test':
    setup_django()
    test(args.suites)
elif args.command == 'coverage':
    import coverage

    tox_dir = os.environ.get('TOX_ENV_DIR')
    if tox_dir:
        report_dir = os.path.join(tox_dir, 'coverage')
        data_file = os.path.join(tox_dir, '.coverage')
    else:
        report_dir = os.path.join(_rootdir, 'docs', 'build', 'coverage')
        data_file = None

    cov = coverage.Coverage(data_file=data_file, cover_pylib=False, branch=True, source=['django_crn'],
                            omit=['*/tests/tests*', ])
    exclude_pragmas(cov)

    cov.start()
    setup_django()
    test(args.suites)
    cov.stop()
    cov.save()

    if args.format == 'text':
        percent = cov.report()
    else:
        percent = cov.html_report(directory=report_dir)

    if percent < args.fail_under:
        print('Error: Coverage is %.2f%%, required is %d%%.' % (percent, args.fail_under))
        sys.exit(2)  # same status as the coverage cli utility
elif args.command == 'code-quality':
    sources = ['crn/', 'setup.py', 'dev.py']
    check_call('isort', '--check-only', '--diff', '-rc', *sources)
    check_call('flake8', *sources)

    setup_django('crn.test_settings')
    check_call('python', '-Wd', 'manage.py', 'check', cwd=os.path.join(_rootdir, 'crn'))
elif args.command == 'test-imports':
    setup_django('crn.settings')

    # loads YAML settings files, if any
    from django.conf import settings  # NOQA

    # fails if any runtime dependency is missing
    from django_crn import bounds  # NOQA
    from django_crn import chains  # NOQA
    from django_crn import estimators  # NOQA
    from django_crn import gibbs  # NOQA
    from django_crn import utils  # NOQA
elif args.command == 'clean':
    generated = [
        ('docs', 'build'), ('.tox', ), ('dist', ), ('build', ), ('.coverage', ), ('.hypothesis', ),
        ('crn', 'files'), ('crn', '.hypothesis'),
    ]
    for path in generated:
        remove(os.path.join(_rootdir, *path))

    for root, dirs, files in os.walk(_rootdir, topdown=False):
        if os.path.join(_rootdir, 'examples') in root:
            continue
        for name in files:
            if name.endswith('.pyc'):
                remove(os.path.join(root, name))
        for name in dirs:
            if name == '__pycache__' or name.endswith('.egg-info'):
                remove(os.path.join(root, name))
else:
    parser.print_help()
