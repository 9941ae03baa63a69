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

# WARNING: This module MUST NOT include any dependencys, as it is read by setup.py

# https://www.python.org/dev/peps/pep-0440/
VERSION = (0, 4, 0, 'dev', 1)

# __version__ specified in PEP 0396, but we use PEP 0440 format instead of PEP 0386.
__version__ = '0.4.0.dev1'
default_app_config = 'django_crn.apps.DjangoCRNConfig'
