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

# Register the setting_changed signal here. This should not be done in base.py, because then a test module
# that does not import base.py would not have the signal registered.

import importlib

from django.test.signals import setting_changed

from .. import chains
from .. import crn_settings


def reload_crn_settings(sender, setting, **kwargs):
    # WARNING:
    # * Do NOT reload any other modules here, as isinstance() no longer returns True for instances from
    #   reloaded modules
    # * Do NOT set module level attributes, as other modules will not see the new instance

    importlib.reload(crn_settings)
    chains.chains._reset()


setting_changed.connect(reload_crn_settings)
