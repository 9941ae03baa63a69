# Test collection wiring for pytest, mirroring ``dev.py test``.

import os
import sys

import django

_rootdir = os.path.dirname(os.path.realpath(__file__))
sys.path.insert(0, os.path.join(_rootdir, 'crn'))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "crn.test_settings")
django.setup()
