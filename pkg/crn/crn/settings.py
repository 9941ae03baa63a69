# Django settings for the stand-alone crn project.

import os

import yaml

from django.core.exceptions import ImproperlyConfigured

try:
    from yaml import CLoader as Loader
except ImportError:
    from yaml import Loader

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SETTINGS_YAML = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'settings.yaml')

DEBUG = False

# django-crn stores nothing in a database, an in-memory database keeps Django happy.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

TIME_ZONE = 'UTC'
LANGUAGE_CODE = 'en-us'
USE_I18N = True
USE_TZ = False

SECRET_KEY = 'django-crn-has-no-secrets'

INSTALLED_APPS = [
    'django_crn',
]
CRN_CUSTOM_APPS = []

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'django_crn': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    }
}


def _yaml_files(path):
    """Yield the YAML files named by ``path``, a file or a directory of ``*.yaml`` files."""
    if not os.path.exists(path):
        raise ImproperlyConfigured('%s: No such file or directory.' % path)
    if not os.path.isdir(path):
        yield path
        return

    for name in sorted(os.listdir(path)):
        full_path = os.path.join(path, name)
        if name.endswith('.yaml') and not os.path.isdir(full_path):
            yield full_path


def _load_yaml(path):
    with open(path) as stream:
        data = yaml.load(stream, Loader=Loader)
    if not isinstance(data, dict):
        raise ImproperlyConfigured('%s: File is not a key/value mapping.' % path)
    return data


_settings_files = []
for _path in filter(None, os.environ.get('DJANGO_CRN_SETTINGS', '').split(':')):
    _settings_files += _yaml_files(os.path.join(BASE_DIR, _path))
if os.path.exists(SETTINGS_YAML):
    _settings_files.append(SETTINGS_YAML)

for _path in _settings_files:
    globals().update(_load_yaml(_path))

# DJANGO_CRN_* environment variables override files. Values are parsed as YAML scalars, so
# "DJANGO_CRN_CRN_DEFAULT_SEED=3" sets an integer.
for _key, _value in os.environ.items():
    if _key.startswith('DJANGO_CRN_') and _key != 'DJANGO_CRN_SETTINGS':
        globals()[_key[len('DJANGO_CRN_'):]] = yaml.load(_value, Loader=Loader)

INSTALLED_APPS = INSTALLED_APPS + CRN_CUSTOM_APPS
