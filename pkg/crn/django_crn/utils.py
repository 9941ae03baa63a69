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

"""Output helpers shared by the management commands: JSON, CSV, manifests and SVG plots."""

import csv
import dataclasses
import hashlib
import json
import logging
import math
import os
from enum import Enum

import numpy as np
from matplotlib import rc_context
from matplotlib.figure import Figure

from django.core.serializers.json import DjangoJSONEncoder

from . import __version__
from . import crn_settings
from .rng import DistributionSpec

log = logging.getLogger(__name__)

#: Fixed salt for the ids matplotlib writes into SVG files, so identical plots are byte-identical.
SVG_HASH_SALT = 'django-crn'


class ReportEncoder(DjangoJSONEncoder):
    """JSON encoder that also handles numpy values, enums and report objects."""

    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        elif isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.floating):
            return float(o)
        elif isinstance(o, np.bool_):
            return bool(o)
        elif isinstance(o, Enum):
            return o.value
        elif isinstance(o, DistributionSpec):
            return str(o)
        elif hasattr(o, 'to_dict'):
            return o.to_dict()
        elif dataclasses.is_dataclass(o):
            return dataclasses.asdict(o)
        return super().default(o)


def sanitize(value):
    """Replace non-finite floats with ``None`` (JSON has no representation for them)."""
    if isinstance(value, dict):
        return {k: sanitize(v) for k, v in value.items()}
    elif isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    elif isinstance(value, np.ndarray):
        return sanitize(value.tolist())
    elif isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    elif hasattr(value, 'to_dict'):
        return sanitize(value.to_dict())
    return value


def dumps(value):
    """Canonical JSON: sorted keys, two-space indentation and a trailing newline."""
    return json.dumps(sanitize(value), cls=ReportEncoder, sort_keys=True, indent=2, allow_nan=False) + '\n'


def dump_json(value, path):
    with open(path, 'w') as stream:
        stream.write(dumps(value))
    log.debug('Wrote %s', path)
    return path


def format_float(value, float_format=None):
    if float_format is None:
        float_format = crn_settings.CRN_FLOAT_FORMAT
    return float_format % value


def write_csv(path, header, rows):
    """Write ``rows`` to ``path``; floats are formatted with ``CRN_FLOAT_FORMAT``."""
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    log.debug('Wrote %s', path)
    return path


def config_hash(options):
    """SHA-256 over the canonical JSON of ``options``."""
    canonical = json.dumps(sanitize(options), cls=ReportEncoder, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def write_manifest(directory, command, options, seed, files):
    """Write ``manifest.json`` describing how the files in ``directory`` were produced.

    ``options`` should only contain options that influence results, so that ``--workers`` or the
    output directory do not change the hash.
    """
    manifest = {
        'command': command,
        'options': options,
        'config_hash': config_hash(options),
        'seed': seed,
        'version': __version__,
        'files': sorted(os.path.basename(f) for f in files),
    }
    return dump_json(manifest, os.path.join(directory, 'manifest.json'))


def _figure():
    width, height = crn_settings.CRN_PLOT_SIZE
    return Figure(figsize=(width / 72, height / 72), dpi=72)


def _save(figure, path):
    with rc_context({'svg.hashsalt': SVG_HASH_SALT}):
        figure.savefig(path, format='svg', metadata={'Date': None})
    log.debug('Wrote %s', path)
    return path


def line_plot(path, x, series, title='', xlabel='', ylabel='', logy=False):
    """Save a line plot of ``series`` (a dict of label -> values) against ``x`` as SVG."""
    figure = _figure()
    axes = figure.subplots()
    for label, values in series.items():
        values = np.asarray(values, dtype=float)
        axes.plot(x, values, label=label, linewidth=1)
    if logy:
        axes.set_yscale('symlog', linthresh=1e-12)
    axes.set_title(title)
    axes.set_xlabel(xlabel)
    axes.set_ylabel(ylabel)
    if len(series) > 1:
        axes.legend()
    return _save(figure, path)


def histogram_plot(path, values, bins=50, title='', xlabel=''):
    figure = _figure()
    axes = figure.subplots()
    axes.hist(np.asarray(values, dtype=float), bins=bins)
    axes.set_title(title)
    axes.set_xlabel(xlabel)
    axes.set_ylabel('count')
    return _save(figure, path)


def parse_key_value(value):
    """Parse ``KEY=VALUE`` into ``(key, float(value))``."""
    key, sep, raw = value.partition('=')
    if not sep or not key:
        raise ValueError('%s: Must be given as KEY=VALUE' % value)
    try:
        return key.strip(), float(raw)
    except ValueError:
        raise ValueError('%s: Value is not a number' % value)
