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

from ... import chains
from ..base import BaseCommand


class Command(BaseCommand):
    help = 'List registered chains.'

    def handle(self, **options):
        for entry in chains.chains:
            chain = entry.chain
            laws = ', '.join('%s ~ %s' % (name, spec)
                             for name, spec in zip(chain.theta_names, chain.theta_specs))
            self.stdout.write('%s: %s' % (entry.name, entry.description or chain.description))
            self.stdout.write('    theta: %s' % laws)
            self.stdout.write('    default inits: %s' % ', '.join('%g' % i for i in entry.default_inits))
            if chain.state_domain is not None:
                self.stdout.write('    domain: [%g, %g]' % chain.state_domain)
            if entry.citation:
                self.stdout.write('    citation: %s' % entry.citation)

            flags = []
            if chain.metadata.get('theorem_applicable') is False:
                flags.append('theorem-not-applicable')
            if chain.accept is not None:
                flags.append('records-acceptance')
            if flags:
                self.stdout.write('    flags: %s' % ', '.join(flags))
