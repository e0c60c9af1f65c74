from django.core.management.base import CommandError

from supercalc.management.base import EXIT_MALFORMED, JsonCommand
from supercalc.moduli_ranks import (
    RAMOND_J,
    ns_punctured_rank,
    ns_table,
    ramond_rank_row,
    ramond_table,
)


class Command(JsonCommand):
    help = 'Rank table of R^i pi_* omega^j for the Ramond or the Neveu-Schwarz family'
    takes_input = False

    def add_arguments(self, parser):
        parser.add_argument('--family', choices=('ramond', 'ns'), required=True)
        parser.add_argument('--g', type=int, required=True, help='genus')
        parser.add_argument('--nr', type=int, help='number of Ramond punctures')
        parser.add_argument('--nns', type=int, help='number of NS punctures, adds the rank of pi_* omega^3(N)')
        parser.add_argument('--detail', action='store_true',
                            help='also report the reduced and ideal parts of each Ramond row')

    def compute(self, **options):
        g = options['g']
        if options['family'] == 'ns':
            table = ns_table(g)
            if options.get('nns') is not None:
                table['punctured j=3, i=0'] = ns_punctured_rank(g, options['nns']).to_json()
            return table
        if options.get('nr') is None:
            raise CommandError('--nr is required for --family ramond', returncode=EXIT_MALFORMED)
        n_r = options['nr']
        table = ramond_table(g, n_r)
        if options.get('detail'):
            return {
                'table': table,
                'rows': {f'j={j}, i={i}': ramond_rank_row(g, n_r, j, i).to_json()
                         for i in (0, 1) for j in RAMOND_J},
            }
        return table
