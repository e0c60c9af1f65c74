from django.core.management.base import CommandError

from supercalc import conf
from supercalc.management.base import EXIT_MALFORMED, JsonCommand
from supercalc.mumford import NSInput, RamondInput, mumford_ns, mumford_ns_punctured, mumford_ramond


class Command(JsonCommand):
    help = 'Super Mumford form coefficient from local expansion data'

    def add_arguments(self, parser):
        parser.add_argument('family', choices=('ramond', 'ns'))
        super().add_arguments(parser)
        parser.add_argument('--left-inverse-seed', type=int,
                            help='use seeded randomized left inverses instead of the deterministic ones')
        parser.add_argument('--punctured', action='store_true',
                            help='NS only: divide by Ber M\' of the n_NS punctures')

    def compute(self, **options):
        document = self.load_document(options)
        seed = conf.left_inverse_seed(options.get('left_inverse_seed'))
        if options['family'] == 'ramond':
            if options.get('punctured'):
                raise CommandError('--punctured applies to the ns family only', returncode=EXIT_MALFORMED)
            return mumford_ramond(RamondInput.from_json(document), left_inverse_seed=seed).to_json()
        data = NSInput.from_json(document)
        if options.get('punctured'):
            return mumford_ns_punctured(data, left_inverse_seed=seed).to_json()
        return mumford_ns(data, left_inverse_seed=seed).to_json()
