from supercalc import conf
from supercalc.management.base import JsonCommand
from supercalc.supermatrix import SuperMatrix, left_inverse, randomized_left_inverse


class Command(JsonCommand):
    help = 'Left inverse of a tall supermatrix; a seed selects a randomized one'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--left-inverse-seed', type=int, help='seed of the randomized left inverse')

    def compute(self, **options):
        document = self.load_document(options)
        matrix = SuperMatrix.from_json(document, self.num_generators(document), 'input')
        seed = conf.left_inverse_seed(options.get('left_inverse_seed'))
        inverse = left_inverse(matrix) if seed is None else randomized_left_inverse(matrix, seed)
        return {'left_inverse': inverse.to_json()}
