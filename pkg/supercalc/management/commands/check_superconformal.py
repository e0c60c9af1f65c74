import random

from supercalc import conf
from supercalc.management.base import JsonCommand
from supercalc.superconformal import (
    CoordinateChange,
    quotient_change_matrix,
    ramond_boundary_constraints,
    random_ramond_change,
)
from supercalc.supermatrix import berezinian


class Command(JsonCommand):
    help = ('Check a coordinate change {"num_generators", "f", "lambda", "psi", "g"} for '
            'superconformality, with and without a Ramond puncture at the origin')

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--trunc-order', type=int, help='compare series up to this order')
        parser.add_argument('--branch-sign', type=int, choices=(1, -1),
                            help='sign of g(0) for generated changes')
        parser.add_argument('--generate-ramond', type=int, metavar='SEED',
                            help='check a random Ramond change drawn with this seed instead of an input')
        parser.add_argument('--num-generators', type=int, default=2,
                            help='generator count of generated changes')

    def compute(self, **options):
        order = conf.trunc_order(options.get('trunc_order'))
        seed = options.get('generate_ramond')
        if seed is None:
            change = CoordinateChange.from_json(self.load_document(options), 'input')
        else:
            sign = conf.branch_sign(options.get('branch_sign'))
            change = random_ramond_change(random.Random(seed), order + 1, options['num_generators'], sign)
        change = CoordinateChange(change.f.truncate(order), change.lam.truncate(order),
                                  change.psi.truncate(order), change.g.truncate(order))
        ramond = change.is_ramond_superconformal()
        report = {
            'superconformal': change.is_superconformal(),
            'ramond_superconformal': ramond,
            'constraints': None,
            'quotient_ber': None,
        }
        if ramond:
            g_squared, product = ramond_boundary_constraints(change)
            report['constraints'] = [g_squared.to_compact_json(), product.to_compact_json()]
            report['quotient_ber'] = berezinian(quotient_change_matrix(change)).to_compact_json()
        if seed is not None:
            report['change'] = change.to_json()
        return report
