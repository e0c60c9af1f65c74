from supercalc.management.base import JsonCommand
from supercalc.supermatrix import SuperMatrix, berezinian


class Command(JsonCommand):
    help = 'Berezinian of an even supermatrix given as {"num_generators", "row_layout", "col_layout", "entries"}'

    def compute(self, **options):
        document = self.load_document(options)
        matrix = SuperMatrix.from_json(document, self.num_generators(document), 'input')
        return {'ber': berezinian(matrix).to_compact_json()}
