from supercalc.management.base import JsonCommand
from supercalc.mumford import NSInput, RamondInput
from supercalc.supermatrix import SuperMatrix


class Command(JsonCommand):
    help = 'Check sizes and parities of an input document without computing anything'

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=('ramond', 'ns', 'matrix'))
        super().add_arguments(parser)

    def compute(self, **options):
        document = self.load_document(options)
        kind = options['kind']
        if kind == 'matrix':
            return SuperMatrix.from_json(document, self.num_generators(document), 'input').validate_parity().to_json()
        if kind == 'ramond':
            data = RamondInput.from_json(document)
            data.validate()
            return {'valid': True, 'r': data.r}
        data = NSInput.from_json(document)
        data.validate()
        return {'valid': True, 'points': data.g - 1}
