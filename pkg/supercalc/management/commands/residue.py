from supercalc.codec import require_keys
from supercalc.grassmann import GrassmannElement
from supercalc.management.base import JsonCommand
from supercalc.superseries import SuperSeries, residue, residue_simple_pole


class Command(JsonCommand):
    help = ('Residue b_{-1} of a weight 1 series, or with "z0" (and optionally "theta0") '
            'the residue of (z - z0 - theta theta0)^-1 f for a weight 0 series f')

    def compute(self, **options):
        document = self.load_document(options)
        n = self.num_generators(document)
        require_keys(document, ('series',), 'input')
        series = SuperSeries.from_json(document['series'], n, 'series')
        if 'z0' not in document and 'theta0' not in document:
            return {'residue': residue(series).to_compact_json()}
        z0 = GrassmannElement.from_json(document.get('z0', '0'), n, 'z0')
        theta0 = GrassmannElement.from_json(document.get('theta0', '0'), n, 'theta0')
        return {'residue': residue_simple_pole(series, z0, theta0).to_compact_json()}
