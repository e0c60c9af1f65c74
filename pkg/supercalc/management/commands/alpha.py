from supercalc.codec import require_keys
from supercalc.management.base import JsonCommand
from supercalc.superseries import SuperSeries, alpha


class Command(JsonCommand):
    help = 'One-form dtheta f + varpi D_theta f attached to a weight 1 series f'

    def compute(self, **options):
        document = self.load_document(options)
        n = self.num_generators(document)
        require_keys(document, ('series',), 'input')
        return alpha(SuperSeries.from_json(document['series'], n, 'series')).to_json()
