from pathlib import Path

from supercalc.codec import dumps
from supercalc.management.base import JsonCommand
from supercalc.samples import sample_documents


class Command(JsonCommand):
    help = 'Write the fixture inputs (identity and seeded random data) as JSON files'
    takes_input = False

    def add_arguments(self, parser):
        parser.add_argument('--output-dir', default='samples', help='directory to write into')

    def compute(self, **options):
        target = Path(options['output_dir'])
        target.mkdir(parents=True, exist_ok=True)
        written = []
        for name, document in sample_documents().items():
            (target / name).write_text(dumps(document) + '\n', encoding='utf-8')
            written.append(name)
        return {'output_dir': str(target), 'written': written}
