import logging
import sys
from pathlib import Path
from typing import Any, Dict

from django.core.management.base import BaseCommand, CommandError

from supercalc.codec import dumps, loads, parse_int, require_keys
from supercalc.exceptions import MalformedInput, SuperCalcError

logger = logging.getLogger('supercalc.commands')

EXIT_MALFORMED = 1
EXIT_DOMAIN = 2


class JsonCommand(BaseCommand):
    """
    Base for the supercalc commands.

    Subclasses implement ``compute(**options)`` and return a JSON-ready payload; this
    class reads the input document, writes the payload to stdout and turns library
    errors into the exit-code contract: 1 for malformed input and usage errors, 2 for
    domain errors, each with the error JSON on stdout.
    """

    takes_input = True

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                sys.stderr.write(f'{parser.prog}: error: {message}\n')
                sys.exit(EXIT_MALFORMED)
            raise CommandError(f'Error: {message}', returncode=EXIT_MALFORMED)

        parser.error = error
        return parser

    def add_arguments(self, parser):
        if self.takes_input:
            source = parser.add_mutually_exclusive_group()
            source.add_argument('--input', help='path of the JSON input, "-" for stdin')
            source.add_argument('--data', help='the JSON input given inline')

    def load_document(self, options: Dict[str, Any]) -> Any:
        if options.get('data') is not None:
            return loads(options['data'], 'data')
        path = options.get('input')
        if path is None:
            raise MalformedInput('one of --input or --data is required', 'input')
        if path == '-':
            return loads(sys.stdin.read(), 'stdin')
        try:
            text = Path(path).read_text(encoding='utf-8')
        except OSError as e:
            raise MalformedInput(f'cannot read {path}: {e.strerror}', path)
        return loads(text, path)

    @staticmethod
    def num_generators(document: Any) -> int:
        require_keys(document, ('num_generators',), 'input')
        n = parse_int(document['num_generators'], 'num_generators')
        if n < 0:
            raise MalformedInput('num_generators must be nonnegative', 'num_generators')
        return n

    def compute(self, **options) -> Any:
        raise NotImplementedError('subclasses of JsonCommand must provide compute()')

    def handle(self, *args, **options):
        logger.info('running %s', self.__module__.rsplit('.', 1)[-1])
        try:
            payload = self.compute(**options)
        except MalformedInput as e:
            logger.warning('malformed input at %s: %s', e.location, e.message)
            self.stdout.write(dumps(e.to_json()))
            raise CommandError(e.message, returncode=EXIT_MALFORMED)
        except SuperCalcError as e:
            logger.warning('%s at %s: %s', e.kind, e.location, e.message)
            self.stdout.write(dumps(e.to_json()))
            raise CommandError(e.message, returncode=EXIT_DOMAIN)
        self.stdout.write(dumps(payload))
