import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from supercalc.codec import dumps
from supercalc.mumford import RAMOND_TAG
from supercalc.samples import ns_identity_input, ramond_identity_input, sample_multiplication_matrix
from supercalc.superconformal import CoordinateChange
from supercalc.supermatrix import SuperMatrix
from supercalc.superseries import SuperSeries


def matrix_document(matrix):
    return dumps(dict(matrix.to_json(), num_generators=matrix.num_generators))


class CommandTestCase(SimpleTestCase):

    def run_command(self, name, *args, **options):
        out = StringIO()
        call_command(name, *args, stdout=out, **options)
        return out.getvalue()

    def run_json(self, name, *args, **options):
        return json.loads(self.run_command(name, *args, **options))

    def assertFails(self, returncode, name, *args, **options):
        """Run a command that must fail and return the error JSON it printed, if any."""
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command(name, *args, stdout=out, **options)
        self.assertEqual(caught.exception.returncode, returncode)
        text = out.getvalue()
        return json.loads(text) if text else None


class RanksCommandTests(CommandTestCase):

    def test_ramond_table(self):
        """ranks --family ramond --g 2 --nr 8 lists "j=0, i=0": [1, 4]"""
        output = self.run_command('ranks', family='ramond', g=2, nr=8)
        self.assertIn('"j=0, i=0": [1, 4]', output)

    def test_ns_table_with_punctures(self):
        """--nns adds the rank of pi_* omega^3(N)"""
        table = self.run_json('ranks', family='ns', g=3, nns=2)
        self.assertEqual(table['j=3, i=0'], [6, 4])
        self.assertEqual(table['punctured j=3, i=0'], [8, 6])

    def test_detail(self):
        """--detail adds reduced and ideal parts"""
        report = self.run_json('ranks', '--detail', family='ramond', g=2, nr=8)
        self.assertEqual(report['rows']['j=-1, i=0'], {'ideal': 7, 'reduced': 2, 'total': [7, 2]})

    def test_usage_errors(self):
        """A Ramond table without --nr or with an unknown family is a usage error"""
        self.assertIsNone(self.assertFails(1, 'ranks', family='ramond', g=2))
        self.assertFails(1, 'ranks', '--family=bosonic', '--g=2')

    def test_domain_error(self):
        """An odd number of Ramond punctures exits with 2 and the error JSON"""
        error = self.assertFails(2, 'ranks', family='ramond', g=2, nr=7)
        self.assertEqual(error['error_kind'], 'PreconditionViolated')
        self.assertEqual(error['location'], 'n_R')


class MatrixCommandTests(CommandTestCase):

    def test_ber_of_multiplication_matrix(self):
        """ber on m_f prints {"ber": "1"}"""
        output = self.run_command('ber', data=matrix_document(sample_multiplication_matrix()))
        self.assertEqual(output, '{"ber": "1"}\n')

    def test_ber_from_file(self):
        """--input reads the document from a path"""
        matrix = SuperMatrix.from_rationals([[2, 0], [0, 4]], (1, 1), (1, 1), 1)
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'matrix.json'
            path.write_text(matrix_document(matrix), encoding='utf-8')
            self.assertEqual(self.run_json('ber', input=str(path)), {'ber': '1/2'})

    def test_malformed_input(self):
        """Broken JSON, floats and a missing document exit with 1"""
        self.assertEqual(self.assertFails(1, 'ber', data='{not json')['error_kind'], 'MalformedInput')
        document = json.loads(matrix_document(sample_multiplication_matrix()))
        document['entries'][0][0] = [{'coeff': 2.0, 'gens': []}]
        self.assertEqual(self.assertFails(1, 'ber', data=json.dumps(document))['error_kind'], 'MalformedInput')
        self.assertEqual(self.assertFails(1, 'ber')['location'], 'input')
        self.assertFails(1, 'ber', input='/nonexistent/matrix.json')

    def test_domain_errors_are_logged(self):
        """A non-square matrix exits with 2 and logs a warning"""
        with self.assertLogs('supercalc.commands', 'WARNING'):
            error = self.assertFails(2, 'ber', data=matrix_document(SuperMatrix.zero((2, 0), (1, 0), 1)))
        self.assertEqual(error['error_kind'], 'NotSquare')

    def test_leftinv(self):
        """The printed left inverse is a left inverse, seeded ones are reproducible"""
        matrix = SuperMatrix.from_rationals([[1, 0], [0, 1], [1, 1]], (3, 0), (2, 0), 0)
        document = matrix_document(matrix)
        inverse = SuperMatrix.from_json(self.run_json('leftinv', data=document)['left_inverse'], 0)
        self.assertEqual(inverse @ matrix, SuperMatrix.identity((2, 0), 0))
        first = self.run_command('leftinv', data=document, left_inverse_seed=3)
        self.assertEqual(first, self.run_command('leftinv', data=document, left_inverse_seed=3))

    def test_validate_matrix(self):
        """validate matrix reports parity violations"""
        m = SuperMatrix.from_rationals([[1, 1], [0, 1]], (1, 1), (1, 1), 1)
        self.assertEqual(self.run_json('validate', 'matrix', data=matrix_document(m))['valid'], False)


class SeriesCommandTests(CommandTestCase):

    def series_document(self, series, **extra):
        return dumps(dict(extra, num_generators=series.num_generators, series=series.to_json()))

    def test_residue(self):
        """res theta z^-1 = 1"""
        series = SuperSeries.monomial(-1, 0, 2, b=1, weight=1)
        self.assertEqual(self.run_json('residue', data=self.series_document(series)), {'residue': '1'})

    def test_simple_pole_residue(self):
        """With z0 and theta0 the residue of theta z at (z0 | theta0) is z0"""
        series = SuperSeries.monomial(1, 0, 3, b=1)
        z0 = [{'coeff': '1', 'gens': [0, 1]}]
        document = self.series_document(series, z0=z0, theta0=[{'coeff': '1', 'gens': [2]}])
        self.assertEqual(self.run_json('residue', data=document), {'residue': z0})

    def test_wrong_weight(self):
        """A weight 0 series has no residue"""
        error = self.assertFails(2, 'residue', data=self.series_document(SuperSeries.theta(1)))
        self.assertEqual(error['error_kind'], 'WrongWeight')

    def test_alpha(self):
        """alpha(theta) has varpi part 1"""
        report = self.run_json('alpha', data=self.series_document(SuperSeries.theta(1).with_weight(1)))
        self.assertEqual(report['varpi_part']['terms'], [{'a': [{'coeff': '1', 'gens': []}], 'b': [], 'k': 0}])


class CheckSuperconformalCommandTests(CommandTestCase):

    def test_identity(self):
        """The identity passes both checks with constraints (1, 0) and Ber A = 1"""
        document = dumps(CoordinateChange.identity(2).to_json())
        report = self.run_json('check_superconformal', data=document)
        self.assertEqual(report, {
            'constraints': ['1', '0'],
            'quotient_ber': '1',
            'ramond_superconformal': True,
            'superconformal': True,
        })

    def test_scaling_is_not_ramond(self):
        """z = 4x, zeta = 2 theta is superconformal only"""
        report = self.run_json('check_superconformal', data=dumps(CoordinateChange.scaling(2, 2).to_json()))
        self.assertTrue(report['superconformal'])
        self.assertFalse(report['ramond_superconformal'])
        self.assertIsNone(report['quotient_ber'])

    def test_generated_changes(self):
        """Generated Ramond changes of both branches satisfy the boundary constraints"""
        for sign in ('1', '-1'):
            report = self.run_json('check_superconformal', '--generate-ramond=7', f'--branch-sign={sign}',
                                   '--trunc-order=3', '--num-generators=3')
            self.assertEqual(report['constraints'], ['1', '0'])
            self.assertEqual(report['quotient_ber'], '1')
            self.assertEqual(report['change']['g']['terms'][0]['a'][0]['coeff'], sign)

    def test_degenerate_ramond_change(self):
        """f = x^4 passes the Ramond identities but exits with 2 at the boundary checks"""
        change = CoordinateChange.from_coefficients({4: 1}, {}, {}, {0: 2}, 2, trunc_order=4)
        error = self.assertFails(2, 'check_superconformal', data=dumps(change.to_json()))
        self.assertEqual(error['error_kind'], 'InvalidCoordinateChange')
        self.assertEqual(error['location'], 'f')

    def test_bad_branch_sign(self):
        """--branch-sign only takes +1 or -1"""
        self.assertFails(1, 'check_superconformal', '--generate-ramond=1', '--branch-sign=3')


class MumfordCommandTests(CommandTestCase):

    def test_ramond_identity(self):
        """mumford ramond on the identity fixture prints coefficient 1 and the tag"""
        report = self.run_json('mumford', 'ramond', data=dumps(ramond_identity_input().to_json()))
        self.assertEqual(report['coefficient'], '1')
        self.assertEqual(report['formal_tag'], RAMOND_TAG)

    def test_ns_punctured(self):
        """mumford ns --punctured on the identity fixture prints 1 with Ber M'"""
        report = self.run_json('mumford', 'ns', '--punctured', data=dumps(ns_identity_input().to_json()))
        self.assertEqual(report['coefficient'], '1')
        self.assertIn("Ber M'", report['intermediates'])

    def test_punctured_ramond_is_a_usage_error(self):
        """--punctured is refused for the Ramond family"""
        self.assertFails(1, 'mumford', 'ramond', '--punctured', data=dumps(ramond_identity_input().to_json()))

    def test_determinism(self):
        """Identical input and flags give byte-identical output"""
        document = dumps(ns_identity_input().to_json())
        first = self.run_command('mumford', 'ns', data=document, left_inverse_seed=11)
        self.assertEqual(first, self.run_command('mumford', 'ns', data=document, left_inverse_seed=11))

    def test_dimension_error(self):
        """A wrongly sized table exits with 2 naming the table"""
        document = ramond_identity_input().to_json()
        document['xi'] = document['xi'][:-1]
        error = self.assertFails(2, 'mumford', 'ramond', data=dumps(document))
        self.assertEqual(error['error_kind'], 'DimensionMismatch')
        self.assertEqual(error['location'], 'xi')

    def test_validate(self):
        """validate checks sizes without computing"""
        document = dumps(ramond_identity_input().to_json())
        self.assertEqual(self.run_json('validate', 'ramond', data=document), {'r': 3, 'valid': True})
        ns = dumps(ns_identity_input().to_json())
        self.assertEqual(self.run_json('validate', 'ns', data=ns), {'points': 2, 'valid': True})


class MakeSamplesCommandTests(CommandTestCase):

    def test_written_samples_are_usable(self):
        """make_samples writes the fixtures and mumford reads them back"""
        with tempfile.TemporaryDirectory() as directory:
            report = self.run_json('make_samples', output_dir=directory)
            self.assertEqual(sorted(report['written']), [
                'multiplication_matrix.json', 'ns_identity.json', 'ns_random.json',
                'ramond_identity.json', 'ramond_random.json',
            ])
            identity = str(Path(directory) / 'ramond_identity.json')
            self.assertEqual(self.run_json('mumford', 'ramond', input=identity)['coefficient'], '1')
            self.assertEqual(self.run_json('ber', input=str(Path(directory) / 'multiplication_matrix.json')),
                             {'ber': '1'})
            random_input = str(Path(directory) / 'ramond_random.json')
            first = self.run_json('mumford', 'ramond', input=random_input)
            second = self.run_json('mumford', 'ramond', input=random_input, left_inverse_seed=5)
            self.assertEqual(first['coefficient'], second['coefficient'])
