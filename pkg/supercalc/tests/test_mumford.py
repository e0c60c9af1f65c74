import dataclasses

from django.test import SimpleTestCase

from supercalc.exceptions import (
    DimensionMismatch,
    NonInvertibleLeading,
    NonInvertibleNormalization,
    ParityViolation,
    PreconditionViolated,
)
from supercalc.grassmann import GrassmannElement
from supercalc.mumford import (
    NS_PUNCTURED_TAG,
    NS_TAG,
    RAMOND_TAG,
    ExpansionTable,
    NSInput,
    RamondInput,
    build_M0,
    build_M1,
    build_M2,
    build_M3,
    build_M_minus_half,
    build_M_minus_one,
    build_Mprime,
    mumford_ns,
    mumford_ns_punctured,
    mumford_ramond,
    ns_pairing_matrix,
    ramond_left_inverses,
    residue_matrix_A,
    residue_matrix_B,
)
from supercalc.samples import (
    consistent_ns_input,
    consistent_ramond_input,
    ns_identity_input,
    ramond_identity_input,
    random_ns_input,
    random_ramond_input,
)
from supercalc.supermatrix import SuperMatrix, berezinian
from supercalc.superseries import SuperSeries


class RamondMumfordTests(SimpleTestCase):

    def test_identity_fixture(self):
        """The identity-structured input has coefficient exactly 1"""
        result = mumford_ramond(ramond_identity_input())
        self.assertEqual(result.coefficient, 1)
        self.assertEqual(result.formal_tag, RAMOND_TAG)
        self.assertEqual(result.intermediates['Ber M_{-1/2}'], 1)
        self.assertEqual(result.intermediates['Ber M_{-1}'], 1)
        self.assertEqual(result.to_json()['coefficient'], '1')

    def test_left_inverse_independence(self):
        """Two different left inverses of A' and B' give the same coefficient on 20 seeds"""
        for seed in range(20):
            data = consistent_ramond_input(seed)
            deterministic = mumford_ramond(data)
            randomized = mumford_ramond(data, left_inverse_seed=seed + 101)
            self.assertEqual(deterministic.coefficient, randomized.coefficient, seed)

    def test_matrix_shapes(self):
        """A' is 2r x r, B' is 2r x g and every M is 2r x 2r"""
        data = consistent_ramond_input(3)
        r = data.r
        a, b = ramond_left_inverses(data)
        self.assertEqual(residue_matrix_A(data).shape, (2 * r, r))
        self.assertEqual(residue_matrix_B(data).shape, (2 * r, data.g))
        self.assertEqual(a @ residue_matrix_A(data), SuperMatrix.identity((r, 0), data.num_generators))
        for matrix in (build_M0(data, a), build_M_minus_half(data, b), build_M_minus_one(data)):
            self.assertEqual(matrix.shape, (2 * r, 2 * r))
        self.assertTrue(build_M_minus_one(data).validate_parity().valid)

    def test_homogeneity(self):
        """Scaling eta by c and psi by d scales Ber M_{-1} by Ber diag(c I | d I)"""
        data = ramond_identity_input()
        n, r = data.num_generators, data.r
        c = GrassmannElement({(): 2, (0, 1): 1}, n)
        d = GrassmannElement.scalar(3, n)
        scaled = data.with_tables(eta=data.eta.scaled(c), psi=data.psi.scaled(d))
        factor = berezinian(SuperMatrix.diagonal([c] * r + [d] * r, (r, r), n))
        result = mumford_ramond(scaled)
        self.assertEqual(result.intermediates['Ber M_{-1}'], factor)
        self.assertEqual(result.coefficient * factor, 1)

    def test_residue_matrix_a_parity(self):
        """Only the column of h = 1 breaks the declared (r | 0) column layout of A'"""
        for data in (ramond_identity_input(), random_ramond_input(4)):
            report = residue_matrix_A(data).validate_parity()
            self.assertFalse(report.valid)
            self.assertEqual({j for _, j in report.violations}, {0})

    def test_dimension_mismatch_is_rejected_first(self):
        """A table with the wrong number of sections is refused before any arithmetic"""
        data = ramond_identity_input()
        bad = data.with_tables(xi=ExpansionTable.zeros('xi', data.r, data.r, data.num_generators))
        with self.assertRaises(DimensionMismatch) as caught:
            mumford_ramond(bad)
        self.assertEqual(caught.exception.location, 'xi')
        with self.assertRaises(DimensionMismatch):
            mumford_ramond(dataclasses.replace(data, f=data.f[:-1]))

    def test_invalid_puncture_count(self):
        """n_R must be even and above 6g - 6"""
        with self.assertRaises(PreconditionViolated):
            mumford_ramond(dataclasses.replace(ramond_identity_input(), n_r=6))

    def test_parity_violation_names_the_entry(self):
        """An odd plus coefficient is reported with its table position"""
        data = ramond_identity_input()
        n = data.num_generators
        plus = [list(row) for row in data.xi.plus]
        plus[0][1] = GrassmannElement.generator(0, n)
        bad = data.with_tables(xi=ExpansionTable.build('xi', data.xi.minus, plus))
        with self.assertRaises(ParityViolation) as caught:
            mumford_ramond(bad)
        self.assertEqual(caught.exception.location, 'xi[0][1].plus')

    def test_unit_without_body(self):
        """f_1 with zero body raises NonInvertibleLeading at q_1"""
        data = ramond_identity_input()
        f = list(data.f)
        f[0] = SuperSeries.constant(GrassmannElement({(0, 1): 1}, data.num_generators), data.num_generators)
        with self.assertRaises(NonInvertibleLeading) as caught:
            mumford_ramond(dataclasses.replace(data, f=f))
        self.assertEqual(caught.exception.location, 'q_1')

    def test_random_input_and_wire_form(self):
        """A random input survives its wire form with the same coefficient"""
        data = random_ramond_input(4)
        restored = RamondInput.from_json(data.to_json())
        self.assertEqual(mumford_ramond(restored).coefficient, mumford_ramond(data).coefficient)


class NSMumfordTests(SimpleTestCase):

    def test_identity_fixture(self):
        """The identity-structured input has coefficient 1, punctured or not"""
        data = ns_identity_input()
        result = mumford_ns(data)
        self.assertEqual(result.coefficient, 1)
        self.assertEqual(result.formal_tag, NS_TAG)
        punctured = mumford_ns_punctured(data)
        self.assertEqual(punctured.coefficient, 1)
        self.assertEqual(punctured.formal_tag, NS_PUNCTURED_TAG)

    def test_b1_independence(self):
        """With phi^- = 0 the coefficient does not depend on the left inverse B_1"""
        for seed in range(20):
            data = consistent_ns_input(seed)
            self.assertEqual(mumford_ns(data).coefficient,
                             mumford_ns(data, left_inverse_seed=seed + 7).coefficient, seed)

    def test_punctured_divides_by_ber_m_prime(self):
        """punctured coefficient times Ber M' is the unpunctured coefficient"""
        for seed in range(5):
            data = random_ns_input(seed)
            punctured = mumford_ns_punctured(data)
            self.assertEqual(punctured.coefficient * punctured.intermediates["Ber M'"],
                             mumford_ns(data).coefficient)

    def test_matrix_shapes(self):
        """M_1, M_2, M_3 are (2g-2) square, M' is 2 n_NS square, M_2 ends in a unit row"""
        data = consistent_ns_input(2)
        side = 2 * data.g - 2
        self.assertEqual(ns_pairing_matrix(data).shape, (side, data.g - 1))
        for matrix in (build_M1(data), build_M2(data), build_M3(data)):
            self.assertEqual(matrix.shape, (side, side))
        self.assertEqual(build_Mprime(data).shape, (2 * data.n_ns, 2 * data.n_ns))
        last = build_M2(data).rows()[-1]
        self.assertEqual(last[-1], 1)
        self.assertTrue(all(entry == 0 for entry in last[:-1]))

    def test_punctured_needs_punctures(self):
        """The punctured form is undefined for n_NS = 0"""
        data = ns_identity_input(n_ns=0)
        self.assertEqual(mumford_ns(data).coefficient, 1)
        with self.assertRaises(PreconditionViolated):
            mumford_ns_punctured(data)

    def test_zero_normalization(self):
        """xi_inv without body raises NonInvertibleNormalization"""
        data = ns_identity_input()
        bad = dataclasses.replace(data, xi_inv=GrassmannElement.zero(data.num_generators))
        with self.assertRaises(NonInvertibleNormalization) as caught:
            mumford_ns(bad)
        self.assertEqual(caught.exception.location, 'xi_inv')

    def test_dimension_mismatch(self):
        """chi with g sections instead of g - 1 is refused"""
        data = ns_identity_input()
        bad = data.with_tables(chi=ExpansionTable.zeros('chi', data.g, data.g - 1, data.num_generators))
        with self.assertRaises(DimensionMismatch):
            mumford_ns(bad)

    def test_wire_form(self):
        """An NS input survives its wire form, alpha and beta default to empty"""
        data = consistent_ns_input(5)
        restored = NSInput.from_json(data.to_json())
        self.assertEqual(mumford_ns_punctured(restored).coefficient, mumford_ns_punctured(data).coefficient)
        document = ns_identity_input(n_ns=0).to_json()
        del document['alpha'], document['beta']
        self.assertEqual(mumford_ns(NSInput.from_json(document)).coefficient, 1)

    def test_xi_expansion_is_carried_only(self):
        """xi survives the wire form and leaves every Berezinian unchanged"""
        data = consistent_ns_input(6)
        n = data.num_generators
        xi = [(GrassmannElement.generator(0, n), GrassmannElement.scalar(k + 2, n)) for k in range(data.g - 1)]
        with_xi = dataclasses.replace(data, xi=xi)
        restored = NSInput.from_json(with_xi.to_json())
        self.assertEqual(restored.xi, xi)
        self.assertEqual(mumford_ns_punctured(restored).to_json(), mumford_ns_punctured(data).to_json())
        with self.assertRaises(DimensionMismatch):
            mumford_ns(dataclasses.replace(data, xi=xi[:-1]))
