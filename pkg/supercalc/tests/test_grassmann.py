import random
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from supercalc.exceptions import GeneratorMismatch, MalformedInput, MixedParity, NotInvertible
from supercalc.grassmann import GrassmannElement, Parity, body, invert, multiply, parity

N = 4


def monomials(num_generators, degree_parity=None):
    keys = st.lists(st.integers(0, num_generators - 1), unique=True, max_size=num_generators)
    keys = keys.map(lambda gens: tuple(sorted(gens)))
    if degree_parity is not None:
        keys = keys.filter(lambda key: len(key) % 2 == degree_parity.value)
    return keys


def elements(num_generators=N, degree_parity=None):
    coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(monomials(num_generators, degree_parity), coefficients, max_size=4).map(
        lambda terms: GrassmannElement(terms, num_generators))


def units(num_generators=N):
    return elements(num_generators).filter(lambda a: a.body() != 0)


class GrassmannArithmeticTests(SimpleTestCase):

    def test_generators_anticommute(self):
        """e0 e1 = -e1 e0 and every generator squares to zero"""
        e0 = GrassmannElement.generator(0, 3)
        e1 = GrassmannElement.generator(1, 3)
        self.assertEqual(e0 * e1, -(e1 * e0))
        self.assertTrue((e0 * e0).is_zero())
        self.assertEqual((e1 * e0).terms, {(0, 1): Fraction(-1)})

    def test_product_sign_of_reordering(self):
        """e2 * (e0 e1) = +e0 e1 e2 while e1 * (e0 e2) = -e0 e1 e2"""
        e = [GrassmannElement.generator(i, 3) for i in range(3)]
        self.assertEqual(e[2] * (e[0] * e[1]), e[0] * e[1] * e[2])
        self.assertEqual(e[1] * (e[0] * e[2]), -(e[0] * e[1] * e[2]))

    def test_ring_axioms_on_seeded_elements(self):
        """Supercommutativity, associativity and two-sided inverses on 500 random elements"""
        rng = random.Random(2024)
        for _ in range(500):
            n = rng.randint(1, 6)
            pa, pb = rng.choice(list(Parity)), rng.choice(list(Parity))
            a = GrassmannElement.random(rng, n, pa)
            b = GrassmannElement.random(rng, n, pb)
            c = GrassmannElement.random(rng, n, rng.choice(list(Parity)))
            sign = -1 if pa is Parity.ODD and pb is Parity.ODD else 1
            self.assertEqual(a * b, (b * a).scale(sign))
            self.assertEqual((a * b) * c, a * (b * c))
            unit = GrassmannElement.random(rng, n, Parity.EVEN, invertible=True)
            inverse = unit.invert()
            self.assertEqual(unit * inverse, 1)
            self.assertEqual(inverse * unit, 1)

    @given(elements(), elements(), elements())
    @settings(max_examples=60, deadline=None)
    def test_distributivity(self, a, b, c):
        """a (b + c) = a b + a c and (a + b) c = a c + b c"""
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual((a + b) * c, a * c + b * c)

    @given(units())
    @settings(max_examples=60, deadline=None)
    def test_inverse_of_mixed_units(self, a):
        """Inverses exist for any element with nonzero body, homogeneous or not"""
        self.assertEqual(multiply(a, invert(a)), 1)
        self.assertEqual(body(invert(a)), 1 / a.body())

    def test_zero_body_is_not_invertible(self):
        """An element with zero body raises NotInvertible"""
        with self.assertRaises(NotInvertible):
            GrassmannElement({(0, 1): 1}, 2).invert()

    def test_mismatched_generators(self):
        """Elements over different generator counts do not combine"""
        with self.assertRaises(GeneratorMismatch):
            GrassmannElement.one(2) + GrassmannElement.one(3)

    def test_power_and_division(self):
        """Negative powers go through the inverse"""
        a = GrassmannElement({(): 2, (0, 1): 1}, 2)
        self.assertEqual(a ** -1, GrassmannElement({(): Fraction(1, 2), (0, 1): Fraction(-1, 4)}, 2))
        self.assertEqual(a / a, 1)
        self.assertEqual(a ** 2, GrassmannElement({(): 4, (0, 1): 4}, 2))


class GrassmannParityTests(SimpleTestCase):

    def test_parity_of_homogeneous_elements(self):
        """Even length multi-indices give Even, odd lengths Odd, zero is Even"""
        self.assertIs(parity(GrassmannElement({(): 1, (0, 1): 3}, 2)), Parity.EVEN)
        self.assertIs(parity(GrassmannElement({(0,): 1}, 2)), Parity.ODD)
        self.assertIs(parity(GrassmannElement.zero(2)), Parity.EVEN)

    def test_mixed_parity(self):
        """1 + e0 is not homogeneous"""
        with self.assertRaises(MixedParity):
            GrassmannElement({(): 1, (0,): 1}, 1).parity()

    @given(elements(degree_parity=Parity.ODD), elements(degree_parity=Parity.ODD))
    @settings(max_examples=60, deadline=None)
    def test_product_of_odd_elements_is_even(self, a, b):
        """Parity adds under multiplication and odd elements square to zero"""
        self.assertTrue((a * b).has_parity(Parity.EVEN))
        self.assertTrue((a * a).is_zero())

    def test_involution(self):
        """The grade involution negates exactly the odd part"""
        a = GrassmannElement({(): 1, (0,): 2, (0, 1): 3}, 2)
        self.assertEqual(a.involution(), GrassmannElement({(): 1, (0,): -2, (0, 1): 3}, 2))


class GrassmannSquareRootTests(SimpleTestCase):

    def test_square_root_branches(self):
        """sqrt(4 + e0 e1) squares back and its body carries the requested sign"""
        a = GrassmannElement({(): 4, (0, 1): 1}, 2)
        for sign in (1, -1):
            root = a.sqrt(sign)
            self.assertEqual(root * root, a)
            self.assertEqual(root.body(), 2 * sign)

    def test_square_root_of_seeded_squares(self):
        """sqrt(b^2) is b up to sign for random even b"""
        rng = random.Random(7)
        for _ in range(50):
            b = GrassmannElement.random(rng, 5, Parity.EVEN, invertible=True)
            square = b * b
            root = square.sqrt(1 if b.body() > 0 else -1)
            self.assertEqual(root, b)


class GrassmannWireFormatTests(SimpleTestCase):

    def test_json_form(self):
        """Terms are written in multi-index order with rational strings"""
        a = GrassmannElement({(0, 1): Fraction(-3, 4), (): 2}, 3)
        self.assertEqual(a.to_json(), [{'coeff': '2', 'gens': []}, {'coeff': '-3/4', 'gens': [0, 1]}])
        self.assertEqual(GrassmannElement.from_json(a.to_json(), 3), a)

    def test_compact_json(self):
        """Pure numbers serialize as a bare rational string"""
        self.assertEqual(GrassmannElement.scalar(Fraction(5, 3), 2).to_compact_json(), '5/3')
        self.assertEqual(GrassmannElement.from_json('5/3', 2), Fraction(5, 3))

    def test_rejects_floats_and_bad_indices(self):
        """Floats, repeated generators and out-of-range generators are malformed"""
        with self.assertRaises(MalformedInput):
            GrassmannElement.from_json([{'coeff': 0.5, 'gens': []}], 2)
        with self.assertRaises(MalformedInput):
            GrassmannElement.from_json([{'coeff': '1', 'gens': [1, 1]}], 2)
        with self.assertRaises(MalformedInput):
            GrassmannElement.from_json([{'coeff': '1', 'gens': [2]}], 2)
