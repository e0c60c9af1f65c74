from django.test import SimpleTestCase

from supercalc.exceptions import PreconditionViolated
from supercalc.moduli_ranks import (
    NS_J,
    RAMOND_J,
    RankPair,
    ns_punctured_rank,
    ns_rank,
    ns_table,
    r_value,
    ramond_basis_census,
    ramond_rank,
    ramond_rank_row,
    ramond_table,
)

# (g, n_R) -> {(j, i): (even, odd)}
RAMOND_TABLES = {
    (2, 8): {
        (-2, 0): (5, 10), (-1, 0): (7, 2), (0, 0): (1, 4), (1, 0): (2, 0),
        (-2, 1): (0, 0), (-1, 1): (0, 0), (0, 1): (2, 0), (1, 1): (1, 4),
    },
    (2, 10): {
        (-2, 0): (7, 13), (-1, 0): (9, 3), (0, 0): (1, 5), (1, 0): (2, 0),
        (-2, 1): (0, 0), (-1, 1): (0, 0), (0, 1): (2, 0), (1, 1): (1, 5),
    },
    (3, 14): {
        (-2, 0): (8, 17), (-1, 0): (12, 3), (0, 0): (1, 7), (1, 0): (3, 0),
        (-2, 1): (0, 0), (-1, 1): (0, 0), (0, 1): (3, 0), (1, 1): (1, 7),
    },
}

NS_TABLES = {
    2: {
        (-1, 0): (1, 0), (0, 0): (1, 1), (1, 0): (2, 1), (2, 0): (2, 2), (3, 0): (3, 2),
        (-1, 1): (2, 2), (0, 1): (1, 2), (1, 1): (1, 1), (2, 1): (0, 1), (3, 1): (0, 0),
    },
    3: {
        (-1, 0): (1, 0), (0, 0): (1, 1), (1, 0): (3, 1), (2, 0): (3, 4), (3, 0): (6, 4),
        (-1, 1): (4, 3), (0, 1): (1, 3), (1, 1): (1, 1), (2, 1): (0, 1), (3, 1): (0, 0),
    },
}


class RamondRankTests(SimpleTestCase):

    def test_tables(self):
        """All eight rows agree with the closed forms for three (g, n_R)"""
        for (g, n_r), table in RAMOND_TABLES.items():
            for (j, i), expected in table.items():
                self.assertEqual(ramond_rank(g, n_r, j, i), RankPair(*expected), (g, n_r, j, i))

    def test_reduced_and_ideal_parts(self):
        """For odd j the reduced part is the odd rank"""
        row = ramond_rank_row(2, 8, -1, 0)
        self.assertEqual((row.reduced, row.ideal), (2, 7))
        self.assertEqual(row.total, RankPair(7, 2))
        self.assertEqual(row.to_json(), {'reduced': 2, 'ideal': 7, 'total': [7, 2]})

    def test_duality(self):
        """R^1 of omega^j has the rank of pi_* omega^(1-j) for j = 0, 1"""
        for g, n_r in RAMOND_TABLES:
            for j in (0, 1):
                self.assertEqual(ramond_rank(g, n_r, j, 1), ramond_rank(g, n_r, 1 - j, 0))

    def test_r_value(self):
        """r = n_R/2 - g + 1"""
        self.assertEqual([r_value(2, 8), r_value(2, 10), r_value(3, 14)], [3, 4, 5])
        with self.assertRaises(PreconditionViolated):
            r_value(2, 9)

    def test_preconditions(self):
        """Odd n_R, n_R <= 6g - 6, genus below 2 and untabulated j or i are errors"""
        bad = [(2, 9, 0, 0), (2, 6, 0, 0), (1, 8, 0, 0), (2, 8, 2, 0), (2, 8, 0, 2)]
        for args in bad:
            with self.assertRaises(PreconditionViolated):
                ramond_rank(*args)

    def test_basis_census(self):
        """Local basis sizes equal the pi_* ranks, restriction to T has r | r"""
        census = ramond_basis_census(2, 8)
        self.assertEqual(census['B_O'], ramond_rank(2, 8, 0, 0))
        self.assertEqual(census['B_omega^-2'], RankPair(5, 10))
        self.assertEqual(census['B_omega^j|T'], RankPair(3, 3))

    def test_table_json(self):
        """Keys are "j=J, i=I" with [even, odd] values"""
        table = ramond_table(2, 8)
        self.assertEqual(table['j=0, i=0'], [1, 4])
        self.assertEqual(len(table), 2 * len(RAMOND_J))


class NSRankTests(SimpleTestCase):

    def test_tables(self):
        """pi_* and R^1 ranks for g = 2, 3"""
        for g, table in NS_TABLES.items():
            for (j, i), expected in table.items():
                self.assertEqual(ns_rank(g, j, i), RankPair(*expected), (g, j, i))
        self.assertEqual(len(ns_table(3)), 2 * len(NS_J))

    def test_punctured_rank(self):
        """pi_* omega^3(N) has rank 3g - 3 + n_NS | 2g - 2 + n_NS"""
        self.assertEqual(ns_punctured_rank(3, 2), RankPair(8, 6))
        self.assertEqual(ns_punctured_rank(2, 0), ns_rank(2, 3, 0))
        with self.assertRaises(PreconditionViolated):
            ns_punctured_rank(2, -1)

    def test_preconditions(self):
        """Genus 1 and j = -2 are rejected"""
        with self.assertRaises(PreconditionViolated):
            ns_rank(1, 1, 0)
        with self.assertRaises(PreconditionViolated):
            ns_rank(2, -2, 0)

    def test_negative_rank(self):
        """RankPair refuses negative entries"""
        with self.assertRaises(PreconditionViolated):
            RankPair(-1, 0)
