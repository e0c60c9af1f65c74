"""
Closed-form ranks of R^i pi_* omega^j for families of super Riemann surfaces with
Ramond punctures (genus g, n_R Ramond punctures) and in the Neveu-Schwarz setting.
The mumford assembler checks every input table against these numbers.
"""

from dataclasses import dataclass
from typing import Dict, List

from .exceptions import PreconditionViolated

RAMOND_J = (-2, -1, 0, 1)
NS_J = (-1, 0, 1, 2, 3)


@dataclass(frozen=True)
class RankPair:
    even: int
    odd: int

    def __post_init__(self):
        if self.even < 0 or self.odd < 0:
            raise PreconditionViolated(f'negative rank {self.even} | {self.odd}')

    def flip(self) -> 'RankPair':
        return RankPair(self.odd, self.even)

    def to_json(self) -> List[int]:
        return [self.even, self.odd]

    def __str__(self) -> str:
        return f'{self.even} | {self.odd}'


@dataclass(frozen=True)
class RankRow:
    """One row of a Ramond table: h^i(L_red), h^i(L_red (x) J) and the total rank."""

    reduced: int
    ideal: int
    total: RankPair

    def to_json(self) -> Dict[str, object]:
        return {'reduced': self.reduced, 'ideal': self.ideal, 'total': self.total.to_json()}


def _check_genus(g: int) -> None:
    if g < 2:
        raise PreconditionViolated(f'genus must be at least 2, got {g}', 'g')


def _check_ramond(g: int, n_r: int) -> None:
    _check_genus(g)
    if n_r % 2:
        raise PreconditionViolated(f'number of Ramond punctures must be even, got {n_r}', 'n_R')
    if n_r <= 6 * g - 6:
        raise PreconditionViolated(f'need n_R > 6g - 6 = {6 * g - 6}, got {n_r}', 'n_R')


def r_value(g: int, n_r: int) -> int:
    """r = n_R/2 - g + 1, the number of points of the divisor T."""
    if n_r % 2:
        raise PreconditionViolated(f'number of Ramond punctures must be even, got {n_r}', 'n_R')
    return n_r // 2 - g + 1


def ramond_rank_row(g: int, n_r: int, j: int, i: int) -> RankRow:
    """
    Reduced and ideal parts of R^i pi_* omega^j with the Ramond divisor present.

    omega has rank 0|1, so for odd j the reduced part is the odd rank.
    """
    _check_ramond(g, n_r)
    half = n_r // 2
    if i == 0:
        table = {
            -2: (n_r + 3 - 3 * g, 3 * half + 2 - 2 * g),
            -1: (half + 2 - 2 * g, n_r + 1 - g),
            0: (1, half),
            1: (0, g),
        }
    elif i == 1:
        table = {-2: (0, 0), -1: (0, 0), 0: (g, 0), 1: (half, 1)}
    else:
        raise PreconditionViolated(f'cohomological degree must be 0 or 1, got {i}', 'i')
    if j not in table:
        raise PreconditionViolated(f'j = {j} is outside the tabulated range {RAMOND_J}', 'j')
    reduced, ideal = table[j]
    total = RankPair(reduced, ideal) if j % 2 == 0 else RankPair(ideal, reduced)
    return RankRow(reduced, ideal, total)


def ramond_rank(g: int, n_r: int, j: int, i: int) -> RankPair:
    return ramond_rank_row(g, n_r, j, i).total


def ns_rank(g: int, j: int, i: int) -> RankPair:
    """
    Ranks in the Neveu-Schwarz setting (odd spin structure, no punctures).

    R^1 is obtained from R^1 pi_* omega^j = (pi_* omega^(1-j))^* with parity flipped;
    pi_* omega^(-2) vanishes, which gives R^1 pi_* omega^3 = 0 | 0.
    """
    _check_genus(g)
    direct = {
        -2: RankPair(0, 0),
        -1: RankPair(1, 0),
        0: RankPair(1, 1),
        1: RankPair(g, 1),
        2: RankPair(g, 2 * g - 2),
        3: RankPair(3 * g - 3, 2 * g - 2),
    }
    if j not in NS_J:
        raise PreconditionViolated(f'j = {j} is outside the tabulated range {NS_J}', 'j')
    if i == 0:
        return direct[j]
    if i == 1:
        return direct[1 - j].flip()
    raise PreconditionViolated(f'cohomological degree must be 0 or 1, got {i}', 'i')


def ns_punctured_rank(g: int, n_ns: int) -> RankPair:
    """Rank of pi_* omega^3(N) for n_NS Neveu-Schwarz punctures."""
    _check_genus(g)
    if n_ns < 0:
        raise PreconditionViolated('n_NS must be nonnegative', 'n_NS')
    return RankPair(3 * g - 3 + n_ns, 2 * g - 2 + n_ns)


def ramond_basis_census(g: int, n_r: int) -> Dict[str, RankPair]:
    """Sizes (even | odd) of the ordered local bases used to build the Ramond matrices."""
    _check_ramond(g, n_r)
    r = r_value(g, n_r)
    census = {
        'B_omega': RankPair(g, 0),
        'B_O': RankPair(1, g + r - 1),
        'B_omega^-1': RankPair(g + (r - 1) + r, 1 + (r - g)),
        'B_omega^-2': RankPair(1 + (r - g) + r, g + (r - 1) + r + r),
        'B_omega^j|T': RankPair(r, r),
    }
    for name, j in (('B_omega', 1), ('B_O', 0), ('B_omega^-1', -1), ('B_omega^-2', -2)):
        expected = ramond_rank(g, n_r, j, 0)
        if census[name] != expected:
            raise PreconditionViolated(f'{name} has {census[name]}, rank table says {expected}')
    return census


def ramond_table(g: int, n_r: int) -> Dict[str, List[int]]:
    return {f'j={j}, i={i}': ramond_rank(g, n_r, j, i).to_json() for i in (0, 1) for j in RAMOND_J}


def ns_table(g: int) -> Dict[str, List[int]]:
    return {f'j={j}, i={i}': ns_rank(g, j, i).to_json() for i in (0, 1) for j in NS_J}
