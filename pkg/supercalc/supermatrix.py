"""
Block (even|odd) x (even|odd) matrices over the Grassmann ring.

Rows and columns are ordered even-labelled first, then odd-labelled, so a
matrix with row_layout (p, q) and col_layout (p2, q2) splits as [[A, B], [C, D]]
with A the p x p2 even-even block. The Berezinian uses the convention
Ber M = det(A - B D^-1 C) * det(D)^-1.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .codec import parse_int, require_keys
from .exceptions import (
    BodyRankDeficient,
    LayoutMismatch,
    MalformedInput,
    NotSquare,
    ParityViolation,
    SingularOddBlock,
)
from .grassmann import GrassmannElement, Parity

logger = logging.getLogger(__name__)

Layout = Tuple[int, int]
Rows = List[List[GrassmannElement]]


@dataclass
class ParityReport:
    valid: bool
    violations: List[Tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {'valid': self.valid, 'violations': [list(v) for v in self.violations]}


class SuperMatrix:
    """
    Immutable supermatrix over GrassmannElement entries.

    Args:
        entries: (p+q) rows of (p2+q2) elements each
        row_layout: (even rows, odd rows)
        col_layout: (even columns, odd columns)
        num_generators: generator count, required only when the matrix has no entries
    """

    def __init__(self, entries: Sequence[Sequence[GrassmannElement]], row_layout: Layout,
                 col_layout: Layout, num_generators: Optional[int] = None):
        row_layout = tuple(row_layout)
        col_layout = tuple(col_layout)
        if len(row_layout) != 2 or len(col_layout) != 2 or min(row_layout + col_layout) < 0:
            raise LayoutMismatch(f'bad layouts {row_layout} x {col_layout}')
        rows = [tuple(row) for row in entries]
        if len(rows) != sum(row_layout):
            raise LayoutMismatch(f'{len(rows)} rows do not match row layout {row_layout}')
        width = sum(col_layout)
        for i, row in enumerate(rows):
            if len(row) != width:
                raise LayoutMismatch(f'row {i} has {len(row)} entries, column layout {col_layout}')
        found = {e.num_generators for row in rows for e in row}
        if num_generators is not None:
            found.add(num_generators)
        if len(found) > 1:
            raise LayoutMismatch(f'entries over different generator counts {sorted(found)}')
        if not found:
            raise MalformedInput('num_generators is required for an empty matrix')
        self._rows = tuple(rows)
        self._row_layout: Layout = row_layout
        self._col_layout: Layout = col_layout
        self._num_generators = found.pop()

    @property
    def row_layout(self) -> Layout:
        return self._row_layout

    @property
    def col_layout(self) -> Layout:
        return self._col_layout

    @property
    def num_generators(self) -> int:
        return self._num_generators

    @property
    def shape(self) -> Tuple[int, int]:
        return sum(self._row_layout), sum(self._col_layout)

    def rows(self) -> Rows:
        return [list(row) for row in self._rows]

    def __getitem__(self, index: Tuple[int, int]) -> GrassmannElement:
        i, j = index
        return self._rows[i][j]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self._row_layout == other._row_layout and self._col_layout == other._col_layout
                and self._rows == other._rows)

    def __repr__(self) -> str:
        body = '; '.join(', '.join(str(e) for e in row) for row in self._rows)
        return f'SuperMatrix({self._row_layout}x{self._col_layout}: [{body}])'

    @classmethod
    def zero(cls, row_layout: Layout, col_layout: Layout, num_generators: int) -> 'SuperMatrix':
        zero = GrassmannElement.zero(num_generators)
        return cls([[zero] * sum(col_layout) for _ in range(sum(row_layout))],
                   row_layout, col_layout, num_generators)

    @classmethod
    def identity(cls, layout: Layout, num_generators: int) -> 'SuperMatrix':
        return cls.diagonal([GrassmannElement.one(num_generators)] * sum(layout), layout, num_generators)

    @classmethod
    def diagonal(cls, elements: Sequence[GrassmannElement], layout: Layout,
                 num_generators: int) -> 'SuperMatrix':
        zero = GrassmannElement.zero(num_generators)
        size = len(elements)
        rows = [[elements[i] if i == j else zero for j in range(size)] for i in range(size)]
        return cls(rows, layout, layout, num_generators)

    @classmethod
    def from_rationals(cls, values: Sequence[Sequence[Any]], row_layout: Layout, col_layout: Layout,
                       num_generators: int) -> 'SuperMatrix':
        return cls([[GrassmannElement.scalar(Fraction(v), num_generators) for v in row] for row in values],
                   row_layout, col_layout, num_generators)

    def row_parity(self, i: int) -> Parity:
        return Parity.EVEN if i < self._row_layout[0] else Parity.ODD

    def col_parity(self, j: int) -> Parity:
        return Parity.EVEN if j < self._col_layout[0] else Parity.ODD

    def validate_parity(self) -> ParityReport:
        """
        Audit entries against the block layout of an even supermatrix.

        Returns:
            ParityReport: valid flag plus (row, column) of every offending entry
        """
        violations = []
        for i, row in enumerate(self._rows):
            for j, entry in enumerate(row):
                if not entry.has_parity(self.row_parity(i) + self.col_parity(j)):
                    violations.append((i, j))
        return ParityReport(not violations, violations)

    def blocks(self) -> Tuple[Rows, Rows, Rows, Rows]:
        p, p2 = self._row_layout[0], self._col_layout[0]
        rows = self.rows()
        return ([row[:p2] for row in rows[:p]], [row[p2:] for row in rows[:p]],
                [row[:p2] for row in rows[p:]], [row[p2:] for row in rows[p:]])

    def body(self) -> List[List[Fraction]]:
        return [[e.body() for e in row] for row in self._rows]

    def body_matrix(self) -> 'SuperMatrix':
        return SuperMatrix.from_rationals(self.body(), self._row_layout, self._col_layout,
                                          self._num_generators)

    def _check_same_shape(self, other: 'SuperMatrix') -> None:
        if self._row_layout != other._row_layout or self._col_layout != other._col_layout:
            raise LayoutMismatch(
                f'layouts {self._row_layout}x{self._col_layout} and '
                f'{other._row_layout}x{other._col_layout} differ')

    def __add__(self, other: 'SuperMatrix') -> 'SuperMatrix':
        self._check_same_shape(other)
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)]
        return SuperMatrix(rows, self._row_layout, self._col_layout, self._num_generators)

    def __sub__(self, other: 'SuperMatrix') -> 'SuperMatrix':
        self._check_same_shape(other)
        rows = [[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)]
        return SuperMatrix(rows, self._row_layout, self._col_layout, self._num_generators)

    def scale_rows(self, factors: Sequence[GrassmannElement]) -> 'SuperMatrix':
        rows = [[factor * e for e in row] for factor, row in zip(factors, self._rows)]
        return SuperMatrix(rows, self._row_layout, self._col_layout, self._num_generators)

    def multiply(self, other: 'SuperMatrix') -> 'SuperMatrix':
        """
        Row-by-column product, entries multiplied left to right.

        Args:
            other: right factor whose row layout equals our column layout

        Returns:
            SuperMatrix: self * other
        """
        if self._col_layout != other._row_layout:
            raise LayoutMismatch(
                f'cannot multiply column layout {self._col_layout} by row layout {other._row_layout}')
        if self._num_generators != other._num_generators:
            raise LayoutMismatch('matrices over different generator counts')
        return SuperMatrix(_product(self.rows(), other.rows(), self._num_generators, other.shape[1]),
                           self._row_layout, other._col_layout, self._num_generators)

    __matmul__ = multiply

    def inverse(self) -> 'SuperMatrix':
        """Two-sided inverse of a square matrix whose body is invertible."""
        if self._row_layout != self._col_layout:
            raise NotSquare(f'layout {self._row_layout}x{self._col_layout} is not square')
        return left_inverse(self)

    def to_json(self) -> Dict[str, Any]:
        return {
            'row_layout': list(self._row_layout),
            'col_layout': list(self._col_layout),
            'entries': [[e.to_json() for e in row] for row in self._rows],
        }

    @classmethod
    def from_json(cls, data: Any, num_generators: int, where: str = 'matrix') -> 'SuperMatrix':
        require_keys(data, ('row_layout', 'col_layout', 'entries'), where)
        layouts = []
        for key in ('row_layout', 'col_layout'):
            value = data[key]
            if not isinstance(value, list) or len(value) != 2:
                raise MalformedInput(f'{key} must be [even, odd]', where)
            layouts.append(tuple(parse_int(v, f'{where}.{key}') for v in value))
        entries = data['entries']
        if not isinstance(entries, list) or not all(isinstance(row, list) for row in entries):
            raise MalformedInput('entries must be a list of rows', where)
        rows = [[GrassmannElement.from_json(e, num_generators, f'{where}.entries[{i}][{j}]')
                 for j, e in enumerate(row)] for i, row in enumerate(entries)]
        try:
            return cls(rows, layouts[0], layouts[1], num_generators)
        except LayoutMismatch as e:
            raise MalformedInput(e.message, where)


def _product(left: Rows, right: Rows, num_generators: int, width: int) -> Rows:
    inner = len(right)
    zero = GrassmannElement.zero(num_generators)
    result = []
    for row in left:
        out = []
        for j in range(width):
            total = zero
            for k in range(inner):
                if row[k] and right[k][j]:
                    total = total + row[k].multiply(right[k][j])
            out.append(total)
        result.append(out)
    return result


def _rational_rank_rows(body: List[List[Fraction]], wanted: int) -> List[int]:
    """Indices of the first rows, in order, that are linearly independent."""
    basis: List[Tuple[int, List[Fraction]]] = []
    chosen = []
    for index, row in enumerate(body):
        vector = list(row)
        for pivot, reduced in basis:
            if vector[pivot]:
                factor = vector[pivot] / reduced[pivot]
                vector = [v - factor * r for v, r in zip(vector, reduced)]
        pivot = next((c for c, v in enumerate(vector) if v), None)
        if pivot is None:
            continue
        basis.append((pivot, vector))
        chosen.append(index)
        if len(chosen) == wanted:
            break
    return chosen


def _rational_inverse(square: List[List[Fraction]]) -> List[List[Fraction]]:
    """Gauss-Jordan inverse of an invertible rational matrix."""
    n = len(square)
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(square)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col])
        work[col], work[pivot] = work[pivot], work[col]
        scale = work[col][col]
        work[col] = [v / scale for v in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return [row[n:] for row in work]


def left_inverse(matrix: SuperMatrix) -> SuperMatrix:
    """
    Deterministic left inverse over the Grassmann ring.

    The first linearly independent rows of the body are used as pivots; their
    rational inverse L0 is corrected by the terminating Neumann series
    (I + L0 N)^-1 L0 where N is the nilpotent part of the matrix.

    Args:
        matrix: tall matrix whose body has full column rank

    Returns:
        SuperMatrix: L with L * matrix = I, layouts swapped
    """
    m, n = matrix.shape
    body = matrix.body()
    pivots = _rational_rank_rows(body, n)
    if len(pivots) < n:
        raise BodyRankDeficient(f'body has column rank {len(pivots)} < {n}')
    logger.debug('left inverse of %sx%s uses pivot rows %s', m, n, pivots)
    selected_inverse = _rational_inverse([body[i] for i in pivots])
    scattered = [[Fraction(0)] * m for _ in range(n)]
    for t, row_index in enumerate(pivots):
        for i in range(n):
            scattered[i][row_index] = selected_inverse[i][t]
    generators = matrix.num_generators
    base = SuperMatrix.from_rationals(scattered, matrix.col_layout, matrix.row_layout, generators)
    correction = base.multiply(matrix - matrix.body_matrix())
    identity = SuperMatrix.identity(matrix.col_layout, generators)
    series = identity
    power = identity
    steps = 0
    while True:
        power = power.multiply(correction)
        if all(not e for row in power.rows() for e in row):
            break
        steps += 1
        series = series - power if steps % 2 else series + power
    logger.debug('Neumann series terminated after %s terms', steps)
    return series.multiply(base)


def random_even_matrix(rng: random.Random, layout: Layout, num_generators: int,
                       invertible: bool = False, max_terms: int = 2) -> SuperMatrix:
    """
    Seeded random parity-valid square supermatrix.

    Diagonal blocks get even entries, off-diagonal blocks odd ones. With
    ``invertible`` the body is redrawn until it is nonsingular.
    """
    size = sum(layout)
    while True:
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                parity = Parity.EVEN if (i < layout[0]) == (j < layout[0]) else Parity.ODD
                row.append(GrassmannElement.random(rng, num_generators, parity, max_terms=max_terms))
            rows.append(row)
        matrix = SuperMatrix(rows, layout, layout, num_generators)
        if not invertible or len(_rational_rank_rows(matrix.body(), size)) == size:
            return matrix


def randomized_left_inverse(matrix: SuperMatrix, seed: int) -> SuperMatrix:
    """
    Another exact left inverse, L + L P (I - M L) for a seeded random P.

    Args:
        matrix: tall matrix accepted by left_inverse
        seed: seed for the perturbation P

    Returns:
        SuperMatrix: a left inverse that in general differs from left_inverse(matrix)
    """
    base = left_inverse(matrix)
    perturbation = random_even_matrix(random.Random(seed), matrix.row_layout, matrix.num_generators)
    projector = SuperMatrix.identity(matrix.row_layout, matrix.num_generators) - matrix.multiply(base)
    return base + base.multiply(perturbation).multiply(projector)


def _bird_determinant(rows: Rows, num_generators: int) -> GrassmannElement:
    """Division-free determinant over a commutative ring."""
    n = len(rows)
    zero = GrassmannElement.zero(num_generators)
    current = [list(row) for row in rows]
    for _ in range(n - 1):
        mu = [[zero] * n for _ in range(n)]
        for i in range(n):
            mu[i][i] = -sum((current[k][k] for k in range(i + 1, n)), zero)
            for j in range(i + 1, n):
                mu[i][j] = current[i][j]
        current = _product(mu, rows, num_generators, n)
    result = current[0][0]
    return result if n % 2 else -result


def even_determinant(rows: Rows, num_generators: int) -> GrassmannElement:
    """
    Determinant of a square matrix with even (mutually commuting) entries.

    Fraction-free Bareiss elimination; each step divides exactly by the previous
    pivot, which is always chosen with invertible body. When a column offers no
    such pivot the remaining block is finished without division.

    Args:
        rows: square array of even elements
        num_generators: generator count of the entries

    Returns:
        GrassmannElement: the determinant
    """
    n = len(rows)
    if n == 0:
        return GrassmannElement.one(num_generators)
    work = [list(row) for row in rows]
    sign = 1
    previous = GrassmannElement.one(num_generators)
    for k in range(n - 1):
        pivot = next((r for r in range(k, n) if work[r][k].body() != 0), None)
        if pivot is None:
            trailing = [row[k:] for row in work[k:]]
            determinant = _bird_determinant(trailing, num_generators)
            scale = previous.invert() ** (n - k - 1)
            return determinant.multiply(scale).scale(sign)
        if pivot != k:
            work[k], work[pivot] = work[pivot], work[k]
            sign = -sign
        divisor = previous.invert()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) * divisor
        previous = work[k][k]
    return work[n - 1][n - 1].scale(sign)


def berezinian(matrix: SuperMatrix) -> GrassmannElement:
    """
    Berezinian of a square parity-valid even supermatrix.

    Args:
        matrix: [[A, B], [C, D]] with det(body(D)) != 0

    Returns:
        GrassmannElement: det(A - B D^-1 C) * det(D)^-1
    """
    if matrix.row_layout != matrix.col_layout:
        raise NotSquare(f'layout {matrix.row_layout}x{matrix.col_layout} is not square')
    report = matrix.validate_parity()
    if not report.valid:
        raise ParityViolation(f'entries {report.violations} contradict the block layout')
    p, q = matrix.row_layout
    generators = matrix.num_generators
    a, b, c, d = matrix.blocks()
    logger.debug('berezinian of (%s|%s) supermatrix', p, q)
    if q == 0:
        return even_determinant(a, generators)
    odd_block = SuperMatrix(d, (q, 0), (q, 0), generators)
    try:
        d_inverse = left_inverse(odd_block).rows()
    except BodyRankDeficient:
        raise SingularOddBlock('odd-odd block has singular body')
    denominator = even_determinant(d, generators).invert()
    if p == 0:
        return denominator
    correction = _product(_product(b, d_inverse, generators, q), c, generators, p)
    schur = [[x - y for x, y in zip(r, s)] for r, s in zip(a, correction)]
    return even_determinant(schur, generators).multiply(denominator)


def multiplication_matrix(f0: GrassmannElement, f1: GrassmannElement) -> SuperMatrix:
    """
    Matrix of multiplication by f = f0 + f1*a on the basis {1 | a}, a an odd generator
    not occurring in f0, f1. Its Berezinian is 1.

    Args:
        f0: even element with invertible body
        f1: odd element

    Returns:
        SuperMatrix: [[f0, 0], [f1, f0]] with layout (1|1)
    """
    zero = GrassmannElement.zero(f0.num_generators)
    return SuperMatrix([[f0, zero], [f1, f0]], (1, 1), (1, 1))


def vstack(top: SuperMatrix, bottom: SuperMatrix) -> SuperMatrix:
    """Stack an all-even-rows block on top of an all-odd-rows block (or any compatible pair)."""
    if top.col_layout != bottom.col_layout:
        raise LayoutMismatch(f'column layouts {top.col_layout} and {bottom.col_layout} differ')
    if top.row_layout[1] and bottom.row_layout[0]:
        raise LayoutMismatch('top block has odd rows above even rows of the bottom block')
    layout = (top.row_layout[0] + bottom.row_layout[0], top.row_layout[1] + bottom.row_layout[1])
    return SuperMatrix(top.rows() + bottom.rows(), layout, top.col_layout, top.num_generators)
