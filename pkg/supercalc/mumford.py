"""
Assembly of the basis-change matrices for families with Ramond punctures and in the
Neveu-Schwarz setting, and evaluation of the super Mumford form coefficient
from local expansion data.

Coefficient tables hold, for every section j and point k, the pair of base functions
(minus, plus) read off the expansion of the section near the point. The "plus"
function is even and the "minus" function odd, in every table.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .codec import parse_int, require_keys
from .exceptions import (
    DimensionMismatch,
    MalformedInput,
    NonInvertibleLeading,
    NonInvertibleNormalization,
    ParityViolation,
    PreconditionViolated,
    SuperCalcError,
)
from .grassmann import GrassmannElement, Parity
from .moduli_ranks import ns_punctured_rank, ns_rank, r_value, ramond_basis_census, ramond_rank
from .supermatrix import (
    SuperMatrix,
    berezinian,
    left_inverse,
    randomized_left_inverse,
    vstack,
)
from .superseries import SuperSeries, invert_series, residue_simple_pole

logger = logging.getLogger(__name__)

RAMOND_TAG = 'd_{−1}·d_{1/2}^{−5}'
NS_TAG = 'd_{3/2}·d_{1/2}^{−5}'
NS_PUNCTURED_TAG = 'd^N_{3/2}·(δ^N_{3/2})^{−1}·d_{1/2}^{−5}'

RAMOND_TABLES = ('xi', 'phi', 'sigma', 'tau', 'eta', 'psi')
NS_TABLES = ('phi', 'chi', 'psi', 'sigma', 'rho', 'alpha', 'beta')


@dataclass(frozen=True)
class ExpansionTable:
    """
    Leading expansion coefficients of a family of sections at a set of points.

    ``minus[j][k]`` and ``plus[j][k]`` belong to section j + 1 at point k + 1.
    """

    name: str
    minus: Tuple[Tuple[GrassmannElement, ...], ...]
    plus: Tuple[Tuple[GrassmannElement, ...], ...]

    @classmethod
    def build(cls, name: str, minus: Sequence[Sequence[GrassmannElement]],
              plus: Sequence[Sequence[GrassmannElement]]) -> 'ExpansionTable':
        return cls(name, tuple(tuple(row) for row in minus), tuple(tuple(row) for row in plus))

    @classmethod
    def zeros(cls, name: str, sections: int, points: int, num_generators: int) -> 'ExpansionTable':
        zero = GrassmannElement.zero(num_generators)
        rows = [[zero] * points for _ in range(sections)]
        return cls.build(name, rows, rows)

    @property
    def sections(self) -> int:
        return len(self.plus)

    def points(self) -> Optional[int]:
        widths = {len(row) for row in self.plus + self.minus}
        return widths.pop() if len(widths) == 1 else None

    def check(self, sections: int, points: int) -> None:
        """Raise DimensionMismatch or ParityViolation when the table does not fit."""
        if len(self.plus) != sections or len(self.minus) != sections or (
                sections and self.points() != points):
            raise DimensionMismatch(
                f'table {self.name} must hold {sections} sections at {points} points', self.name)
        for label, rows, parity in (('plus', self.plus, Parity.EVEN), ('minus', self.minus, Parity.ODD)):
            for j, row in enumerate(rows):
                for k, element in enumerate(row):
                    if not element.has_parity(parity):
                        raise ParityViolation(
                            f'{self.name}[{j}][{k}].{label} must be {parity.name.lower()}',
                            f'{self.name}[{j}][{k}].{label}')

    def local_series(self, j: int, k: int) -> SuperSeries:
        """The leading part minus + plus * theta of section j near point k."""
        minus, plus = self.minus[j][k], self.plus[j][k]
        return SuperSeries.constant(minus, minus.num_generators, b=plus)

    def scaled(self, factor: GrassmannElement) -> 'ExpansionTable':
        return ExpansionTable.build(self.name, [[factor * e for e in row] for row in self.minus],
                                    [[factor * e for e in row] for row in self.plus])

    def to_json(self) -> List[List[Dict[str, Any]]]:
        return [[{'minus': m.to_json(), 'plus': p.to_json()} for m, p in zip(mr, pr)]
                for mr, pr in zip(self.minus, self.plus)]

    @classmethod
    def from_json(cls, name: str, data: Any, num_generators: int) -> 'ExpansionTable':
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            raise MalformedInput(f'table {name} must be a list of lists', name)
        minus, plus = [], []
        for j, row in enumerate(data):
            minus.append([])
            plus.append([])
            for k, entry in enumerate(row):
                spot = f'{name}[{j}][{k}]'
                require_keys(entry, ('minus', 'plus'), spot)
                minus[-1].append(GrassmannElement.from_json(entry['minus'], num_generators, f'{spot}.minus'))
                plus[-1].append(GrassmannElement.from_json(entry['plus'], num_generators, f'{spot}.plus'))
        return cls.build(name, minus, plus)


def _parse_header(data: Any, keys: Sequence[str], where: str) -> Dict[str, int]:
    require_keys(data, keys, where)
    return {key: parse_int(data[key], key) for key in keys}


@dataclass
class RamondInput:
    """
    Local data for a family of genus g with n_R Ramond punctures.

    f[k] is the unit factor of t' ~ z_k f_k(z_k | theta_k) at q_{k+1}; the tables are
    xi (r-1 sections), phi (g), sigma (r), tau (r-g), eta (r) and psi (r), each at the
    r points of T.
    """

    g: int
    n_r: int
    num_generators: int
    f: List[SuperSeries]
    xi: ExpansionTable
    phi: ExpansionTable
    sigma: ExpansionTable
    tau: ExpansionTable
    eta: ExpansionTable
    psi: ExpansionTable

    @property
    def r(self) -> int:
        return r_value(self.g, self.n_r)

    def validate(self) -> None:
        """Check sizes against the rank tables and every declared parity."""
        census = ramond_basis_census(self.g, self.n_r)
        r = self.r
        if r < 1 or r < self.g:
            raise PreconditionViolated(f'r = {r} is too small for genus {self.g}', 'n_R')
        expected = {
            'xi': census['B_O'].odd - self.g,
            'phi': ramond_rank(self.g, self.n_r, 1, 0).even,
            'sigma': census['B_omega^-1'].even - self.g - (r - 1),
            'tau': census['B_omega^-1'].odd - 1,
            'eta': census['B_omega^-2'].even - 1 - (r - self.g),
            'psi': census['B_omega^-2'].odd - self.g - (r - 1) - r,
        }
        if len(self.f) != r:
            raise DimensionMismatch(f'need one unit series f_k per point, {r} in all', 'f')
        for k, series in enumerate(self.f):
            if series.weight or series.pole_order or not series.has_parity(Parity.EVEN):
                raise ParityViolation('f_k must be an even weight 0 power series', f'q_{k + 1}')
            if series.num_generators != self.num_generators:
                raise DimensionMismatch('generator count differs', f'q_{k + 1}')
        for name in RAMOND_TABLES:
            getattr(self, name).check(expected[name], r)

    def with_tables(self, **tables: ExpansionTable) -> 'RamondInput':
        values = {name: getattr(self, name) for name in RAMOND_TABLES}
        values.update(tables)
        return RamondInput(self.g, self.n_r, self.num_generators, list(self.f), **values)

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'g': self.g,
            'n_R': self.n_r,
            'num_generators': self.num_generators,
            'f': [series.to_json() for series in self.f],
        }
        for name in RAMOND_TABLES:
            data[name] = getattr(self, name).to_json()
        return data

    @classmethod
    def from_json(cls, data: Any) -> 'RamondInput':
        header = _parse_header(data, ('g', 'n_R', 'num_generators'), 'input')
        require_keys(data, ('f',) + RAMOND_TABLES, 'input')
        n = header['num_generators']
        if not isinstance(data['f'], list):
            raise MalformedInput('"f" must be a list of series', 'f')
        f = [SuperSeries.from_json(s, n, f'f[{k}]') for k, s in enumerate(data['f'])]
        tables = {name: ExpansionTable.from_json(name, data[name], n) for name in RAMOND_TABLES}
        return cls(header['g'], header['n_R'], n, f, **tables)


@dataclass
class NSInput:
    """
    Local data in the Neveu-Schwarz setting at the points p_1 .. p_{g-1} of D, plus
    the optional tables alpha, beta at the n_NS punctures.

    ``xi`` (the expansion xi^{k,-} + xi^{k,+} theta_k of xi at each p_k) is optional and
    only validated and carried through the wire form; no matrix reads it. M_3 takes its
    normalization from ``xi_inv`` alone.
    """

    g: int
    n_ns: int
    num_generators: int
    phi: ExpansionTable
    chi: ExpansionTable
    psi: ExpansionTable
    sigma: ExpansionTable
    rho: ExpansionTable
    xi_inv: GrassmannElement
    alpha: ExpansionTable
    beta: ExpansionTable
    xi: Optional[List[Tuple[GrassmannElement, GrassmannElement]]] = None

    def validate(self) -> None:
        g = self.g
        points = g - 1
        omega = ns_rank(g, 1, 0)
        omega2 = ns_rank(g, 2, 0)
        omega3 = ns_rank(g, 3, 0)
        expected = {
            'phi': (omega.even - 1, points),
            'chi': (omega2.even - 1, points),
            'psi': (omega2.odd - (g - 1) - 1, points),
            'sigma': (omega3.even - 2 * (g - 1), points),
            'rho': (omega3.odd - 1 - (g - 1), points),
            'alpha': (ns_punctured_rank(g, self.n_ns).even - omega3.even, self.n_ns),
            'beta': (ns_punctured_rank(g, self.n_ns).odd - omega3.odd, self.n_ns),
        }
        for name in NS_TABLES:
            getattr(self, name).check(*expected[name])
        if not self.xi_inv.has_parity(Parity.EVEN):
            raise ParityViolation('xi_inv must be even', 'xi_inv')
        if self.xi is not None:
            if len(self.xi) != points:
                raise DimensionMismatch(f'xi needs {points} entries', 'xi')
            for k, (minus, plus) in enumerate(self.xi):
                if not minus.has_parity(Parity.ODD) or not plus.has_parity(Parity.EVEN):
                    raise ParityViolation('xi minus must be odd and plus even', f'xi[{k}]')

    def with_tables(self, **tables: ExpansionTable) -> 'NSInput':
        values = {name: getattr(self, name) for name in NS_TABLES}
        values.update(tables)
        return NSInput(self.g, self.n_ns, self.num_generators, xi_inv=self.xi_inv, xi=self.xi, **values)

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'g': self.g,
            'n_NS': self.n_ns,
            'num_generators': self.num_generators,
            'xi_inv': self.xi_inv.to_json(),
        }
        for name in NS_TABLES:
            data[name] = getattr(self, name).to_json()
        if self.xi is not None:
            data['xi'] = [{'minus': m.to_json(), 'plus': p.to_json()} for m, p in self.xi]
        return data

    @classmethod
    def from_json(cls, data: Any) -> 'NSInput':
        header = _parse_header(data, ('g', 'n_NS', 'num_generators'), 'input')
        required = ('phi', 'chi', 'psi', 'sigma', 'rho', 'xi_inv')
        require_keys(data, required, 'input')
        n = header['num_generators']
        tables = {}
        for name in NS_TABLES:
            raw = data.get(name, [] if name in ('alpha', 'beta') else None)
            tables[name] = ExpansionTable.from_json(name, raw, n)
        xi = None
        if data.get('xi') is not None:
            if not isinstance(data['xi'], list):
                raise MalformedInput('"xi" must be a list', 'xi')
            xi = []
            for k, entry in enumerate(data['xi']):
                require_keys(entry, ('minus', 'plus'), f'xi[{k}]')
                xi.append((GrassmannElement.from_json(entry['minus'], n, f'xi[{k}].minus'),
                           GrassmannElement.from_json(entry['plus'], n, f'xi[{k}].plus')))
        xi_inv = GrassmannElement.from_json(data['xi_inv'], n, 'xi_inv')
        return cls(header['g'], header['n_NS'], n, xi_inv=xi_inv, xi=xi, **tables)


@dataclass
class MumfordFormResult:
    coefficient: GrassmannElement
    formal_tag: str
    intermediates: Dict[str, GrassmannElement] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            'coefficient': self.coefficient.to_compact_json(),
            'formal_tag': self.formal_tag,
            'intermediates': {name: value.to_compact_json() for name, value in self.intermediates.items()},
        }


def _named(location: str, compute, *args):
    try:
        return compute(*args)
    except SuperCalcError as e:
        raise e.at(location)


def _unit_inverses(data: RamondInput) -> List[SuperSeries]:
    inverses = []
    for k, series in enumerate(data.f):
        if series.a(0).body() == 0:
            raise NonInvertibleLeading(f'f_{k + 1}(0) has zero body', f'q_{k + 1}')
        try:
            inverses.append(invert_series(series, trunc_order=0))
        except NonInvertibleLeading as e:
            raise e.at(f'q_{k + 1}')
    return inverses


def _residue_at_point(section: SuperSeries, unit_inverse: SuperSeries) -> GrassmannElement:
    # residue of section / t at q_k, with t ~ z_k f_k
    n = section.num_generators
    zero = GrassmannElement.zero(n)
    return residue_simple_pole(section.multiply(unit_inverse).truncate(0).with_weight(0), zero, zero)


def residue_matrix_A(data: RamondInput) -> SuperMatrix:
    """
    The (2r x r) matrix of residues res_{q_k}(h s / t), h in {1, xi_1 .. xi_{r-1}} over
    the columns and s in {1_k | theta_k} over the rows.

    A' is not a homogeneous supermatrix: the column of h = 1 has odd parity while the
    xi columns are even, yet the layout is declared (r | 0). Only left_inverse, which
    reads the body, consumes it, so validate_parity() flags that column and nothing else.
    """
    n = data.num_generators
    r = data.r
    inverses = _unit_inverses(data)
    one = SuperSeries.constant(1, n)
    theta = SuperSeries.theta(n)
    rows = []
    for s in (one, theta):
        for k in range(r):
            functions = [one] + [data.xi.local_series(j, k) for j in range(r - 1)]
            rows.append([_residue_at_point(h.multiply(s), inverses[k]) for h in functions])
    return SuperMatrix(rows, (r, r), (r, 0), n)


def residue_matrix_B(data: RamondInput) -> SuperMatrix:
    """
    The (2r x g) matrix of residues res_{q_k}(phi_j s varpi_k / t), s in {1 | theta_k}.
    """
    n = data.num_generators
    r = data.r
    inverses = _unit_inverses(data)
    one = SuperSeries.constant(1, n)
    theta = SuperSeries.theta(n)
    rows = []
    for s in (one, theta):
        for k in range(r):
            rows.append([_residue_at_point(data.phi.local_series(j, k).multiply(s), inverses[k])
                         for j in range(data.g)])
    return SuperMatrix(rows, (r, r), (data.g, 0), n)


def _check_left_inverse(name: str, inverse: SuperMatrix, rows: int, cols: int) -> List[List[GrassmannElement]]:
    if inverse.shape != (rows, cols):
        raise DimensionMismatch(f'left inverse must be {rows} x {cols}, got {inverse.shape}', name)
    return inverse.rows()


def build_M0(data: RamondInput, a: SuperMatrix) -> SuperMatrix:
    """
    Relates {1|_T, lifts of xi_2^* .. xi_r^* | xi_j|_T, lift of 1^*} to {1_k | theta_k}.

    Args:
        data: validated Ramond input
        a: an (r x 2r) left inverse of residue_matrix_A

    Returns:
        SuperMatrix: the (r|r) x (r|r) matrix M_0
    """
    n = data.num_generators
    r = data.r
    a_rows = _check_left_inverse('A', a, r, 2 * r)
    one = GrassmannElement.one(n)
    zero = GrassmannElement.zero(n)
    columns = [[one] * r + [zero] * r]
    columns += [a_rows[j] for j in range(1, r)]
    columns += [list(data.xi.minus[j]) + list(data.xi.plus[j]) for j in range(r - 1)]
    columns.append(a_rows[0])
    rows = [[column[i] for column in columns] for i in range(2 * r)]
    return SuperMatrix(rows, (r, r), (r, r), n)


def build_M_minus_half(data: RamondInput, b: SuperMatrix) -> SuperMatrix:
    """
    Rows tau_1 .. tau_{r-g}, lifts of phi_1^* .. phi_g^*, then sigma_1 .. sigma_r, in
    the columns (varpi_k | theta_k varpi_k).

    Args:
        data: validated Ramond input
        b: a (g x 2r) left inverse of residue_matrix_B
    """
    n = data.num_generators
    r = data.r
    b_rows = _check_left_inverse('B', b, data.g, 2 * r)
    rows = [list(data.tau.plus[i]) + list(data.tau.minus[i]) for i in range(r - data.g)]
    rows += [list(row) for row in b_rows]
    rows += [list(data.sigma.minus[i]) + list(data.sigma.plus[i]) for i in range(r)]
    return SuperMatrix(rows, (r, r), (r, r), n)


def build_M_minus_one(data: RamondInput) -> SuperMatrix:
    """Rows eta_j|_T then psi_j|_T in the basis {varpi_k^2 | theta_k varpi_k^2}."""
    r = data.r
    rows = [list(data.eta.plus[i]) + list(data.eta.minus[i]) for i in range(r)]
    rows += [list(data.psi.minus[i]) + list(data.psi.plus[i]) for i in range(r)]
    return SuperMatrix(rows, (r, r), (r, r), data.num_generators)


def ramond_left_inverses(data: RamondInput, seed: Optional[int] = None) -> Tuple[SuperMatrix, SuperMatrix]:
    """
    Left inverses of A' and B'; deterministic unless a seed asks for the randomized ones.
    """
    a_prime = residue_matrix_A(data)
    b_prime = residue_matrix_B(data)
    if seed is None:
        return _named("A'", left_inverse, a_prime), _named("B'", left_inverse, b_prime)
    return (_named("A'", randomized_left_inverse, a_prime, seed),
            _named("B'", randomized_left_inverse, b_prime, seed + 1))


def mumford_ramond(data: RamondInput, left_inverse_seed: Optional[int] = None,
                   left_inverses: Optional[Tuple[SuperMatrix, SuperMatrix]] = None) -> MumfordFormResult:
    """
    mu = d_{-1} d_{1/2}^{-5} (Ber M_0)^2 / (Ber M_{-1} Ber M_{-1/2}).

    Args:
        data: Ramond input, validated before any arithmetic
        left_inverse_seed: use seeded randomized left inverses of A' and B'
        left_inverses: explicit (A, B) pair, overriding the seed

    Returns:
        MumfordFormResult: coefficient, tag and the three Berezinians
    """
    data.validate()
    a, b = left_inverses or ramond_left_inverses(data, left_inverse_seed)
    m0 = _named('M_0', build_M0, data, a)
    m_half = _named('M_{-1/2}', build_M_minus_half, data, b)
    m_one = _named('M_{-1}', build_M_minus_one, data)
    ber0 = _named('M_0', berezinian, m0)
    ber_half = _named('M_{-1/2}', berezinian, m_half)
    ber_one = _named('M_{-1}', berezinian, m_one)
    logger.debug('Ber M_0 = %s, Ber M_{-1/2} = %s, Ber M_{-1} = %s', ber0, ber_half, ber_one)
    denominator = _named('M_{-1}', lambda: (ber_one * ber_half).invert())
    return MumfordFormResult(ber0 * ber0 * denominator, RAMOND_TAG, {
        'Ber M_0': ber0,
        'Ber M_{-1/2}': ber_half,
        'Ber M_{-1}': ber_one,
    })


def _ns_rows(table: ExpansionTable, count: int, even_first: bool) -> List[List[GrassmannElement]]:
    if even_first:
        return [list(table.plus[i]) + list(table.minus[i]) for i in range(count)]
    return [list(table.minus[i]) + list(table.plus[i]) for i in range(count)]


def ns_pairing_matrix(data: NSInput) -> SuperMatrix:
    """
    The (2g-2) x (g-1) residue matrix of the connecting map: rows phi_i^{k,-} at the
    points p_k, then phi_i^{k,+}; one column per phi_i.
    """
    points = data.g - 1
    top = [[data.phi.minus[i][k] for i in range(points)] for k in range(points)]
    bottom = [[data.phi.plus[i][k] for i in range(points)] for k in range(points)]
    return SuperMatrix(top + bottom, (points, points), (0, points), data.num_generators)


def build_M1(data: NSInput, b1: Optional[SuperMatrix] = None) -> SuperMatrix:
    """A_1 = [phi^+ | phi^-] stacked over B_1^t, a left inverse of the pairing matrix."""
    points = data.g - 1
    a1 = SuperMatrix(_ns_rows(data.phi, points, True), (points, 0), (points, points), data.num_generators)
    if b1 is None:
        b1 = _named('A_1', left_inverse, ns_pairing_matrix(data))
    _check_left_inverse('B_1', b1, points, 2 * points)
    return vstack(a1, b1)


def build_M2(data: NSInput) -> SuperMatrix:
    points = data.g - 1
    n = data.num_generators
    rows = _ns_rows(data.chi, points, True) + _ns_rows(data.psi, data.g - 2, False)
    unit = [GrassmannElement.zero(n)] * (2 * points - 1) + [GrassmannElement.one(n)]
    return SuperMatrix(rows + [unit], (points, points), (points, points), n)


def build_M3(data: NSInput) -> SuperMatrix:
    points = data.g - 1
    n = data.num_generators
    if data.xi_inv.body() == 0:
        raise NonInvertibleNormalization('xi_inv has zero body', 'xi_inv')
    normalization = [data.xi_inv] + [GrassmannElement.zero(n)] * (2 * points - 1)
    rows = _ns_rows(data.rho, data.g - 2, True) + [normalization] + _ns_rows(data.sigma, points, False)
    return SuperMatrix(rows, (points, points), (points, points), n)


def build_Mprime(data: NSInput) -> SuperMatrix:
    count = data.n_ns
    rows = _ns_rows(data.alpha, count, True) + _ns_rows(data.beta, count, False)
    return SuperMatrix(rows, (count, count), (count, count), data.num_generators)


def ns_left_inverse(data: NSInput, seed: Optional[int] = None) -> SuperMatrix:
    pairing = ns_pairing_matrix(data)
    if seed is None:
        return _named('A_1', left_inverse, pairing)
    return _named('A_1', randomized_left_inverse, pairing, seed)


def _ns_berezinians(data: NSInput, b1: Optional[SuperMatrix]) -> Dict[str, GrassmannElement]:
    data.validate()
    m1 = _named('M_1', build_M1, data, b1)
    m2 = _named('M_2', build_M2, data)
    m3 = _named('M_3', build_M3, data)
    return {
        'Ber M_1': _named('M_1', berezinian, m1),
        'Ber M_2': _named('M_2', berezinian, m2),
        'Ber M_3': _named('M_3', berezinian, m3),
    }


def mumford_ns(data: NSInput, left_inverse_seed: Optional[int] = None,
               b1: Optional[SuperMatrix] = None) -> MumfordFormResult:
    """mu = d_{3/2} d_{1/2}^{-5} Ber M_3 Ber M_2 / (Ber M_1)^2."""
    if b1 is None and left_inverse_seed is not None:
        data.validate()
        b1 = ns_left_inverse(data, left_inverse_seed)
    bers = _ns_berezinians(data, b1)
    first = bers['Ber M_1']
    denominator = _named('M_1', lambda: (first * first).invert())
    return MumfordFormResult(bers['Ber M_3'] * bers['Ber M_2'] * denominator, NS_TAG, bers)


def mumford_ns_punctured(data: NSInput, left_inverse_seed: Optional[int] = None,
                         b1: Optional[SuperMatrix] = None) -> MumfordFormResult:
    """Ber M_3 Ber M_2 / ((Ber M_1)^2 Ber M') with the n_NS puncture block M'."""
    if data.n_ns < 1:
        raise PreconditionViolated('the punctured form needs n_NS >= 1', 'n_NS')
    unpunctured = mumford_ns(data, left_inverse_seed, b1)
    prime = _named("M'", berezinian, _named("M'", build_Mprime, data))
    inverse = _named("M'", prime.invert)
    intermediates = dict(unpunctured.intermediates)
    intermediates["Ber M'"] = prime
    return MumfordFormResult(unpunctured.coefficient * inverse, NS_PUNCTURED_TAG, intermediates)
