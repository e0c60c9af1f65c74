"""
Fixture builders: identity-structured inputs whose Mumford coefficient is 1, seeded
random inputs, and random inputs that satisfy the residue relations under which the
coefficient does not depend on the chosen left inverses.
"""

import logging
import random
from typing import Any, Callable, Dict, List, Optional

from .exceptions import PreconditionViolated, SuperCalcError
from .grassmann import GrassmannElement, Parity
from .moduli_ranks import r_value
from .mumford import (
    ExpansionTable,
    NSInput,
    RamondInput,
    mumford_ns,
    mumford_ns_punctured,
    mumford_ramond,
)
from .supermatrix import SuperMatrix, multiplication_matrix, random_even_matrix
from .superseries import SuperSeries

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 50


def _unit_rows(sections: int, points: int, num_generators: int, position) -> List[List[GrassmannElement]]:
    one = GrassmannElement.one(num_generators)
    zero = GrassmannElement.zero(num_generators)
    return [[one if position(j) == k else zero for k in range(points)] for j in range(sections)]


def _even_table(name: str, plus: List[List[GrassmannElement]], num_generators: int,
                points: int) -> ExpansionTable:
    zero = GrassmannElement.zero(num_generators)
    return ExpansionTable.build(name, [[zero] * points for _ in plus], plus)


def _unit_table(name: str, sections: int, points: int, num_generators: int, position) -> ExpansionTable:
    return _even_table(name, _unit_rows(sections, points, num_generators, position), num_generators, points)


def ramond_identity_input(g: int = 2, n_r: int = 8, num_generators: int = 2) -> RamondInput:
    """
    f_k = 1, xi_j = 1 at q_{j+1}, phi_j and tau_i unit vectors filling the even block
    of M_{-1/2}, sigma, eta and psi the identity. Every Berezinian is +1 or -1 with
    (Ber M_0)^2 = Ber M_{-1/2} = Ber M_{-1} = 1.
    """
    r = r_value(g, n_r)
    n = num_generators
    return RamondInput(
        g, n_r, n,
        f=[SuperSeries.constant(1, n) for _ in range(r)],
        xi=_unit_table('xi', r - 1, r, n, lambda j: j + 1),
        phi=_unit_table('phi', g, r, n, lambda j: r - g + j),
        sigma=_unit_table('sigma', r, r, n, lambda j: j),
        tau=_unit_table('tau', r - g, r, n, lambda j: j),
        eta=_unit_table('eta', r, r, n, lambda j: j),
        psi=_unit_table('psi', r, r, n, lambda j: j),
    )


def ns_identity_input(g: int = 3, n_ns: int = 2, num_generators: int = 2) -> NSInput:
    """
    Identity-structured NS data: the normalization entry is (-1)^(g-2), which cancels
    the sign of the cyclic even block of M_3.
    """
    n = num_generators
    points = g - 1
    return NSInput(
        g, n_ns, n,
        phi=_unit_table('phi', points, points, n, lambda j: j),
        chi=_unit_table('chi', points, points, n, lambda j: j),
        psi=_unit_table('psi', g - 2, points, n, lambda j: j),
        sigma=_unit_table('sigma', points, points, n, lambda j: j),
        rho=_unit_table('rho', g - 2, points, n, lambda j: j + 1),
        xi_inv=GrassmannElement.scalar((-1) ** (g - 2), n),
        alpha=_unit_table('alpha', n_ns, n_ns, n, lambda j: j),
        beta=_unit_table('beta', n_ns, n_ns, n, lambda j: j),
    )


def sample_multiplication_matrix(num_generators: int = 3) -> SuperMatrix:
    """m_f for f = 2 + e0 e1 + e0 e2, the odd direction a being e2."""
    n = num_generators
    f0 = GrassmannElement({(): 2, (0, 1): 1}, n)
    f1 = GrassmannElement({(0,): 1}, n)
    return multiplication_matrix(f0, f1)


def random_multiplication_matrix(rng: random.Random, num_generators: int = 4) -> SuperMatrix:
    """m_f for random f0 + f1 a with f0, f1 free of the last generator a."""
    inner = num_generators - 1
    f0 = GrassmannElement.random(rng, inner, Parity.EVEN, invertible=True)
    f1 = GrassmannElement.random(rng, inner, Parity.ODD)
    return multiplication_matrix(GrassmannElement(dict(f0.terms), num_generators),
                                 GrassmannElement(dict(f1.terms), num_generators))


def _random_rows(rng: random.Random, sections: int, points: int, num_generators: int,
                 parity: Parity) -> List[List[GrassmannElement]]:
    return [[GrassmannElement.random(rng, num_generators, parity, max_terms=2) for _ in range(points)]
            for _ in range(sections)]


def _random_table(rng: random.Random, name: str, sections: int, points: int, num_generators: int,
                  plus: Optional[List[List[GrassmannElement]]] = None, odd: bool = True) -> ExpansionTable:
    """Table with the given (or random) even part and a random or zero odd part."""
    if plus is None:
        plus = _random_rows(rng, sections, points, num_generators, Parity.EVEN)
    if odd:
        minus = _random_rows(rng, sections, points, num_generators, Parity.ODD)
    else:
        minus = [[GrassmannElement.zero(num_generators)] * points for _ in range(sections)]
    return ExpansionTable.build(name, minus, plus)


def _invertible_rows(rng: random.Random, size: int, num_generators: int) -> List[List[GrassmannElement]]:
    return random_even_matrix(rng, (size, 0), num_generators, invertible=True).rows()


def _unit_series(rng: random.Random, head: GrassmannElement, num_generators: int,
                 odd: bool) -> SuperSeries:
    terms = {0: (head, GrassmannElement.random(rng, num_generators, Parity.ODD) if odd
                 else GrassmannElement.zero(num_generators))}
    for k in (1, 2):
        terms[k] = (GrassmannElement.random(rng, num_generators, Parity.EVEN, max_terms=1),
                    GrassmannElement.random(rng, num_generators, Parity.ODD, max_terms=1) if odd
                    else GrassmannElement.zero(num_generators))
    return SuperSeries(terms, num_generators, trunc_order=2)


def _retry(seed: int, draw: Callable[[random.Random], Any], accept: Callable[[Any], Any], what: str):
    for attempt in range(MAX_ATTEMPTS):
        candidate = draw(random.Random(seed * 1000 + attempt))
        try:
            accept(candidate)
        except SuperCalcError as e:
            logger.debug('%s draw %s rejected: %s', what, attempt, e.message)
            continue
        return candidate
    raise PreconditionViolated(f'no usable {what} after {MAX_ATTEMPTS} draws for seed {seed}')


def random_ramond_input(seed: int, g: int = 2, n_r: int = 8, num_generators: int = 4) -> RamondInput:
    """
    Parity-valid random Ramond data with every odd coefficient populated, redrawn until
    the Mumford coefficient is defined. Such data need not come from global sections,
    so the coefficient may depend on the left inverses.
    """
    r = r_value(g, n_r)
    n = num_generators

    def draw(rng: random.Random) -> RamondInput:
        f = [_unit_series(rng, GrassmannElement.random(rng, n, Parity.EVEN, invertible=True), n, True)
             for _ in range(r)]
        return RamondInput(
            g, n_r, n, f,
            xi=_random_table(rng, 'xi', r - 1, r, n),
            phi=_random_table(rng, 'phi', g, r, n),
            sigma=_random_table(rng, 'sigma', r, r, n, _invertible_rows(rng, r, n)),
            tau=_random_table(rng, 'tau', r - g, r, n),
            eta=_random_table(rng, 'eta', r, r, n, _invertible_rows(rng, r, n)),
            psi=_random_table(rng, 'psi', r, r, n, _invertible_rows(rng, r, n)),
        )

    return _retry(seed, draw, mumford_ramond, 'Ramond input')


def consistent_ramond_input(seed: int, g: int = 2, n_r: int = 8, num_generators: int = 4) -> RamondInput:
    """
    Random Ramond data obeying the relations of sections that exist globally.

    With W and U random invertible even matrices and p the first row of W^-1:
    xi_j^{k,+} = W[k][j+1] and f_k(0) = 1/p_k, so the residues of xi_j / t sum to zero;
    phi_j^{k,+} = U[k][j] / p_k and tau^+ is the last r - g rows of U^-1. The odd
    parts of xi, phi, sigma and of the unit series vanish.
    """
    r = r_value(g, n_r)
    n = num_generators

    def draw(rng: random.Random) -> RamondInput:
        w = random_even_matrix(rng, (r, 0), n, invertible=True)
        p = w.inverse().rows()[0]
        if any(value.body() == 0 for value in p):
            return None
        w_rows = w.rows()
        u = random_even_matrix(rng, (r, 0), n, invertible=True)
        u_rows = u.rows()
        u_inverse = u.inverse().rows()
        p_inverse = [value.invert() for value in p]
        f = [_unit_series(rng, p_inverse[k], n, False) for k in range(r)]
        xi_plus = [[w_rows[k][j + 1] for k in range(r)] for j in range(r - 1)]
        phi_plus = [[u_rows[k][j] * p_inverse[k] for k in range(r)] for j in range(g)]
        data = RamondInput(
            g, n_r, n, f,
            xi=_random_table(rng, 'xi', r - 1, r, n, xi_plus, odd=False),
            phi=_random_table(rng, 'phi', g, r, n, phi_plus, odd=False),
            sigma=_random_table(rng, 'sigma', r, r, n, _invertible_rows(rng, r, n), odd=False),
            tau=_random_table(rng, 'tau', r - g, r, n, [list(row) for row in u_inverse[g:]]),
            eta=_random_table(rng, 'eta', r, r, n, _invertible_rows(rng, r, n)),
            psi=_random_table(rng, 'psi', r, r, n, _invertible_rows(rng, r, n)),
        )
        return data

    def accept(data: Optional[RamondInput]) -> None:
        if data is None:
            raise PreconditionViolated('some p_k has zero body, 1/p_k is not a unit')
        mumford_ramond(data)

    return _retry(seed, draw, accept, 'consistent Ramond input')


def _ns_draw(rng: random.Random, g: int, n_ns: int, n: int, odd_phi: bool) -> NSInput:
    points = g - 1
    return NSInput(
        g, n_ns, n,
        phi=_random_table(rng, 'phi', points, points, n, _invertible_rows(rng, points, n), odd=odd_phi),
        chi=_random_table(rng, 'chi', points, points, n, _invertible_rows(rng, points, n)),
        psi=_random_table(rng, 'psi', g - 2, points, n),
        sigma=_random_table(rng, 'sigma', points, points, n, _invertible_rows(rng, points, n)),
        rho=_random_table(rng, 'rho', g - 2, points, n),
        xi_inv=GrassmannElement.random(rng, n, Parity.EVEN, invertible=True),
        alpha=_random_table(rng, 'alpha', n_ns, n_ns, n, _invertible_rows(rng, n_ns, n) if n_ns else []),
        beta=_random_table(rng, 'beta', n_ns, n_ns, n, _invertible_rows(rng, n_ns, n) if n_ns else []),
    )


def _ns_accept(data: NSInput) -> None:
    if data.n_ns:
        mumford_ns_punctured(data)
    else:
        mumford_ns(data)


def random_ns_input(seed: int, g: int = 3, n_ns: int = 2, num_generators: int = 4) -> NSInput:
    """Random NS data with odd parts everywhere, including phi."""
    return _retry(seed, lambda rng: _ns_draw(rng, g, n_ns, num_generators, True), _ns_accept, 'NS input')


def consistent_ns_input(seed: int, g: int = 3, n_ns: int = 2, num_generators: int = 4) -> NSInput:
    """
    Random NS data with phi^- = 0: the pairing matrix then has a vanishing upper block
    and every left inverse of it yields the same Ber M_1.
    """
    return _retry(seed, lambda rng: _ns_draw(rng, g, n_ns, num_generators, False), _ns_accept,
                  'consistent NS input')


def sample_documents() -> Dict[str, Dict[str, Any]]:
    """The JSON documents written by make_samples, keyed by file name."""
    b_matrix = sample_multiplication_matrix()
    return {
        'ramond_identity.json': ramond_identity_input().to_json(),
        'ramond_random.json': consistent_ramond_input(1).to_json(),
        'ns_identity.json': ns_identity_input().to_json(),
        'ns_random.json': consistent_ns_input(1).to_json(),
        'multiplication_matrix.json': dict(b_matrix.to_json(), num_generators=b_matrix.num_generators),
    }
