"""
Coordinate changes z = f(x) + lambda(x) theta, zeta = psi(x) + g(x) theta and their
superconformality, in the unpunctured sense and at a Ramond puncture.
"""

import logging
import random
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from .codec import parse_int, require_keys
from .exceptions import InvalidCoordinateChange, NotRamondSuperconformal
from .grassmann import GrassmannElement, Parity
from .supermatrix import SuperMatrix
from .superseries import SuperSeries, d_theta, invert_series, substitute

logger = logging.getLogger(__name__)

SERIES_KEYS = ('f', 'lambda', 'psi', 'g')


class CoordinateChange:
    """
    The quadruple (f, lambda, psi, g) of theta-free power series.

    f and g carry even coefficients, lambda and psi odd ones, and f(0) = 0. All four
    series are cut to their common truncation order. Invertibility of f'(0) is checked
    only by the operations that need it (boundary constraints, quotient matrix), so
    the Ramond check can still answer False for f = x^2.

    Args:
        f: even series with f(0) = 0
        lam: odd series
        psi: odd series
        g: even series
    """

    def __init__(self, f: SuperSeries, lam: SuperSeries, psi: SuperSeries, g: SuperSeries):
        named = {'f': f, 'lambda': lam, 'psi': psi, 'g': g}
        generators = {s.num_generators for s in named.values()}
        if len(generators) != 1:
            raise InvalidCoordinateChange('series use different generator counts')
        for name, series in named.items():
            if not series.theta_part().is_zero() or series.pole_order or series.weight:
                raise InvalidCoordinateChange(f'{name} must be a theta-free power series of weight 0',
                                              name)
            parity = Parity.EVEN if name in ('f', 'g') else Parity.ODD
            if not series.has_parity(parity):
                raise InvalidCoordinateChange(f'{name} must have {parity.name.lower()} coefficients', name)
        if f.a(0):
            raise InvalidCoordinateChange('f(0) must vanish', 'f')
        orders = [s.trunc_order for s in named.values() if s.trunc_order is not None]
        self._trunc_order: Optional[int] = min(orders) if orders else None
        self._num_generators = generators.pop()
        self.f = f.truncate(self._trunc_order)
        self.lam = lam.truncate(self._trunc_order)
        self.psi = psi.truncate(self._trunc_order)
        self.g = g.truncate(self._trunc_order)

    @property
    def trunc_order(self) -> Optional[int]:
        return self._trunc_order

    @property
    def num_generators(self) -> int:
        return self._num_generators

    @classmethod
    def from_coefficients(cls, f, lam, psi, g, num_generators: int,
                          trunc_order: Optional[int] = None) -> 'CoordinateChange':
        """Build from {k: coefficient} maps (rationals or GrassmannElements)."""
        def build(coefficients):
            return SuperSeries.from_even_coefficients(coefficients, num_generators, trunc_order)
        return cls(build(f), build(lam), build(psi), build(g))

    @classmethod
    def identity(cls, num_generators: int, trunc_order: Optional[int] = None) -> 'CoordinateChange':
        return cls.from_coefficients({1: 1}, {}, {}, {0: 1}, num_generators, trunc_order)

    @classmethod
    def scaling(cls, c: Any, num_generators: int, trunc_order: Optional[int] = None) -> 'CoordinateChange':
        """z = c^2 x, zeta = c theta."""
        c = Fraction(c)
        return cls.from_coefficients({1: c * c}, {}, {}, {0: c}, num_generators, trunc_order)

    def lambda_series(self) -> SuperSeries:
        return self.lam

    def z_series(self) -> SuperSeries:
        """z = f + lambda theta as one super series."""
        return self.f + self.lam.multiply(SuperSeries.theta(self._num_generators))

    def zeta_series(self) -> SuperSeries:
        """zeta = psi + g theta as one super series."""
        return self.psi + self.g.multiply(SuperSeries.theta(self._num_generators))

    def superconformal_defect(self) -> SuperSeries:
        zeta = self.zeta_series()
        return d_theta(self.z_series()) - zeta.multiply(d_theta(zeta))

    def is_superconformal(self) -> bool:
        """D_theta z = zeta D_theta zeta up to the truncation order."""
        return self.superconformal_defect().is_zero()

    def ramond_defects(self) -> Tuple[SuperSeries, SuperSeries]:
        x = SuperSeries.z(self._num_generators)
        f, lam, psi, g = self.f, self.lam, self.psi, self.g
        first = lam - f.multiply(g).multiply(psi)
        left = f.multiply(g).multiply(g) + lam.multiply(psi).multiply(g)
        right = x.multiply(f.d_z()) - x.multiply(f).multiply(psi).multiply(psi.d_z())
        return first, left - right

    def is_ramond_superconformal(self) -> bool:
        """
        Both Ramond identities lambda = f g psi and
        f g^2 + lambda psi g = x f' - x f psi psi' hold up to the truncation order.
        """
        return all(defect.is_zero() for defect in self.ramond_defects())

    def to_json(self) -> Dict[str, Any]:
        return {
            'num_generators': self._num_generators,
            'f': self.f.to_json(),
            'lambda': self.lam.to_json(),
            'psi': self.psi.to_json(),
            'g': self.g.to_json(),
        }

    @classmethod
    def from_json(cls, data: Any, where: str = 'change') -> 'CoordinateChange':
        require_keys(data, ('num_generators',) + SERIES_KEYS, where)
        n = parse_int(data['num_generators'], f'{where}.num_generators')
        series = [SuperSeries.from_json(data[key], n, f'{where}.{key}') for key in SERIES_KEYS]
        return cls(*series)

    def __repr__(self) -> str:
        return f'CoordinateChange(f={self.f!r}, lambda={self.lam!r}, psi={self.psi!r}, g={self.g!r})'


def is_superconformal(change: CoordinateChange) -> bool:
    return change.is_superconformal()


def is_ramond_superconformal(change: CoordinateChange) -> bool:
    return change.is_ramond_superconformal()


def _require_ramond(change: CoordinateChange) -> None:
    if not change.is_ramond_superconformal():
        raise NotRamondSuperconformal('coordinate change violates the Ramond identities')
    if not change.f.a(1).body():
        raise InvalidCoordinateChange("f'(0) must have nonzero body", 'f')


def ramond_boundary_constraints(change: CoordinateChange) -> Tuple[GrassmannElement, GrassmannElement]:
    """
    Returns:
        tuple: (g(0)^2, lambda'(0) psi(0)), which equal (1, 0) for every Ramond change
    """
    _require_ramond(change)
    g0 = change.g.a(0)
    return g0 * g0, change.lam.a(1) * change.psi.a(0)


def quotient_change_matrix(change: CoordinateChange) -> SuperMatrix:
    """
    Change of basis on O/(x^2): columns are the images of 1, z, zeta, z zeta
    written in the basis {1, x | theta, x theta}.
    """
    _require_ramond(change)
    n = change.num_generators
    z = change.z_series()
    zeta = change.zeta_series()
    images = [SuperSeries.constant(1, n), z, zeta, z.multiply(zeta)]
    columns = [[image.a(0), image.a(1), image.b(0), image.b(1)] for image in images]
    rows = [[column[i] for column in columns] for i in range(4)]
    return SuperMatrix(rows, (2, 2), (2, 2), n)


def d_star_theta(f: SuperSeries) -> SuperSeries:
    """D*_theta = d/dtheta + x theta d/dx: (a_k + b_k theta) x^k -> b_k x^k + k a_k x^k theta."""
    terms = {k: (b, a.scale(k)) for k, (a, b) in f.items()}
    return SuperSeries(terms, f.num_generators, f.trunc_order, f.weight)


def compose(first: CoordinateChange, second: CoordinateChange) -> CoordinateChange:
    """
    The change obtained by substituting ``second`` into ``first``: if first writes
    z | zeta in terms of x | theta and second writes x | theta in terms of w | eta,
    the result writes z | zeta in terms of w | eta.
    """
    z = substitute(first.z_series(), second)
    zeta = substitute(first.zeta_series(), second)
    return CoordinateChange(z.even_part(), _theta_coefficients(z), zeta.even_part(),
                            _theta_coefficients(zeta))


def _theta_coefficients(series: SuperSeries) -> SuperSeries:
    return SuperSeries.from_even_coefficients({k: b for k, (_, b) in series.items()},
                                              series.num_generators, series.trunc_order)


def _random_odd_series(rng: random.Random, num_generators: int, trunc_order: int,
                       start: int = 0) -> SuperSeries:
    return SuperSeries.from_even_coefficients(
        {k: GrassmannElement.random(rng, num_generators, Parity.ODD) for k in range(start, trunc_order + 1)},
        num_generators, trunc_order)


def _random_even_series(rng: random.Random, num_generators: int, trunc_order: int,
                        start: int = 0) -> SuperSeries:
    return SuperSeries.from_even_coefficients(
        {k: GrassmannElement.random(rng, num_generators, Parity.EVEN) for k in range(start, trunc_order + 1)},
        num_generators, trunc_order)


def random_superconformal_change(rng: random.Random, trunc_order: int, num_generators: int,
                                 fix_origin: bool = True) -> CoordinateChange:
    """
    Random change with D_theta z = zeta D_theta zeta.

    psi and g are drawn freely (g(0) with nonzero body), then lambda = psi g and
    f is the antiderivative of g^2 + psi psi' with f(0) = 0. With ``fix_origin``
    psi(0) = 0, so the point x = theta = 0 maps to z = zeta = 0.
    """
    n = num_generators
    psi = _random_odd_series(rng, n, trunc_order, start=1 if fix_origin else 0)
    g = _random_even_series(rng, n, trunc_order, start=1) + SuperSeries.constant(
        GrassmannElement.random(rng, n, Parity.EVEN, invertible=True), n)
    derivative = g.multiply(g) + psi.multiply(psi.d_z())
    f = SuperSeries.from_even_coefficients(
        {k + 1: a.scale(Fraction(1, k + 1)) for k, (a, _) in derivative.items()}, n, trunc_order)
    return CoordinateChange(f, psi.multiply(g), psi, g)


def random_ramond_change(rng: random.Random, trunc_order: int, num_generators: int,
                         branch_sign: int = 1) -> CoordinateChange:
    """
    Random change satisfying the Ramond identities.

    f = x (f_1 + ...) with f_1 invertible and psi odd are drawn freely, g solves
    g^2 = x f'/f - x psi psi' (the right side has constant term 1, so the series
    square root exists with g(0) = branch_sign), and lambda = f g psi.

    Args:
        rng: source of randomness
        trunc_order: truncation order of the drawn data; the result is one order lower
        num_generators: generator count
        branch_sign: sign of g(0)

    Returns:
        CoordinateChange: a Ramond-superconformal change
    """
    n = num_generators
    leading = GrassmannElement.random(rng, n, Parity.EVEN, invertible=True)
    f = _random_even_series(rng, n, trunc_order, start=2) + SuperSeries.monomial(1, leading, n)
    psi = _random_odd_series(rng, n, trunc_order)
    x = SuperSeries.z(n)
    radicand = (x.multiply(f.d_z()).multiply(invert_series(f))
                - x.multiply(psi).multiply(psi.d_z()))
    g = radicand.sqrt(branch_sign)
    lam = f.multiply(g).multiply(psi)
    logger.debug('random Ramond change with g(0) = %s', g.a(0))
    return CoordinateChange(f, lam, psi, g)
