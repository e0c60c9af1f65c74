"""
Truncated super Laurent series in one even variable z and one odd variable theta.

A series is sum_k (a_k + b_k theta) z^k with Grassmann coefficients written to
the left of theta, and a weight j recording that it stands for f [dz|dtheta]^j.
``trunc_order`` M means every exponent above M is unknown; ``None`` marks an
exact series (a polynomial known completely). Arithmetic propagates the order
that is actually guaranteed.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, Iterator, Mapping, Optional, Tuple

from .codec import parse_int, require_keys
from .exceptions import (
    EvaluationOutsideTruncation,
    GeneratorMismatch,
    MalformedInput,
    NonInvertibleLeading,
    NotSuperconformal,
    ParityViolation,
    PreconditionViolated,
    SingularEvaluation,
    WrongWeight,
)
from .grassmann import GrassmannElement, Parity

if TYPE_CHECKING:
    from .superconformal import CoordinateChange

logger = logging.getLogger(__name__)

Pair = Tuple[GrassmannElement, GrassmannElement]


def _min_order(*orders: Optional[int]) -> Optional[int]:
    known = [o for o in orders if o is not None]
    return min(known) if known else None


class SuperSeries:
    """
    Immutable truncated super Laurent series.

    Args:
        terms: map k -> (a_k, b_k)
        num_generators: generator count of every coefficient
        trunc_order: highest known exponent, or None when exact
        weight: form degree j of f [dz|dtheta]^j
    """

    __slots__ = ('_terms', '_num_generators', '_trunc_order', '_weight')

    def __init__(self, terms: Mapping[int, Pair], num_generators: int,
                 trunc_order: Optional[int] = None, weight: int = 0):
        clean: Dict[int, Pair] = {}
        for k, (a, b) in terms.items():
            for element in (a, b):
                if element.num_generators != num_generators:
                    raise GeneratorMismatch(
                        f'coefficient at z^{k} lives over {element.num_generators} generators, '
                        f'expected {num_generators}')
            if trunc_order is not None and k > trunc_order:
                continue
            if a or b:
                clean[k] = (a, b)
        self._terms = clean
        self._num_generators = num_generators
        self._trunc_order = trunc_order
        self._weight = weight

    @classmethod
    def constant(cls, a: Any, num_generators: int, b: Any = 0, weight: int = 0,
                 trunc_order: Optional[int] = None) -> 'SuperSeries':
        return cls.monomial(0, a, num_generators, b, weight, trunc_order)

    @classmethod
    def monomial(cls, k: int, a: Any, num_generators: int, b: Any = 0, weight: int = 0,
                 trunc_order: Optional[int] = None) -> 'SuperSeries':
        """The exact series (a + b theta) z^k."""
        return cls({k: (_element(a, num_generators), _element(b, num_generators))},
                   num_generators, trunc_order, weight)

    @classmethod
    def theta(cls, num_generators: int) -> 'SuperSeries':
        return cls.constant(0, num_generators, b=1)

    @classmethod
    def z(cls, num_generators: int) -> 'SuperSeries':
        return cls.monomial(1, 1, num_generators)

    @classmethod
    def from_even_coefficients(cls, coefficients: Mapping[int, Any], num_generators: int,
                               trunc_order: Optional[int] = None, weight: int = 0) -> 'SuperSeries':
        """Series with no theta part, sum_k c_k z^k."""
        zero = GrassmannElement.zero(num_generators)
        return cls({k: (_element(c, num_generators), zero) for k, c in coefficients.items()},
                   num_generators, trunc_order, weight)

    @property
    def num_generators(self) -> int:
        return self._num_generators

    @property
    def trunc_order(self) -> Optional[int]:
        return self._trunc_order

    @property
    def weight(self) -> int:
        return self._weight

    @property
    def pole_order(self) -> int:
        lowest = self.valuation()
        return max(0, -lowest) if lowest is not None else 0

    def is_exact(self) -> bool:
        return self._trunc_order is None

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self) -> Optional[int]:
        """Lowest exponent with a nonzero coefficient, None for the zero series."""
        return min(self._terms) if self._terms else None

    def _reach(self) -> float:
        # lowest exponent that may be nonzero, counting unknown terms
        lowest = self.valuation()
        if lowest is not None:
            return lowest
        return float('inf') if self._trunc_order is None else self._trunc_order + 1

    def coefficient(self, k: int) -> Pair:
        zero = GrassmannElement.zero(self._num_generators)
        return self._terms.get(k, (zero, zero))

    def a(self, k: int) -> GrassmannElement:
        return self.coefficient(k)[0]

    def b(self, k: int) -> GrassmannElement:
        return self.coefficient(k)[1]

    def items(self) -> Iterator[Tuple[int, Pair]]:
        return iter(sorted(self._terms.items()))

    def with_weight(self, weight: int) -> 'SuperSeries':
        return SuperSeries(self._terms, self._num_generators, self._trunc_order, weight)

    def truncate(self, order: Optional[int]) -> 'SuperSeries':
        return SuperSeries(self._terms, self._num_generators, _min_order(self._trunc_order, order),
                           self._weight)

    def even_part(self) -> 'SuperSeries':
        """The theta-free part A of A + B theta."""
        zero = GrassmannElement.zero(self._num_generators)
        return SuperSeries({k: (a, zero) for k, (a, _) in self._terms.items()},
                           self._num_generators, self._trunc_order, self._weight)

    def theta_part(self) -> 'SuperSeries':
        """The series B theta of A + B theta."""
        zero = GrassmannElement.zero(self._num_generators)
        return SuperSeries({k: (zero, b) for k, (_, b) in self._terms.items()},
                           self._num_generators, self._trunc_order, self._weight)

    def has_parity(self, parity: Parity) -> bool:
        """True when every a_k has ``parity`` and every b_k the opposite one."""
        return all(a.has_parity(parity) and b.has_parity(parity.flip()) for a, b in self._terms.values())

    def _check(self, other: 'SuperSeries') -> None:
        if other._num_generators != self._num_generators:
            raise GeneratorMismatch(
                f'series over {self._num_generators} and {other._num_generators} generators')

    def __add__(self, other: 'SuperSeries') -> 'SuperSeries':
        self._check(other)
        if self._weight != other._weight:
            raise WrongWeight(f'cannot add weights {self._weight} and {other._weight}')
        terms = dict(self._terms)
        for k, (a, b) in other._terms.items():
            if k in terms:
                a0, b0 = terms[k]
                terms[k] = (a0 + a, b0 + b)
            else:
                terms[k] = (a, b)
        return SuperSeries(terms, self._num_generators,
                           _min_order(self._trunc_order, other._trunc_order), self._weight)

    def __neg__(self) -> 'SuperSeries':
        return SuperSeries({k: (-a, -b) for k, (a, b) in self._terms.items()},
                           self._num_generators, self._trunc_order, self._weight)

    def __sub__(self, other: 'SuperSeries') -> 'SuperSeries':
        return self + (-other)

    def multiply(self, other: 'SuperSeries') -> 'SuperSeries':
        """
        Cauchy product with theta^2 = 0.

        (a1 + b1 theta)(a2 + b2 theta) = a1 a2 + (a1 b2 + b1 inv(a2)) theta, inv the
        grade involution. Weights add; the result is known up to
        min(M1 + v2, M2 + v1) with v the valuations.
        """
        self._check(other)
        bounds = []
        if self._trunc_order is not None:
            bounds.append(self._trunc_order + other._reach())
        if other._trunc_order is not None:
            bounds.append(other._trunc_order + self._reach())
        bound = min(bounds) if bounds else float('inf')
        trunc = None if bound == float('inf') else int(bound)
        terms: Dict[int, Pair] = {}
        for k1, (a1, b1) in self._terms.items():
            for k2, (a2, b2) in other._terms.items():
                k = k1 + k2
                if trunc is not None and k > trunc:
                    continue
                a = a1 * a2
                b = a1 * b2 + b1 * a2.involution()
                if k in terms:
                    a0, b0 = terms[k]
                    terms[k] = (a0 + a, b0 + b)
                else:
                    terms[k] = (a, b)
        return SuperSeries(terms, self._num_generators, trunc, self._weight + other._weight)

    def __mul__(self, other: Any) -> 'SuperSeries':
        if isinstance(other, SuperSeries):
            return self.multiply(other)
        if isinstance(other, (int, Fraction, GrassmannElement)) and not isinstance(other, bool):
            return self.multiply(SuperSeries.constant(other, self._num_generators))
        return NotImplemented

    def __rmul__(self, other: Any) -> 'SuperSeries':
        if isinstance(other, (int, Fraction, GrassmannElement)) and not isinstance(other, bool):
            return SuperSeries.constant(other, self._num_generators).multiply(self)
        return NotImplemented

    def __pow__(self, exponent: int) -> 'SuperSeries':
        if exponent < 0:
            return invert_series(self) ** (-exponent)
        result = SuperSeries.constant(1, self._num_generators)
        for _ in range(exponent):
            result = result.multiply(self)
        return result

    def d_z(self) -> 'SuperSeries':
        """Derivative in z, coefficientwise (a_k, b_k) z^k -> k (a_k, b_k) z^(k-1)."""
        terms = {k - 1: (a.scale(k), b.scale(k)) for k, (a, b) in self._terms.items() if k}
        trunc = None if self._trunc_order is None else self._trunc_order - 1
        return SuperSeries(terms, self._num_generators, trunc, self._weight)

    def sqrt(self, sign: int = 1) -> 'SuperSeries':
        """
        Square root of a theta-free even series with invertible constant term.

        The constant term must be an element whose body is a rational square; the
        branch is chosen by the sign of the body of the result.
        """
        if not self.theta_part().is_zero():
            raise PreconditionViolated('square root needs a series without theta part')
        if not self.has_parity(Parity.EVEN) or (self.valuation() or 0) < 0:
            raise PreconditionViolated('square root needs an even power series')
        head = self.a(0)
        if head.body() == 0:
            raise NonInvertibleLeading('constant term of the radicand has zero body')
        order = self._trunc_order
        if order is None:
            raise PreconditionViolated('square root of an exact series needs a truncation order')
        roots = [head.sqrt(sign)]
        half_inverse = (roots[0] * 2).invert()
        for n in range(1, order + 1):
            total = self.a(n)
            for i in range(1, n):
                total = total - roots[i] * roots[n - i]
            roots.append(half_inverse * total)
        return SuperSeries.from_even_coefficients(dict(enumerate(roots)), self._num_generators, order,
                                                  self._weight)

    def equal_up_to(self, other: 'SuperSeries', order: Optional[int] = None) -> bool:
        """Coefficientwise equality up to the order both sides guarantee."""
        self._check(other)
        limit = _min_order(self._trunc_order, other._trunc_order, order)
        keys = set(self._terms) | set(other._terms)
        return all(self.coefficient(k) == other.coefficient(k)
                   for k in keys if limit is None or k <= limit)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SuperSeries):
            return NotImplemented
        return (self._num_generators == other._num_generators and self._weight == other._weight
                and self._trunc_order == other._trunc_order and self._terms == other._terms)

    def __repr__(self) -> str:
        parts = []
        for k, (a, b) in self.items():
            parts.append(f'({a} + ({b})th)z^{k}')
        tail = '' if self._trunc_order is None else f' + O(z^{self._trunc_order + 1})'
        return f'SuperSeries[{self._weight}]({" + ".join(parts) or "0"}{tail})'

    @classmethod
    def random(cls, rng: random.Random, num_generators: int, pole_order: int = 0, trunc_order: int = 4,
               weight: int = 0, parity: Parity = Parity.EVEN, max_terms: int = 2) -> 'SuperSeries':
        """Seeded random parity-homogeneous series with the given pole and truncation orders."""
        terms = {}
        for k in range(-pole_order, trunc_order + 1):
            a = GrassmannElement.random(rng, num_generators, parity, max_terms=max_terms)
            b = GrassmannElement.random(rng, num_generators, parity.flip(), max_terms=max_terms)
            terms[k] = (a, b)
        if pole_order and parity is Parity.EVEN:
            a, b = terms[-pole_order]
            terms[-pole_order] = (a + (0 if a.body() else 1), b)
        return cls(terms, num_generators, trunc_order, weight)

    def to_json(self) -> Dict[str, Any]:
        return {
            'weight': self._weight,
            'pole_order': self.pole_order,
            'trunc_order': self._trunc_order,
            'terms': [{'k': k, 'a': a.to_json(), 'b': b.to_json()} for k, (a, b) in self.items()],
        }

    @classmethod
    def from_json(cls, data: Any, num_generators: int, where: str = 'series') -> 'SuperSeries':
        require_keys(data, ('terms',), where)
        weight = parse_int(data.get('weight', 0), f'{where}.weight')
        pole_order = parse_int(data.get('pole_order', 0), f'{where}.pole_order')
        trunc_order = data.get('trunc_order')
        if trunc_order is not None:
            trunc_order = parse_int(trunc_order, f'{where}.trunc_order')
        if pole_order < 0 or (trunc_order is not None and trunc_order < -pole_order):
            raise MalformedInput('inconsistent pole and truncation orders', where)
        if not isinstance(data['terms'], list):
            raise MalformedInput('"terms" must be a list', where)
        terms: Dict[int, Pair] = {}
        for index, term in enumerate(data['terms']):
            spot = f'{where}.terms[{index}]'
            require_keys(term, ('k',), spot)
            k = parse_int(term['k'], spot)
            if k < -pole_order or (trunc_order is not None and k > trunc_order):
                raise MalformedInput(f'exponent {k} outside [-{pole_order}, {trunc_order}]', spot)
            a = GrassmannElement.from_json(term.get('a', []), num_generators, spot)
            b = GrassmannElement.from_json(term.get('b', []), num_generators, spot)
            if k in terms:
                a0, b0 = terms[k]
                a, b = a0 + a, b0 + b
            terms[k] = (a, b)
        return cls(terms, num_generators, trunc_order, weight)


def _element(value: Any, num_generators: int) -> GrassmannElement:
    if isinstance(value, GrassmannElement):
        return value
    return GrassmannElement.scalar(Fraction(value), num_generators)


@dataclass(frozen=True)
class OneFormLocal:
    """A one-form dtheta * dtheta_part + varpi * varpi_part, varpi = dz - theta dtheta."""

    dtheta_part: SuperSeries
    varpi_part: SuperSeries

    def to_json(self) -> Dict[str, Any]:
        return {'dtheta_part': self.dtheta_part.to_json(), 'varpi_part': self.varpi_part.to_json()}


def add(f: SuperSeries, g: SuperSeries) -> SuperSeries:
    return f + g


def multiply(f: SuperSeries, g: SuperSeries) -> SuperSeries:
    return f.multiply(g)


def _invert_theta_free(series: SuperSeries, trunc_order: Optional[int]) -> SuperSeries:
    lowest = series.valuation()
    if lowest is None or series.a(lowest).body() == 0:
        raise NonInvertibleLeading('leading coefficient has zero body')
    n = series.num_generators
    result_order = None if series.trunc_order is None else series.trunc_order - 2 * lowest
    if result_order is None:
        if len(series._terms) == 1:
            return SuperSeries.monomial(-lowest, series.a(lowest).invert(), n, weight=-series.weight)
        if trunc_order is None:
            raise PreconditionViolated('inverse of an exact polynomial needs a truncation order')
        result_order = trunc_order
    elif trunc_order is not None:
        result_order = min(result_order, trunc_order)
    count = result_order + lowest
    if count < 0:
        return SuperSeries({}, n, result_order, -series.weight)
    c = [series.a(lowest + i) for i in range(count + 1)]
    head_inverse = c[0].invert()
    v = [head_inverse]
    for m in range(1, count + 1):
        total = GrassmannElement.zero(n)
        for i in range(1, m + 1):
            total = total + c[i] * v[m - i]
        v.append(-(head_inverse * total))
    return SuperSeries.from_even_coefficients({m - lowest: v[m] for m in range(count + 1)}, n,
                                              result_order, -series.weight)


def invert_series(f: SuperSeries, trunc_order: Optional[int] = None) -> SuperSeries:
    """
    Multiplicative inverse of A + B theta, computed as A^-1 - A^-1 (B theta) A^-1.

    Args:
        f: series whose theta-free part has a leading coefficient with invertible body
        trunc_order: cap on the result order, required when f is an exact polynomial

    Returns:
        SuperSeries: the inverse, weight negated
    """
    inverse = _invert_theta_free(f.even_part(), trunc_order)
    correction = f.theta_part()
    if correction.is_zero():
        return inverse
    return inverse - inverse.multiply(correction).multiply(inverse)


def d_theta(f: SuperSeries) -> SuperSeries:
    """
    D_theta = d/dtheta + theta d/dz, coefficientwise
    (a_k + b_k theta) z^k -> b_k z^k + k a_k theta z^(k-1). The weight is kept.
    """
    zero = GrassmannElement.zero(f.num_generators)
    terms: Dict[int, Pair] = {}
    for k, (a, b) in f.items():
        a0, b0 = terms.get(k, (zero, zero))
        terms[k] = (a0 + b, b0)
        if k:
            a1, b1 = terms.get(k - 1, (zero, zero))
            terms[k - 1] = (a1, b1 + a.scale(k))
    trunc = None if f.trunc_order is None else f.trunc_order - 1
    return SuperSeries(terms, f.num_generators, trunc, f.weight)


def residue(section: SuperSeries) -> GrassmannElement:
    """Residue b_{-1} of a section of omega (weight 1)."""
    if section.weight != 1:
        raise WrongWeight(f'residue needs weight 1, got {section.weight}')
    return section.b(-1)


def residue_simple_pole(f: SuperSeries, z0: GrassmannElement, theta0: GrassmannElement) -> GrassmannElement:
    """
    Residue of (z - z0 - theta theta0)^-1 f [dz|dtheta], i.e. (D_theta f)(z0 | theta0).

    Args:
        f: weight 0 series regular at the origin
        z0: even point with zero body
        theta0: odd point

    Returns:
        GrassmannElement: sum_k b_k z0^k + sum_k k a_k theta0 z0^(k-1)
    """
    if f.weight != 0:
        raise WrongWeight(f'simple-pole residue needs weight 0, got {f.weight}')
    if not z0.has_parity(Parity.EVEN) or not theta0.has_parity(Parity.ODD):
        raise ParityViolation('evaluation point must be (even | odd)')
    if f.pole_order:
        raise SingularEvaluation(f'series has a pole of order {f.pole_order}')
    if z0.body() != 0:
        raise EvaluationOutsideTruncation('evaluation point must be nilpotent')
    powers = [GrassmannElement.one(f.num_generators)]
    while powers[-1]:
        powers.append(powers[-1] * z0)
    powers.pop()
    top = len(powers) - 1
    needed = top + 1 if theta0 else top
    if f.trunc_order is not None and f.trunc_order < needed:
        raise EvaluationOutsideTruncation(
            f'evaluation needs terms up to z^{needed}, series known to z^{f.trunc_order}')
    total = GrassmannElement.zero(f.num_generators)
    for k, (a, b) in f.items():
        if k <= top:
            total = total + b * powers[k]
        if theta0 and 1 <= k <= top + 1:
            total = total + a.scale(k) * theta0 * powers[k - 1]
    return total


def alpha(section: SuperSeries) -> OneFormLocal:
    """Image dtheta f + varpi D_theta f of a section f [dz|dtheta] of omega."""
    if section.weight != 1:
        raise WrongWeight(f'alpha needs weight 1, got {section.weight}')
    derivative = d_theta(section).with_weight(0)
    return OneFormLocal(section.with_weight(0).truncate(derivative.trunc_order), derivative)


def substitute(f: SuperSeries, change: 'CoordinateChange') -> SuperSeries:
    """
    Pull f(z | zeta) back along z = f(x) + lambda(x) theta, zeta = psi(x) + g(x) theta.

    Args:
        f: series in z | zeta with its pole at the fixed point of the change
        change: coordinate change fixing the origin

    Returns:
        SuperSeries: sum_k (a_k + b_k zeta) z^k expanded in x | theta, same weight
    """
    z = change.z_series()
    zeta = change.zeta_series()
    n = f.num_generators
    if z.num_generators != n:
        raise GeneratorMismatch('series and coordinate change use different generator counts')
    result = SuperSeries({}, n)
    if f.is_zero() and f.trunc_order is None:
        return result.with_weight(f.weight)
    lowest = f.valuation() if not f.is_zero() else 0
    highest = max(f._terms) if not f.is_zero() else 0
    powers: Dict[int, SuperSeries] = {0: SuperSeries.constant(1, n)}
    for k in range(1, max(highest, 0) + 1):
        powers[k] = powers[k - 1].multiply(z)
    if lowest < 0:
        z_inverse = invert_series(z)
        for k in range(-1, lowest - 1, -1):
            powers[k] = powers[k + 1].multiply(z_inverse)
    for k, (a, b) in f.items():
        factor = SuperSeries.constant(a, n) + SuperSeries.constant(b, n).multiply(zeta)
        result = result + factor.multiply(powers[k])
    if f.trunc_order is not None:
        # terms above the truncation order start at min(M + 1, M + v(lambda))
        reach = change.lambda_series()._reach()
        omitted = min(f.trunc_order + 1, f.trunc_order + reach)
        result = result.truncate(int(omitted) - 1)
    logger.debug('substituted series of exponents %s..%s', lowest, highest)
    return result.with_weight(f.weight)


def transform_section(section: SuperSeries, change: 'CoordinateChange') -> SuperSeries:
    """
    Pull back a section f [dz|dzeta]^j along a superconformal change, multiplying by
    (D_theta zeta)^j.
    """
    if not change.is_superconformal():
        raise NotSuperconformal('coordinate change is not superconformal')
    pulled = substitute(section, change)
    factor = d_theta(change.zeta_series())
    weight = section.weight
    power = factor ** weight
    return pulled.with_weight(0).multiply(power.with_weight(0)).with_weight(weight)
