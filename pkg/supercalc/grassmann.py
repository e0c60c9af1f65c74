"""
Exact arithmetic in a Grassmann (exterior) algebra over the rationals.

An element is a finite sum of rational multiples of monomials e_{i1} e_{i2} ... e_{ik}
in the odd generators e_0 .. e_{n-1}, stored sparsely as a map from the strictly
increasing multi-index (i1, ..., ik) to a nonzero Fraction. This ring is the
coefficient ring ("functions from the base") for every other module.
"""

import enum
import logging
import math
import random
from bisect import bisect_right
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .codec import format_rational, parse_int, parse_rational
from .exceptions import (
    GeneratorMismatch,
    MalformedInput,
    MixedParity,
    NotInvertible,
    PreconditionViolated,
)

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]
Rational = Union[int, Fraction]


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    def __add__(self, other: 'Parity') -> 'Parity':
        return Parity((self.value + other.value) % 2)

    def flip(self) -> 'Parity':
        return Parity(1 - self.value)

    @classmethod
    def of_degree(cls, degree: int) -> 'Parity':
        return cls(degree % 2)


@lru_cache(maxsize=65536)
def _merge(left: MultiIndex, right: MultiIndex) -> Tuple[Optional[MultiIndex], int]:
    """
    Product of two monomials.

    Returns:
        tuple: (sorted multi-index, sign), or (None, 0) when a generator repeats
    """
    if set(left).intersection(right):
        return None, 0
    inversions = sum(len(left) - bisect_right(left, index) for index in right)
    return tuple(sorted(left + right)), (-1 if inversions % 2 else 1)


class GrassmannElement:
    """
    Immutable element of the Grassmann algebra on ``num_generators`` odd generators.

    Elements compare equal to plain rationals when they are pure numbers, so
    ``GrassmannElement.one(3) == 1`` holds.
    """

    __slots__ = ('_terms', '_num_generators', '_hash')

    def __init__(self, terms: Mapping[Iterable[int], Rational], num_generators: int):
        """
        Build an element from a term map, validating every multi-index.

        Args:
            terms: map from multi-index to rational coefficient
            num_generators: number of odd generators of the ambient ring
        """
        if num_generators < 0:
            raise MalformedInput('num_generators must be nonnegative', 'num_generators')
        clean: Dict[MultiIndex, Fraction] = {}
        for gens, coeff in terms.items():
            key = tuple(gens)
            if any(b <= a for a, b in zip(key, key[1:])):
                raise MalformedInput(f'multi-index {list(key)} is not strictly increasing', 'gens')
            if key and (key[0] < 0 or key[-1] >= num_generators):
                raise MalformedInput(
                    f'multi-index {list(key)} out of range for {num_generators} generators', 'gens')
            value = clean.get(key, Fraction(0)) + Fraction(coeff)
            clean[key] = value
        self._terms = {k: v for k, v in clean.items() if v != 0}
        self._num_generators = num_generators
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[MultiIndex, Fraction], num_generators: int) -> 'GrassmannElement':
        # terms are already canonical
        element = cls.__new__(cls)
        element._terms = terms
        element._num_generators = num_generators
        element._hash = None
        return element

    @classmethod
    def scalar(cls, value: Rational, num_generators: int) -> 'GrassmannElement':
        value = Fraction(value)
        return cls._raw({(): value} if value else {}, num_generators)

    @classmethod
    def zero(cls, num_generators: int) -> 'GrassmannElement':
        return cls._raw({}, num_generators)

    @classmethod
    def one(cls, num_generators: int) -> 'GrassmannElement':
        return cls._raw({(): Fraction(1)}, num_generators)

    @classmethod
    def generator(cls, index: int, num_generators: int) -> 'GrassmannElement':
        if not 0 <= index < num_generators:
            raise MalformedInput(f'generator {index} out of range', 'gens')
        return cls._raw({(index,): Fraction(1)}, num_generators)

    @property
    def num_generators(self) -> int:
        return self._num_generators

    @property
    def terms(self) -> Dict[MultiIndex, Fraction]:
        return dict(self._terms)

    def sorted_terms(self) -> List[Tuple[MultiIndex, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: (len(item[0]), item[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def body(self) -> Fraction:
        """Coefficient of the empty multi-index, the reduction modulo the odd ideal."""
        return self._terms.get((), Fraction(0))

    def soul(self) -> 'GrassmannElement':
        return GrassmannElement._raw({k: v for k, v in self._terms.items() if k}, self._num_generators)

    def is_scalar(self) -> bool:
        return all(not key for key in self._terms)

    def _coerce(self, other: Any) -> Optional['GrassmannElement']:
        if isinstance(other, GrassmannElement):
            if other._num_generators != self._num_generators:
                raise GeneratorMismatch(
                    f'cannot combine elements over {self._num_generators} and '
                    f'{other._num_generators} generators')
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GrassmannElement.scalar(other, self._num_generators)
        return None

    def __add__(self, other: Any) -> 'GrassmannElement':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for key, value in other._terms.items():
            total = terms.get(key, 0) + value
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
        return GrassmannElement._raw(terms, self._num_generators)

    __radd__ = __add__

    def __neg__(self) -> 'GrassmannElement':
        return GrassmannElement._raw({k: -v for k, v in self._terms.items()}, self._num_generators)

    def __sub__(self, other: Any) -> 'GrassmannElement':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> 'GrassmannElement':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def multiply(self, other: 'GrassmannElement') -> 'GrassmannElement':
        """
        Supercommutative product with the sign rule.

        Args:
            other: right factor over the same generators

        Returns:
            GrassmannElement: self * other
        """
        other = self._coerce(other)
        if not self._terms or not other._terms:
            return GrassmannElement.zero(self._num_generators)
        terms: Dict[MultiIndex, Fraction] = {}
        for left, a in self._terms.items():
            for right, b in other._terms.items():
                key, sign = _merge(left, right)
                if key is None:
                    continue
                total = terms.get(key, 0) + sign * a * b
                if total:
                    terms[key] = total
                else:
                    terms.pop(key, None)
        return GrassmannElement._raw(terms, self._num_generators)

    def __mul__(self, other: Any) -> 'GrassmannElement':
        if isinstance(other, GrassmannElement):
            return self.multiply(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> 'GrassmannElement':
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def scale(self, value: Rational) -> 'GrassmannElement':
        value = Fraction(value)
        if not value:
            return GrassmannElement.zero(self._num_generators)
        return GrassmannElement._raw({k: v * value for k, v in self._terms.items()}, self._num_generators)

    def __truediv__(self, other: Any) -> 'GrassmannElement':
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, GrassmannElement):
            return self.multiply(other.invert())
        return NotImplemented

    def __pow__(self, exponent: int) -> 'GrassmannElement':
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = GrassmannElement.one(self._num_generators)
        for _ in range(exponent):
            result = result.multiply(self)
        return result

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, GrassmannElement):
            return self._num_generators == other._num_generators and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._num_generators, frozenset(self._terms.items())))
        return self._hash

    def is_homogeneous(self) -> bool:
        return len({len(key) % 2 for key in self._terms}) <= 1

    def parity(self) -> Parity:
        """
        Parity of a homogeneous element; zero counts as even.

        Returns:
            Parity: EVEN iff every multi-index has even length
        """
        degrees = {len(key) % 2 for key in self._terms}
        if len(degrees) > 1:
            raise MixedParity(f'{self} mixes even and odd terms')
        return Parity(degrees.pop()) if degrees else Parity.EVEN

    def has_parity(self, parity: Parity) -> bool:
        """True when every term has the given parity (always true for zero)."""
        return all(len(key) % 2 == parity.value for key in self._terms)

    def involution(self) -> 'GrassmannElement':
        """Grade involution: negates the odd part."""
        return GrassmannElement._raw(
            {k: (-v if len(k) % 2 else v) for k, v in self._terms.items()}, self._num_generators)

    def invert(self) -> 'GrassmannElement':
        """
        Two-sided inverse by the terminating Neumann series.

        Returns:
            GrassmannElement: b with self*b = b*self = 1
        """
        head = self.body()
        if head == 0:
            raise NotInvertible(f'{self} has zero body')
        nilpotent = self.soul().scale(Fraction(-1) / head)
        total = GrassmannElement.one(self._num_generators)
        term = total
        while True:
            term = term.multiply(nilpotent)
            if term.is_zero():
                break
            total = total + term
        return total.scale(Fraction(1) / head)

    def sqrt(self, sign: int = 1) -> 'GrassmannElement':
        """
        Square root of an even element whose body is the square of a rational.

        Args:
            sign: +1 or -1, the sign of the body of the result

        Returns:
            GrassmannElement: s with s*s = self
        """
        if not self.has_parity(Parity.EVEN):
            raise PreconditionViolated(f'square root needs an even element, got {self}')
        head = self.body()
        root = _rational_sqrt(head)
        if root is None or head == 0:
            raise PreconditionViolated(f'body {head} has no nonzero rational square root')
        nilpotent = self.soul().scale(Fraction(1) / head)
        total = GrassmannElement.one(self._num_generators)
        power = total
        binomial = Fraction(1)
        k = 0
        while True:
            k += 1
            binomial = binomial * (Fraction(1, 2) - (k - 1)) / k
            power = power.multiply(nilpotent)
            if power.is_zero():
                break
            total = total + power.scale(binomial)
        return total.scale(root if sign >= 0 else -root)

    @classmethod
    def random(cls, rng: random.Random, num_generators: int, parity: Parity = Parity.EVEN,
               invertible: bool = False, max_terms: int = 3, bound: int = 5) -> 'GrassmannElement':
        """
        Seeded random homogeneous element.

        Args:
            rng: source of randomness
            num_generators: ambient generator count
            parity: parity of every term
            invertible: force a nonzero body (even elements only)
            max_terms: upper bound on the number of soul terms
            bound: numerators are drawn from [-bound, bound]

        Returns:
            GrassmannElement: the random element
        """
        terms: Dict[MultiIndex, Fraction] = {}
        if parity is Parity.EVEN:
            body = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
            while invertible and body == 0:
                body = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
            terms[()] = body
        sizes = [d for d in range(1, num_generators + 1) if d % 2 == parity.value]
        if sizes:
            for _ in range(rng.randint(0, max_terms)):
                size = rng.choice(sizes)
                key = tuple(sorted(rng.sample(range(num_generators), size)))
                terms[key] = terms.get(key, 0) + Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        return cls(terms, num_generators)

    def to_json(self) -> List[Dict[str, Any]]:
        return [{'coeff': format_rational(v), 'gens': list(k)} for k, v in self.sorted_terms()]

    def to_compact_json(self) -> Union[str, List[Dict[str, Any]]]:
        """A pure number as its rational string, anything else in the term-list form."""
        if self.is_scalar():
            return format_rational(self.body())
        return self.to_json()

    @classmethod
    def from_json(cls, data: Any, num_generators: int, where: str = 'element') -> 'GrassmannElement':
        """
        Parse the wire form ``[{"coeff": "p/q", "gens": [i1, i2, ...]}, ...]``.

        A bare rational (string or integer) is accepted as a pure number.
        """
        if isinstance(data, (str, int)) and not isinstance(data, bool):
            return cls.scalar(parse_rational(data, where), num_generators)
        if not isinstance(data, list):
            raise MalformedInput(f'expected a list of terms, got {type(data).__name__}', where)
        terms: Dict[MultiIndex, Fraction] = {}
        for term in data:
            if not isinstance(term, dict) or 'coeff' not in term:
                raise MalformedInput('each term needs "coeff" and "gens"', where)
            gens = term.get('gens', [])
            if not isinstance(gens, list):
                raise MalformedInput('"gens" must be a list', where)
            key = tuple(parse_int(i, where) for i in gens)
            terms[key] = terms.get(key, 0) + parse_rational(term['coeff'], where)
        try:
            return cls(terms, num_generators)
        except MalformedInput as e:
            raise e.at(where)

    def __repr__(self) -> str:
        return f'GrassmannElement({str(self)!r}, num_generators={self._num_generators})'

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for key, value in self.sorted_terms():
            monomial = ''.join(f'e{i}' for i in key)
            if not key:
                parts.append(format_rational(value))
            elif value == 1:
                parts.append(monomial)
            elif value == -1:
                parts.append(f'-{monomial}')
            else:
                parts.append(f'{format_rational(value)}*{monomial}')
        return ' + '.join(parts).replace('+ -', '- ')


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        return None
    return Fraction(num, den)


def multiply(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a.multiply(b)


def invert(a: GrassmannElement) -> GrassmannElement:
    return a.invert()


def parity(a: GrassmannElement) -> Parity:
    return a.parity()


def body(a: GrassmannElement) -> Fraction:
    return a.body()
