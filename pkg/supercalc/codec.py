"""
JSON wire helpers shared by every module: exact rationals travel as strings
"p/q" (or "p" for integers), never as floats.
"""

import json
import re
from fractions import Fraction
from typing import Any

from .exceptions import MalformedInput

_RATIONAL = re.compile(r'^\s*[+-]?\d+(\s*/\s*\d+)?\s*$')


def parse_rational(value: Any, where: str = 'coeff') -> Fraction:
    """
    Parse a decimal-free rational.

    Args:
        value: a string such as "3/4" or "-2", or a JSON integer
        where: location reported on failure

    Returns:
        Fraction: the exact value
    """
    if isinstance(value, bool):
        raise MalformedInput(f'expected a rational, got {value!r}', where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise MalformedInput(f'expected a rational string "p/q", got {value!r}', where)
    try:
        return Fraction(value.replace(' ', ''))
    except ZeroDivisionError:
        raise MalformedInput(f'zero denominator in {value!r}', where)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def parse_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedInput(f'expected an integer, got {value!r}', where)
    return value


def require_keys(document: Any, keys, where: str) -> None:
    if not isinstance(document, dict):
        raise MalformedInput(f'expected an object, got {type(document).__name__}', where)
    missing = [key for key in keys if key not in document]
    if missing:
        raise MalformedInput(f'missing keys: {", ".join(missing)}', where)


def dumps(payload: Any) -> str:
    """Deterministic serialization: sorted keys, fixed separators."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(', ', ': '))


def loads(text: str, where: str = 'input') -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f'invalid JSON: {e}', where)
