"""
Effective values for command options: an explicit flag wins, then the Django
setting, then the library default.
"""

from typing import Any, Optional

from django.conf import settings

from .exceptions import MalformedInput

DEFAULTS = {
    'SUPERCALC_TRUNC_ORDER': 4,
    'SUPERCALC_BRANCH_SIGN': 1,
    'SUPERCALC_LEFT_INVERSE_SEED': None,
}


def setting(name: str, flag: Any = None) -> Any:
    if flag is not None:
        return flag
    return getattr(settings, name, DEFAULTS[name])


def trunc_order(flag: Optional[int] = None) -> int:
    value = setting('SUPERCALC_TRUNC_ORDER', flag)
    if value < 0:
        raise MalformedInput(f'truncation order must be nonnegative, got {value}', '--trunc-order')
    return value


def branch_sign(flag: Optional[int] = None) -> int:
    value = setting('SUPERCALC_BRANCH_SIGN', flag)
    if value not in (1, -1):
        raise MalformedInput(f'branch sign must be +1 or -1, got {value}', '--branch-sign')
    return value


def left_inverse_seed(flag: Optional[int] = None) -> Optional[int]:
    """None selects the deterministic left inverse."""
    value = setting('SUPERCALC_LEFT_INVERSE_SEED', flag)
    if value in (None, ''):
        return None
    return int(value)
