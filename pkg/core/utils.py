"""
Utility functions shared across apps.

Settings lookup for the ``FREEGROUP`` settings dict and conversion helpers
for exact rational values.
"""

from fractions import Fraction

from django.conf import settings

from core.exceptions import InputError

FREEGROUP_DEFAULTS = {
    "ENUMERATION_CAP": 100_000_000,
    "ROOT_WIDTH_BITS": 20,
    "SERIES_ORDER": 64,
    "SAMPLER_CHUNK": 65536,
    "SAMPLER_WORKERS": 1,
    "SCHREIER_BALL_CAP": 2_000_000,
}


def freegroup_setting(name, override=None):
    """
    Read one value of the FREEGROUP settings dict.

    Args:
        name: Key in settings.FREEGROUP
        override: Explicit value from the caller; returned as is when not None

    Returns:
        The configured value, or the built-in default when unset.
    """
    if override is not None:
        return override
    return getattr(settings, "FREEGROUP", {}).get(name, FREEGROUP_DEFAULTS[name])


def to_fraction(value):
    """
    Convert ints, Fractions, sympy rationals and "p/q" / decimal strings to Fraction.

    Floats are converted exactly (their binary value), so prefer strings for
    decimal parameters such as ``--s 0.2``.

    Raises:
        InputError: If the value is not a rational number
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"expected a rational number, got {value!r}")
    if isinstance(value, (int, float, str)):
        try:
            return Fraction(value.strip() if isinstance(value, str) else value)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise InputError(f"expected a rational number, got {value!r}") from exc
    # sympy Rational / Integer
    p, q = getattr(value, "p", None), getattr(value, "q", None)
    if p is not None and q is not None:
        return Fraction(int(p), int(q))
    raise InputError(f"expected a rational number, got {value!r}")


def fraction_text(value):
    """Render a rational as "p/q" (or "p" for integers), the JSON form of exact values."""
    return str(Fraction(value))
