"""
Series transforms linking subgroups of F to walks on their quotients.

With c = 2m - 1 and u = t/(1 + c t^2), the count series N(t) of a subgroup
and the closed-walk series B(t) of its Schreier graph satisfy

    N(t) / (1 - t^2) = B(u) / (1 + c t^2).

The same holds with B replaced by N*(t), the series counting monoid words
that reduce into the subgroup. Return probabilities give N*(t) = P(2m t),
and for a normal subgroup of finite index N*(t) is the mean of
1/(1 - lambda t) over the spectrum of its Cayley graph.
"""

import logging
import math
from fractions import Fraction

from sympy import Poly

from core.exact import RationalFunction, poly_coefficients
from core.exceptions import InputError
from core.utils import freegroup_setting
from core.words import Alphabet
from growth.series import COUNTS, MONOID, PATHS, RETURNS, GrowthSeries, frequencies

logger = logging.getLogger(__name__)

FORWARD = "forward"
INVERSE = "inverse"
DIRECTIONS = (FORWARD, INVERSE)


def _scaled_integers(values):
    """Integers and a common denominator D with values[i] = integers[i] / D."""
    scale = math.lcm(*(v.denominator for v in values))
    return [v.numerator * (scale // v.denominator) for v in values], scale


def _compose_with_u(b, c):
    """Coefficients of sum_j b_j u^j to the order of ``b``, u = t/(1 + c t^2)."""
    order = len(b) - 1
    integers, scale = _scaled_integers(b)
    # Horner from the top; at step j only degrees <= order - j survive
    acc = []
    for j in range(order, -1, -1):
        acc = [0] + acc
        for n in range(2, len(acc)):
            acc[n] -= c * acc[n - 2]
        acc[0] += integers[j]
    return [Fraction(x, scale) for x in acc]


def _compose_with_psi(h, c):
    """
    Coefficients of h(psi(u)) where psi inverts u = t/(1 + c t^2).

    [u^n] psi^j = c^i (j/n) C(n, i) with n = j + 2i.
    """
    order = len(h) - 1
    result = [h[0]]
    for n in range(1, order + 1):
        total = Fraction(0)
        for i in range((n - 1) // 2 + 1):
            j = n - 2 * i
            if h[j]:
                total += h[j] * c**i * Fraction(j, n) * math.comb(n, i)
        result.append(total)
    return result


def _divide_by(series, c):
    """series / (1 + c t^2)."""
    out = list(series)
    for n in range(2, len(out)):
        out[n] -= c * out[n - 2]
    return out


def _godsil_factor(c):
    """(1 - t^2)/(1 + c t^2)."""
    return RationalFunction.from_coefficients([1, 0, -1], [1, 0, c])


def godsil_transform(series: GrowthSeries, alphabet: Alphabet, direction=FORWARD, order=None) -> GrowthSeries:
    """
    Map closed-walk or monoid counts to reduced counts (forward) or back (inverse).

    Args:
        series: B or N* for forward, N for inverse
        alphabet: Free group generators, c = 2m - 1
        direction: "forward" or "inverse"
        order: Truncation order of an inverse transform of an exact series
            (defaults to SERIES_ORDER); the inverse of an exact series is truncated

    Raises:
        InputError: On wrong semantics or a truncation order below 1
    """
    if direction not in DIRECTIONS:
        raise InputError(f"direction must be one of {', '.join(DIRECTIONS)}, got {direction!r}")
    c = alphabet.size - 1
    if not series.is_exact and series.order < 1:
        raise InputError("the transform needs a series truncated at order 1 or more")

    if direction == FORWARD:
        if series.semantics not in (PATHS, MONOID):
            raise InputError(f"the forward transform takes b_k or n*_k, got {series.semantics}")
        if series.is_exact:
            inner = RationalFunction.from_coefficients([0, 1], [1, 0, c])
            result = series.function.substitute(inner) * _godsil_factor(c)
            logger.info("godsil_transform: forward exact result %s", result)
            return GrowthSeries.exact(result, COUNTS)
        composed = _compose_with_u(list(series.coefficients), c)
        reduced = _divide_by(composed, c)
        counts = [reduced[n] - (reduced[n - 2] if n >= 2 else 0) for n in range(len(reduced))]
        logger.info("godsil_transform: forward to order %d", series.order)
        return GrowthSeries.truncated(counts, COUNTS)

    if series.semantics != COUNTS:
        raise InputError(f"the inverse transform takes n_k, got {series.semantics}")
    if series.is_exact:
        order = freegroup_setting("SERIES_ORDER", order)
    else:
        order = series.order if order is None else min(order, series.order)
    if order < 1:
        raise InputError("the transform needs a truncation order of 1 or more")
    n = series.coefficients_upto(order)
    # h = N(t)(1 + c t^2)/(1 - t^2)
    widened = [n[k] + (c * n[k - 2] if k >= 2 else 0) for k in range(order + 1)]
    h = list(widened)
    for k in range(2, order + 1):
        h[k] += h[k - 2]
    logger.info("godsil_transform: inverse to order %d", order)
    return GrowthSeries.truncated(_compose_with_psi(h, c), PATHS)


def monoid_series_from_returns(p: GrowthSeries, alphabet: Alphabet) -> GrowthSeries:
    """N*(t) = P(2m t)."""
    if p.semantics != RETURNS:
        raise InputError(f"expected return probabilities, got {p.semantics}")
    size = alphabet.size
    if p.is_exact:
        return GrowthSeries.exact(p.function.substitute(RationalFunction.monomial(size, 1)), MONOID)
    return GrowthSeries.truncated([c * size**k for k, c in enumerate(p.coefficients)], MONOID)


def return_frequency_transform(p: GrowthSeries, alphabet: Alphabet) -> GrowthSeries:
    """Frequency series f_k of a normal subgroup from the return probabilities of its quotient."""
    counts = godsil_transform(monoid_series_from_returns(p, alphabet), alphabet, FORWARD)
    return frequencies(counts, alphabet)


def _charpoly_coefficients(charpoly):
    if isinstance(charpoly, RationalFunction):
        if not charpoly.is_polynomial:
            raise InputError(f"{charpoly} is not a polynomial")
        return list(charpoly.numerator_coefficients)
    if isinstance(charpoly, Poly):
        return poly_coefficients(charpoly)
    return [Fraction(c) for c in charpoly]


def quenell(charpoly, index: int) -> GrowthSeries:
    """
    N*(t) = (1/index) * sum over eigenvalues lambda of 1/(1 - lambda t).

    The sum equals d - t chi_rev'(t)/chi_rev(t) with chi_rev(t) = t^d chi(1/t).

    Args:
        charpoly: Characteristic polynomial of the Cayley graph adjacency
            matrix (RationalFunction in x, sympy Poly, or coefficients by
            increasing degree)
        index: |F : N|, which must equal the degree of charpoly

    Raises:
        InputError: If index differs from the degree
    """
    coefficients = _charpoly_coefficients(charpoly)
    while coefficients and coefficients[-1] == 0:
        coefficients.pop()
    degree = len(coefficients) - 1
    if degree < 1:
        raise InputError("the characteristic polynomial must have positive degree")
    if index != degree:
        raise InputError(f"index {index} does not match the degree {degree} of the characteristic polynomial")
    reversed_poly = RationalFunction.from_coefficients(list(reversed(coefficients)))
    t = RationalFunction.variable()
    total = degree - t * reversed_poly.differentiate() / reversed_poly
    result = total / index
    logger.info("quenell: N*(t) = %s", result)
    return GrowthSeries.exact(result, MONOID)
