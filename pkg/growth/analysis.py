"""
Asymptotic invariants of sets read off their measure functions.

For a set R, mu(s) = mu_s(R) and the frequency series r(z) = sum f_k z^k are
tied by mu(s) = s r(1 - s). When mu is rational:

    mu0 = mu(0)              the limit measure; R is thick when mu0 > 0
    mu1 = mu'(0)             for sparse sets (mu0 = 0)
    gamma = 1/radius of r    the relative growth rate
    negligible               r is regular at z = 1
    density                  lim sup f_k, from the poles of r on |z| = 1

Truncated series only support the heuristic ``classify_truncated``.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly

from core import constants
from core.exact import CertifiedInterval, RationalFunction, count_real_roots, poles
from core.exceptions import InputError, InvalidMeasureError, InvariantViolation
from core.words import Alphabet
from growth.series import COUNTS, FREQUENCIES, GrowthSeries

logger = logging.getLogger(__name__)

THICK = "Thick"
SPARSE = "Sparse"
INTERMEDIATE = "IntermediateDensity"
SINGULAR = "Singular"

INFINITY = "infinity"
DOES_NOT_EXIST = "does-not-exist"
UNKNOWN = "unknown"

# mu must lie in [0, 1] at these points
SAMPLE_POINTS = tuple(Fraction(k, 16) for k in range(1, 16))

# truncated heuristics
MIN_TRUNCATED_TERMS = 32
TAIL_DECAY = 12  # grid points need order * s >= TAIL_DECAY
STABLE_RATIO = Fraction(1, 10)
SHRINK_RATIO = Fraction(3, 4)
GROWTH_RATIO = Fraction(3, 2)


@dataclass(frozen=True)
class GrowthReport:
    classification: str
    mu0: object
    mu1: object
    gamma: object
    negligible: object
    density: object = None
    mu_of_s: RationalFunction | None = None
    frequency_series: RationalFunction | None = None
    certified: bool = True

    def to_json(self):
        def value(item):
            if isinstance(item, CertifiedInterval):
                return item.to_json()
            if isinstance(item, Fraction):
                return str(item)
            return item

        data = {
            "classification": self.classification,
            "mu0": value(self.mu0),
            "mu1": value(self.mu1),
            "gamma": value(self.gamma),
            "negligible": self.negligible,
            "density": value(self.density),
            "certified": self.certified,
        }
        if self.mu_of_s is not None:
            data["mu_of_s"] = str(self.mu_of_s)
        if self.frequency_series is not None:
            data["frequency_series"] = str(self.frequency_series)
        return data


def frequency_series_in_z(mu_of_s: RationalFunction) -> RationalFunction:
    """r(z) = mu(1 - z)/(1 - z)."""
    if mu_of_s.var != constants.VAR_S:
        raise InputError(f"expected a function of s, got one of {mu_of_s.var}")
    one_minus_z = RationalFunction.from_coefficients([1, -1], var=constants.VAR_Z)
    return mu_of_s.substitute(one_minus_z) / one_minus_z


def _check_measure(mu_of_s):
    if count_real_roots(mu_of_s.denominator, 0, 1):
        raise InvalidMeasureError(f"{mu_of_s} has a pole in [0, 1] and is not a measure function")
    for s in SAMPLE_POINTS:
        value = mu_of_s.evaluate(s)
        if not 0 <= value <= 1:
            raise InvalidMeasureError(f"{mu_of_s} takes the value {value} at s = {s}, outside [0, 1]")


def _cyclotomic_order(factor):
    """n with factor = Phi_n (factor monic and cyclotomic)."""
    z = factor.gens[0]
    degree = factor.degree()
    for n in range(1, 2 * degree * degree + 3):
        if Poly(z**n - 1, z, domain=factor.domain).rem(factor).is_zero:
            return n
    raise InvariantViolation(f"{factor.as_expr()} divides no z^n - 1")


def periodic_part(f: RationalFunction) -> list[Fraction]:
    """
    One period of the non-decaying part of the coefficients of ``f``.

    Those come from simple poles at roots of unity; an empty list means the
    coefficients tend to 0 (or f has no poles on the unit circle).

    Raises:
        InvalidMeasureError: On a multiple pole at a root of unity (unbounded coefficients)
    """
    den = f.denominator
    z = den.gens[0]
    _, factors = den.factor_list()
    unit = Poly(1, z, domain=den.domain)
    period = 1
    for factor, multiplicity in factors:
        if factor.degree() <= 0:
            continue
        monic = factor.monic()
        if not monic.is_cyclotomic:
            continue
        if multiplicity > 1:
            raise InvalidMeasureError(f"{f} has a multiple pole on the unit circle")
        unit = unit * monic
        period = math.lcm(period, _cyclotomic_order(monic))
    if unit.degree() == 0:
        return []
    rest = den.exquo(unit)
    s, _, g = rest.gcdex(unit)
    if g.degree() != 0:
        raise InvariantViolation("unit-circle part of the denominator is not coprime to the rest")
    s = s.quo_ground(g.LC())
    # f = A/unit + (terms without unit-circle poles)
    a = (f.numerator * s).rem(unit)
    w = Poly(z**period - 1, z, domain=den.domain).exquo(unit)
    # A/unit = -A w/(1 - z^period)
    product = a * w
    coefficients = [Fraction(0)] * period
    for (power,), c in product.terms():
        coefficients[power] = -Fraction(int(c.numerator), int(c.denominator))
    return coefficients


def _gamma_of_frequencies(f, width_bits):
    report = poles(f, width_bits)
    if report.min_modulus is None:
        return CertifiedInterval.exact(0)
    return report.min_modulus.reciprocal()


def classify(mu_of_s: RationalFunction, width_bits=None) -> GrowthReport:
    """
    Classify a set from its rational measure function mu(s).

    A rational measure function is always Thick or Sparse.

    Raises:
        InvalidMeasureError: If mu has a pole in [0, 1] or leaves [0, 1] at a sample point
    """
    if mu_of_s.var != constants.VAR_S:
        raise InputError(f"expected a function of s, got one of {mu_of_s.var}")
    _check_measure(mu_of_s)
    mu0 = mu_of_s.evaluate(0)
    r = frequency_series_in_z(mu_of_s)
    gamma = _gamma_of_frequencies(r, width_bits)
    negligible = r.denominator.eval(1) != 0
    periodic = periodic_part(r)
    density = max(periodic) if periodic else Fraction(0)
    average = sum(periodic, Fraction(0)) / len(periodic) if periodic else Fraction(0)
    if average != mu0:
        raise InvariantViolation(f"mean of the periodic frequencies {average} differs from mu0 = {mu0}")

    if mu0 > 0:
        classification, mu1 = THICK, INFINITY
    else:
        classification, mu1 = SPARSE, mu_of_s.series_coefficients(1)[1]
    logger.info("classify: %s, mu0 = %s, mu1 = %s, gamma = %s", classification, mu0, mu1, gamma)
    return GrowthReport(
        classification=classification,
        mu0=mu0,
        mu1=mu1,
        gamma=gamma,
        negligible=negligible,
        density=density,
        mu_of_s=mu_of_s,
        frequency_series=r,
    )


def measure_series(f: GrowthSeries, s):
    """
    mu_s(R)/s = sum f_k (1 - s)^k.

    Exact (a Fraction) for an exact series; a float sum of the known terms
    for a truncated one.
    """
    if f.semantics != FREQUENCIES:
        raise InputError(f"expected a frequency series, got {f.semantics}")
    if f.is_exact:
        return f.function.evaluate(1 - Fraction(s))
    z = 1 - float(s)
    total = 0.0
    for c in reversed(f.coefficients):
        total = total * z + float(c)
    return total


def _dyadic_grid(order):
    grid = []
    s = Fraction(1, 2)
    while order * s >= TAIL_DECAY:
        grid.append(s)
        s /= 2
    return grid


def classify_truncated(f: GrowthSeries) -> GrowthReport:
    """
    Heuristic classification of a truncated frequency series.

    Evaluates M(s) = mu_s/s on the dyadic grid s = 1/2, 1/4, ... down to the
    truncation limit and compares the last three points:

        s M(s) settles to a positive value    Thick
        M(s) settles                          Sparse
        M(s) grows by a steady step per halving (logarithmic divergence)
                                              IntermediateDensity
        otherwise                             Singular

    Nothing here is certified.
    """
    if f.semantics != FREQUENCIES:
        raise InputError(f"expected a frequency series, got {f.semantics}")
    if f.is_exact:
        raise InputError("classify_truncated takes a truncated series; use classify for exact ones")
    grid = _dyadic_grid(f.order)
    if len(grid) < 3:
        raise InputError(f"a series truncated at {f.order} is too short to classify")
    values = [measure_series(f, s) for s in grid]
    mu_values = [float(s) * m for s, m in zip(grid, values)]
    previous, last = mu_values[-2], mu_values[-1]
    step_before = values[-2] - values[-3]
    step_after = values[-1] - values[-2]
    gamma = _truncated_gamma(f.coefficients)
    window = f.coefficients[len(f.coefficients) * 3 // 4 :]
    density = float(max(window))

    if last > 1e-3 and abs(last - previous) <= float(STABLE_RATIO) * last:
        classification, mu0, mu1 = THICK, last, INFINITY
    elif abs(step_after) <= float(SHRINK_RATIO) * abs(step_before) or abs(step_after) <= 1e-12:
        classification, mu0, mu1 = SPARSE, 0.0, values[-1]
    elif step_before > 0 and float(SHRINK_RATIO) * step_before < step_after <= float(GROWTH_RATIO) * step_before:
        classification, mu0, mu1 = INTERMEDIATE, 0.0, INFINITY
    else:
        classification, mu0, mu1 = SINGULAR, DOES_NOT_EXIST, DOES_NOT_EXIST
    logger.info("classify_truncated: %s from %d grid points (heuristic)", classification, len(grid))
    return GrowthReport(
        classification=classification,
        mu0=mu0,
        mu1=mu1,
        gamma=gamma,
        negligible=UNKNOWN,
        density=density,
        certified=False,
    )


def cesaro_estimate(f: GrowthSeries, horizon: int) -> Fraction:
    """(f_0 + ... + f_n)/(n + 1); tends to mu0 when mu0 exists."""
    if f.semantics != FREQUENCIES:
        raise InputError(f"expected a frequency series, got {f.semantics}")
    if horizon < 0:
        raise InputError(f"horizon must be non-negative, got {horizon}")
    terms = f.coefficients_upto(horizon)
    return sum(terms, Fraction(0)) / (horizon + 1)


def _kth_root(value, k):
    if value <= 0:
        return 0.0
    value = Fraction(value)
    return math.exp((math.log(value.numerator) - math.log(value.denominator)) / k)


def _truncated_gamma(frequencies):
    """max f_k^(1/k) over the trailing half of the known terms."""
    order = len(frequencies) - 1
    start = max(1, (order + 1) // 2)
    return max((_kth_root(frequencies[k], k) for k in range(start, order + 1)), default=0.0)


@dataclass(frozen=True)
class CogrowthReport:
    gamma: object
    approximate: bool
    empty: bool = False
    amenable: object = None
    normal: bool = False

    def to_json(self):
        data = {
            "gamma": self.gamma.to_json() if isinstance(self.gamma, CertifiedInterval) else self.gamma,
            "approximate": self.approximate,
            "empty": self.empty,
        }
        if self.normal:
            data["amenable"] = self.amenable
        return data


def cogrowth(nseries: GrowthSeries, alphabet: Alphabet, normal=False, width_bits=None) -> CogrowthReport:
    """
    Relative growth rate gamma = 1/((2m - 1) * radius of N).

    With ``normal`` the report carries the amenability indicator of F/R
    (gamma = 1 exactly when the quotient is amenable); it is None when
    gamma is only approximate or its interval straddles 1.
    """
    if nseries.semantics != COUNTS:
        raise InputError(f"cogrowth takes a count series, got {nseries.semantics}")
    if not nseries.is_exact:
        f = [c / alphabet.sphere_size(k) for k, c in enumerate(nseries.coefficients)]
        gamma = _truncated_gamma(f)
        logger.info("cogrowth: truncated estimate %.6f", gamma)
        return CogrowthReport(gamma, approximate=True, empty=all(c == 0 for c in f), normal=normal)

    n = nseries.function
    if n.is_zero:
        return CogrowthReport(CertifiedInterval.exact(0), approximate=False, empty=True, normal=normal)
    report = poles(n, width_bits)
    if report.min_modulus is None:
        gamma = CertifiedInterval.exact(0)
    else:
        gamma = report.min_modulus.scale(alphabet.size - 1).reciprocal()
    amenable = None
    if normal:
        if gamma.is_exact and gamma.lower == 1:
            amenable = True
        elif gamma.upper < 1:
            amenable = False
    logger.info("cogrowth: gamma = %s", gamma)
    return CogrowthReport(gamma, approximate=False, amenable=amenable, normal=normal)


def negligibility_test(f: GrowthSeries):
    """
    Whether R is polynomially negligible: r(z) regular at z = 1.

    Returns "unknown" for truncated series.
    """
    if f.semantics != FREQUENCIES:
        raise InputError(f"expected a frequency series, got {f.semantics}")
    if not f.is_exact:
        return UNKNOWN
    return f.function.denominator.eval(1) != 0


@dataclass(frozen=True)
class WeightedMean:
    function: RationalFunction
    pole_order: int


def weighted_mean(f: GrowthSeries, n: int) -> WeightedMean:
    """
    G(z) = (1 - z) d^n/dz^n (z^(n+1) r(z)), the series of the weight
    (|w| + 1)...(|w| + n) over the set, and its pole order at z = 1.
    """
    if n < 0:
        raise InputError(f"weight degree must be non-negative, got {n}")
    if not f.is_exact:
        raise InputError("weighted means need an exact frequency series")
    r = f.function
    z = RationalFunction.variable(r.var)
    g = (1 - z) * (z ** (n + 1) * r).differentiate(n)
    return WeightedMean(g, g.pole_order(1))


@dataclass(frozen=True)
class DensityEstimate:
    upper: object
    lower: object
    heuristic: bool

    @property
    def has_limit(self):
        return self.upper == self.lower

    def to_json(self):
        def value(item):
            return str(item) if isinstance(item, Fraction) else item

        return {
            "density": value(self.upper),
            "lower": value(self.lower),
            "has_limit": self.has_limit,
            "heuristic": self.heuristic,
        }


def density_estimate(f: GrowthSeries) -> DensityEstimate:
    """
    Spherical asymptotic density rho = lim sup f_k (and lim inf f_k).

    Raises:
        InputError: For truncated series with fewer than 32 terms
    """
    if f.semantics != FREQUENCIES:
        raise InputError(f"expected a frequency series, got {f.semantics}")
    if f.is_exact:
        periodic = periodic_part(f.function)
        if not periodic:
            return DensityEstimate(Fraction(0), Fraction(0), heuristic=False)
        return DensityEstimate(max(periodic), min(periodic), heuristic=False)
    if len(f.coefficients) < MIN_TRUNCATED_TERMS:
        raise InputError(f"density estimates need at least {MIN_TRUNCATED_TERMS} terms")
    window = f.coefficients[len(f.coefficients) * 3 // 4 :]
    return DensityEstimate(max(window), min(window), heuristic=True)
