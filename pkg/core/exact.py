"""
Exact arithmetic: rational functions of one variable, matrices over them,
power-series coefficients and certified pole locations.

Polynomials are ``sympy.Poly`` objects over ``QQ``. Rational values at the
public boundary are ``fractions.Fraction``.

A ``RationalFunction`` is always in canonical form: numerator and denominator
are coprime, the denominator has integer coprime coefficients and its lowest
nonzero coefficient is positive. Equality is therefore structural.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import sympy
from sympy import QQ, Poly
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import CoercionFailed, ExactQuotientFailed, PolynomialError

from core import constants
from core.exceptions import (
    EvaluationError,
    ExactArithmeticError,
    InputError,
    InvariantViolation,
    SingularMatrixError,
)
from core.utils import freegroup_setting, to_fraction

logger = logging.getLogger(__name__)

SYMBOLS = {tag: sympy.Symbol(tag) for tag in constants.VARIABLE_TAGS}

_PARSE_TRANSFORMS = standard_transformations + (convert_xor,)


def _symbol(var):
    try:
        return SYMBOLS[var]
    except KeyError:
        raise InputError(f"unknown variable tag {var!r}; expected one of {constants.VARIABLE_TAGS}") from None


def _qq(value):
    value = to_fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def make_poly(coefficients, var=constants.VAR_T):
    """Polynomial from coefficients listed by increasing degree."""
    coefficients = [_qq(c) for c in coefficients] or [sympy.Integer(0)]
    return Poly.from_list(list(reversed(coefficients)), _symbol(var), domain=QQ)


def poly_coefficients(poly):
    """Coefficients of ``poly`` by increasing degree, as Fractions ([] for zero)."""
    if poly.is_zero:
        return []
    return [to_fraction(c) for c in reversed(poly.all_coeffs())]


def _lowest_coefficient(coefficients):
    return next(c for c in coefficients if c != 0)


def _normalizer(den):
    """Factor making ``den`` integral, primitive, with positive lowest coefficient."""
    coefficients = poly_coefficients(den)
    common = math.lcm(*(c.denominator for c in coefficients))
    integers = [int(c * common) for c in coefficients]
    content = math.gcd(*integers)
    sign = 1 if _lowest_coefficient(integers) > 0 else -1
    return Fraction(sign * common, content)


def _format_rational(value):
    return str(value)


def format_poly(poly, var):
    """Render a polynomial by increasing degree, e.g. ``1 - 9*t^2``."""
    terms = [(k, c) for k, c in enumerate(poly_coefficients(poly)) if c != 0]
    if not terms:
        return "0"
    pieces = []
    for position, (k, c) in enumerate(terms):
        magnitude = abs(c)
        if k == 0:
            body = _format_rational(magnitude)
        else:
            monomial = var if k == 1 else f"{var}^{k}"
            body = monomial if magnitude == 1 else f"{_format_rational(magnitude)}*{monomial}"
        if position == 0:
            pieces.append(f"-{body}" if c < 0 else body)
        else:
            pieces.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(pieces)


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """
    Exact ratio of two polynomials in one variable.

    Build instances with the classmethods (``constant``, ``variable``,
    ``from_coefficients``, ``parse``) or by arithmetic on existing ones; the
    constructor canonicalizes whatever polynomials it is handed.
    """

    numerator: Poly
    denominator: Poly
    var: str = constants.VAR_T

    def __post_init__(self):
        symbol = _symbol(self.var)
        num = Poly(self.numerator, symbol, domain=QQ)
        den = Poly(self.denominator, symbol, domain=QQ)
        if den.is_zero:
            raise ExactArithmeticError("rational function with zero denominator")
        if num.is_zero:
            den = Poly(1, symbol, domain=QQ)
        else:
            common = num.gcd(den)
            if common.degree() > 0:
                num = num.exquo(common)
                den = den.exquo(common)
        factor = _qq(_normalizer(den))
        object.__setattr__(self, "numerator", num.mul_ground(factor))
        object.__setattr__(self, "denominator", den.mul_ground(factor))

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def constant(cls, value, var=constants.VAR_T):
        return cls(make_poly([value], var), make_poly([1], var), var)

    @classmethod
    def zero(cls, var=constants.VAR_T):
        return cls.constant(0, var)

    @classmethod
    def one(cls, var=constants.VAR_T):
        return cls.constant(1, var)

    @classmethod
    def variable(cls, var=constants.VAR_T):
        return cls(make_poly([0, 1], var), make_poly([1], var), var)

    @classmethod
    def monomial(cls, coefficient, degree, var=constants.VAR_T):
        return cls(make_poly([0] * degree + [coefficient], var), make_poly([1], var), var)

    @classmethod
    def from_coefficients(cls, numerator, denominator=(1,), var=constants.VAR_T):
        """Build from coefficient lists by increasing degree."""
        return cls(make_poly(numerator, var), make_poly(denominator, var), var)

    @classmethod
    def from_polys(cls, numerator, denominator, var=constants.VAR_T):
        return cls(numerator, denominator, var)

    @classmethod
    def parse(cls, text, var=constants.VAR_T):
        """
        Parse the canonical text grammar, e.g. ``(1 + 3*t^2)/(1 - 9*t^2)``.

        Raises:
            InputError: If the text is not a rational function of ``var`` with rational coefficients
        """
        symbol = _symbol(var)
        cleaned = text.replace("−", "-").strip()
        if not cleaned:
            raise InputError("empty rational function")
        try:
            expr = parse_expr(cleaned, local_dict={var: symbol}, transformations=_PARSE_TRANSFORMS)
        except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as exc:
            raise InputError(f"cannot parse rational function {text!r}: {exc}") from exc
        if not isinstance(expr, sympy.Expr) or expr.free_symbols - {symbol}:
            raise InputError(f"{text!r} is not a rational function of {var}")
        num, den = sympy.fraction(sympy.together(expr))
        try:
            return cls(Poly(num, symbol, domain=QQ), Poly(den, symbol, domain=QQ), var)
        except (PolynomialError, CoercionFailed) as exc:
            raise InputError(f"{text!r} is not a rational function with rational coefficients") from exc

    # ------------------------------------------------------------------
    # structure

    @cached_property
    def numerator_coefficients(self):
        return tuple(poly_coefficients(self.numerator))

    @cached_property
    def denominator_coefficients(self):
        return tuple(poly_coefficients(self.denominator))

    @property
    def symbol(self):
        return _symbol(self.var)

    @property
    def is_zero(self):
        return self.numerator.is_zero

    @property
    def is_polynomial(self):
        return self.denominator.degree() == 0

    @property
    def is_constant(self):
        return self.is_polynomial and self.numerator.degree() <= 0

    def constant_value(self):
        if not self.is_constant:
            raise InputError(f"{self} is not constant")
        return self.numerator_coefficients[0] if self.numerator_coefficients else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other, self.var)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            self.var == other.var
            and self.numerator_coefficients == other.numerator_coefficients
            and self.denominator_coefficients == other.denominator_coefficients
        )

    def __hash__(self):
        return hash((self.var, self.numerator_coefficients, self.denominator_coefficients))

    def __str__(self):
        num = format_poly(self.numerator, self.var)
        if self.is_polynomial:
            return num
        if len([c for c in self.numerator_coefficients if c != 0]) > 1:
            num = f"({num})"
        den = format_poly(self.denominator, self.var)
        nonzero = [c for c in self.denominator_coefficients if c != 0]
        if len(nonzero) > 1 or nonzero[0] != 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self})"

    # ------------------------------------------------------------------
    # field arithmetic

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.var != self.var:
                raise InputError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other, self.var)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
            self.var,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(
            self.numerator * other.numerator,
            self.denominator * other.denominator,
            self.var,
        )

    __rmul__ = __mul__

    def reciprocal(self):
        if self.is_zero:
            raise ExactArithmeticError("division by the zero function")
        return RationalFunction(self.denominator, self.numerator, self.var)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.reciprocal() ** -exponent
        return RationalFunction(self.numerator**exponent, self.denominator**exponent, self.var)

    # ------------------------------------------------------------------
    # analysis

    def substitute(self, inner):
        """Composition self(inner(x)); the result carries inner's variable."""
        p, q = inner.numerator, inner.denominator
        num_coeffs = self.numerator_coefficients
        den_coeffs = self.denominator_coefficients
        degree = max(len(num_coeffs), len(den_coeffs)) - 1
        p_powers = [Poly(1, inner.symbol, domain=QQ)]
        q_powers = [Poly(1, inner.symbol, domain=QQ)]
        for _ in range(degree):
            p_powers.append(p_powers[-1] * p)
            q_powers.append(q_powers[-1] * q)

        def homogenized(coefficients):
            total = Poly(0, inner.symbol, domain=QQ)
            for i, c in enumerate(coefficients):
                if c:
                    total += (p_powers[i] * q_powers[degree - i]).mul_ground(_qq(c))
            return total

        den = homogenized(den_coeffs)
        if den.is_zero:
            raise ExactArithmeticError(f"substituting {inner} into {self} makes the denominator vanish")
        return RationalFunction(homogenized(num_coeffs), den, inner.var)

    def evaluate(self, x):
        x = _qq(x)
        den = self.denominator.eval(x)
        if den == 0:
            raise EvaluationError(f"{self} has a pole at {self.var} = {x}")
        return to_fraction(self.numerator.eval(x)) / to_fraction(den)

    __call__ = evaluate

    def series_coefficients(self, order):
        """First ``order + 1`` Taylor coefficients at 0, via the denominator's recurrence."""
        if order < 0:
            raise InputError(f"series order must be non-negative, got {order}")
        q = self.denominator_coefficients
        if q[0] == 0:
            raise EvaluationError(f"{self} has a pole at {self.var} = 0")
        p = self.numerator_coefficients
        q0 = q[0]
        result = []
        for n in range(order + 1):
            acc = p[n] if n < len(p) else Fraction(0)
            for j in range(1, min(n, len(q) - 1) + 1):
                if q[j]:
                    acc -= q[j] * result[n - j]
            result.append(acc / q0)
        return result

    def differentiate(self, n=1):
        if n < 0:
            raise InputError(f"derivative order must be non-negative, got {n}")
        p, q = self.numerator, self.denominator
        for _ in range(n):
            p, q = p.diff() * q - p * q.diff(), q * q
            reduced = RationalFunction(p, q, self.var)
            p, q = reduced.numerator, reduced.denominator
        return RationalFunction(p, q, self.var)

    def pole_order(self, point):
        """Multiplicity of ``point`` as a root of the (canonical) denominator."""
        linear = make_poly([-to_fraction(point), 1], self.var)
        den, order = self.denominator, 0
        while den.degree() > 0 and den.rem(linear).is_zero:
            den = den.exquo(linear)
            order += 1
        return order

    def poles(self, width_bits=None):
        return poles(self, width_bits=width_bits)


# ----------------------------------------------------------------------
# certified root locations


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed rational interval [lower, upper] known to contain a real value."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lower", to_fraction(self.lower))
        object.__setattr__(self, "upper", to_fraction(self.upper))
        if self.lower > self.upper:
            raise InvariantViolation(f"empty interval [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, value):
        return cls(value, value)

    @property
    def is_exact(self):
        return self.lower == self.upper

    @property
    def width(self):
        return self.upper - self.lower

    @property
    def midpoint(self):
        return (self.lower + self.upper) / 2

    def contains(self, value):
        return self.lower <= to_fraction(value) <= self.upper

    def scale(self, factor):
        factor = to_fraction(factor)
        if factor < 0:
            return CertifiedInterval(factor * self.upper, factor * self.lower)
        return CertifiedInterval(factor * self.lower, factor * self.upper)

    def reciprocal(self):
        if self.lower <= 0 <= self.upper:
            raise ExactArithmeticError(f"reciprocal of an interval containing 0: {self}")
        return CertifiedInterval(1 / self.upper, 1 / self.lower)

    def __str__(self):
        if self.is_exact:
            return str(self.lower)
        return f"[{self.lower}, {self.upper}]"

    def to_json(self):
        if self.is_exact:
            return str(self.lower)
        return {"lower": str(self.lower), "upper": str(self.upper)}


@dataclass(frozen=True)
class Pole:
    location: CertifiedInterval
    multiplicity: int


@dataclass(frozen=True)
class PoleReport:
    """Real poles and the certified minimum modulus over all complex poles (None = no poles)."""

    real: tuple[Pole, ...]
    min_modulus: CertifiedInterval | None

    @property
    def radius(self):
        return self.min_modulus


def _sqrt_interval(interval, bits):
    """Rational interval containing sqrt of every point of ``interval``."""
    lower, upper = interval.lower, interval.upper
    if interval.is_exact and lower >= 0:
        num, den = lower.numerator, lower.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return CertifiedInterval.exact(Fraction(rn, rd))
    scale = 1 << bits
    low = Fraction(math.isqrt(math.floor(max(lower, 0) * scale * scale)), scale)
    target = math.ceil(upper * scale * scale)
    root = math.isqrt(target)
    if root * root < target:
        root += 1
    return CertifiedInterval(low, Fraction(root, scale))


def _interval_from_sympy(a, b):
    return CertifiedInterval(to_fraction(a), to_fraction(b))


def _factor_min_modulus(factor, bits):
    """Certified min |root| of an irreducible factor with nonzero constant term."""
    coefficients = poly_coefficients(factor)
    if len(coefficients) == 2:
        return CertifiedInterval.exact(abs(coefficients[0] / coefficients[1]))
    x = factor.gens[0]
    y = sympy.Dummy("y")
    degree = len(coefficients) - 1
    # roots of the resultant are the products r_i * r_j of roots of the factor
    reversed_in_y = sum(_qq(c) * y**k * x ** (degree - k) for k, c in enumerate(coefficients))
    products = Poly(sympy.resultant(factor.as_expr(), reversed_in_y, x), y, domain=QQ)
    eps = sympy.Rational(1, 4**bits)
    positive = [iv for iv, _ in products.intervals(eps=eps, inf=0) if iv[1] > 0]
    if not positive:
        raise InvariantViolation(f"no positive squared modulus found for {factor.as_expr()}")
    smallest = min(positive, key=lambda iv: iv[0])
    return _sqrt_interval(_interval_from_sympy(*smallest), bits + 2)


def real_roots(poly, width_bits=None):
    """
    Isolating intervals for the real roots of ``poly``, exact for rational roots.

    Returns:
        List of (CertifiedInterval, multiplicity) sorted by location.
    """
    bits = freegroup_setting("ROOT_WIDTH_BITS", width_bits)
    eps = sympy.Rational(1, 2**bits)
    roots = []
    if poly.degree() <= 0:
        return roots
    _, factors = poly.factor_list()
    for factor, multiplicity in factors:
        if factor.degree() <= 0:
            continue
        coefficients = poly_coefficients(factor)
        if factor.degree() == 1:
            roots.append((CertifiedInterval.exact(-coefficients[0] / coefficients[1]), multiplicity))
            continue
        for (a, b), _ in factor.intervals(eps=eps):
            roots.append((_interval_from_sympy(a, b), multiplicity))
    roots.sort(key=lambda item: item[0].lower)
    return roots


def poles(f, width_bits=None):
    """
    Real poles of ``f`` (isolating intervals, exact when rational) and the
    certified minimum modulus over all complex poles.

    Args:
        f: Canonical rational function
        width_bits: Refine real intervals below 2**-width_bits (defaults to ROOT_WIDTH_BITS)

    Returns:
        PoleReport
    """
    bits = freegroup_setting("ROOT_WIDTH_BITS", width_bits)
    if f.is_polynomial:
        return PoleReport(real=(), min_modulus=None)
    moduli = []
    _, factors = f.denominator.factor_list()
    for factor, _ in factors:
        if factor.degree() <= 0:
            continue
        if poly_coefficients(factor)[0] == 0:
            moduli.append(CertifiedInterval.exact(0))
        else:
            moduli.append(_factor_min_modulus(factor, bits))
    real = tuple(Pole(location, multiplicity) for location, multiplicity in real_roots(f.denominator, bits))
    min_modulus = CertifiedInterval(
        min(m.lower for m in moduli),
        min(m.upper for m in moduli),
    )
    logger.debug("poles: %s has %d real poles, min modulus %s", f, len(real), min_modulus)
    return PoleReport(real=real, min_modulus=min_modulus)


def count_real_roots(poly, lower, upper):
    """Number of distinct real roots of ``poly`` in the closed interval [lower, upper]."""
    if poly.degree() <= 0:
        return 0
    return int(poly.count_roots(_qq(lower), _qq(upper)))


# ----------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class RatMatrix:
    """Square matrix of rational functions sharing one variable."""

    rows: tuple[tuple[RationalFunction, ...], ...]
    var: str = constants.VAR_T

    def __post_init__(self):
        n = len(self.rows)
        coerced = []
        for row in self.rows:
            if len(row) != n:
                raise InputError("matrix is not square")
            coerced.append(tuple(_as_ratfunc(entry, self.var) for entry in row))
        object.__setattr__(self, "rows", tuple(coerced))

    @classmethod
    def identity(cls, n, var=constants.VAR_T):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), var)

    @classmethod
    def zeros(cls, n, var=constants.VAR_T):
        return cls(tuple(tuple(0 for _ in range(n)) for _ in range(n)), var)

    @property
    def dimension(self):
        return len(self.rows)

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.var == other.var and self.rows == other.rows

    def __hash__(self):
        return hash((self.var, self.rows))

    def _zip(self, other, op):
        if self.dimension != other.dimension:
            raise InputError("matrix dimension mismatch")
        return RatMatrix(
            tuple(tuple(op(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)),
            self.var,
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __matmul__(self, other):
        n = self.dimension
        if n != other.dimension:
            raise InputError("matrix dimension mismatch")
        zero = RationalFunction.zero(self.var)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    if not self.rows[i][k].is_zero and not other.rows[k][j].is_zero:
                        acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return RatMatrix(tuple(rows), self.var)

    def scale(self, factor):
        return RatMatrix(tuple(tuple(entry * factor for entry in row) for row in self.rows), self.var)

    def inverse(self):
        return invert_matrix(self)

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows) + "]"


def _as_ratfunc(entry, var):
    if isinstance(entry, RationalFunction):
        if entry.var != var:
            raise InputError(f"matrix entry in {entry.var}, expected {var}")
        return entry
    return RationalFunction.constant(entry, var)


def _clear_row_denominators(rows, extra_columns=None):
    """
    Scale each row by the lcm of its denominators.

    Returns polynomial rows and the per-row multipliers L_i.
    """
    cleared, multipliers = [], []
    for i, row in enumerate(rows):
        entries = list(row) + (list(extra_columns[i]) if extra_columns else [])
        multiplier = entries[0].denominator
        for entry in entries[1:]:
            multiplier = multiplier.lcm(entry.denominator)
        cleared.append([entry.numerator * multiplier.exquo(entry.denominator) for entry in entries])
        multipliers.append(multiplier)
    return cleared, multipliers


def _fraction_free_gauss_jordan(rows, n):
    """
    Bareiss-style Gauss-Jordan elimination over QQ[x] on an n x (n + r) array.

    Every intermediate entry is a minor of the input, so each division by the
    previous pivot is exact. On return the left block is diagonal.
    """
    width = len(rows[0])
    symbol = rows[0][0].gens[0]
    previous = Poly(1, symbol, domain=QQ)
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if not rows[r][k].is_zero), None)
        if pivot_row is None:
            raise SingularMatrixError(f"leading {k + 1}x{k + 1} pivot minor vanishes")
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
        pivot = rows[k][k]
        pivot_values = rows[k]
        for i in range(n):
            if i == k:
                continue
            factor = rows[i][k]
            try:
                rows[i] = [
                    (pivot * rows[i][j] - factor * pivot_values[j]).exquo(previous) for j in range(width)
                ]
            except ExactQuotientFailed as exc:
                raise InvariantViolation("inexact division during fraction-free elimination") from exc
        previous = pivot
    return rows


def invert_matrix(matrix):
    """
    Exact inverse by fraction-free Gauss-Jordan elimination.

    Raises:
        SingularMatrixError: If det(matrix) is the zero function
    """
    n = matrix.dimension
    if n == 0:
        return matrix
    polys, multipliers = _clear_row_denominators(matrix.rows)
    symbol = polys[0][0].gens[0]
    one = Poly(1, symbol, domain=QQ)
    zero = Poly(0, symbol, domain=QQ)
    augmented = [row + [one if i == j else zero for j in range(n)] for i, row in enumerate(polys)]
    reduced = _fraction_free_gauss_jordan(augmented, n)
    inverse = tuple(
        tuple(
            RationalFunction(reduced[i][n + j] * multipliers[j], reduced[i][i], matrix.var)
            for j in range(n)
        )
        for i in range(n)
    )
    logger.debug("invert_matrix: inverted %dx%d matrix", n, n)
    return RatMatrix(inverse, matrix.var)


def solve(matrix, rhs):
    """
    Solve ``matrix @ x = rhs`` exactly for a single right-hand side.

    Raises:
        SingularMatrixError: If det(matrix) is the zero function
    """
    n = matrix.dimension
    if len(rhs) != n:
        raise InputError("right-hand side length does not match the matrix")
    if n == 0:
        return []
    column = [(_as_ratfunc(b, matrix.var),) for b in rhs]
    augmented, _ = _clear_row_denominators(matrix.rows, column)
    reduced = _fraction_free_gauss_jordan(augmented, n)
    return [RationalFunction(reduced[i][n], reduced[i][i], matrix.var) for i in range(n)]


# ----------------------------------------------------------------------
# module-level operation names


def substitute(f, g):
    return f.substitute(g)


def evaluate(f, x):
    return f.evaluate(x)


def series_coefficients(f, order):
    return f.series_coefficients(order)


def differentiate(f, n=1):
    return f.differentiate(n)


def sum_all(functions: Iterable[RationalFunction], var=constants.VAR_T) -> RationalFunction:
    total = RationalFunction.zero(var)
    for f in functions:
        total = total + f
    return total


def cauchy_product(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    """Coefficients 0..order of the product of two power series."""
    result = []
    for n in range(order + 1):
        acc = Fraction(0)
        for i in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            acc += a[i] * b[n - i]
        result.append(acc)
    return result
