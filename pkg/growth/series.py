"""
Growth series of subsets of a free group.

A ``GrowthSeries`` is either exact (a RationalFunction) or truncated (the
coefficients 0..order). Anything that touches a truncated operand gives a
truncated result carrying the smaller order; exactness is never claimed for
a truncation.

Coefficient semantics:

    n      counts of reduced words of length k in the set
    b      closed paths of length k in a graph
    nstar  monoid words of length k whose reduction lies in the set
    f      relative frequencies n_k / |S_k|
    p      return probabilities b_k / (2m)^k
"""

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction

from core import constants
from core.exact import RationalFunction, cauchy_product
from core.exceptions import InputError
from core.utils import freegroup_setting, to_fraction
from core.words import Alphabet

logger = logging.getLogger(__name__)

COUNTS = "n"
PATHS = "b"
MONOID = "nstar"
FREQUENCIES = "f"
RETURNS = "p"

SEMANTICS = (COUNTS, PATHS, MONOID, FREQUENCIES, RETURNS)
INTEGER_SEMANTICS = (COUNTS, PATHS, MONOID)


@dataclass(frozen=True)
class GrowthSeries:
    semantics: str
    function: RationalFunction | None = None
    coefficients: tuple | None = None

    def __post_init__(self):
        if self.semantics not in SEMANTICS:
            raise InputError(f"unknown series semantics {self.semantics!r}")
        if (self.function is None) == (self.coefficients is None):
            raise InputError("a growth series is either exact or truncated")
        if self.coefficients is not None:
            if not self.coefficients:
                raise InputError("a truncated series needs at least one coefficient")
            object.__setattr__(self, "coefficients", tuple(to_fraction(c) for c in self.coefficients))

    @classmethod
    def exact(cls, function, semantics=COUNTS):
        return cls(semantics, function=function)

    @classmethod
    def truncated(cls, coefficients, semantics=COUNTS):
        return cls(semantics, coefficients=tuple(coefficients))

    @property
    def is_exact(self):
        return self.function is not None

    @property
    def order(self):
        """Highest known coefficient index (None when exact)."""
        return None if self.is_exact else len(self.coefficients) - 1

    def coefficients_upto(self, order):
        """Coefficients 0..order; raises InputError past a truncation."""
        if self.is_exact:
            return self.function.series_coefficients(order)
        if order > self.order:
            raise InputError(f"coefficient {order} requested from a series truncated at {self.order}")
        return list(self.coefficients[: order + 1])

    def available(self, default=None):
        """All truncated coefficients, or ``default``/SERIES_ORDER of an exact series."""
        order = self.order if not self.is_exact else freegroup_setting("SERIES_ORDER", default)
        return self.coefficients_upto(order)

    def truncate(self, order):
        return GrowthSeries.truncated(self.coefficients_upto(order), self.semantics)

    def with_semantics(self, semantics):
        return GrowthSeries(semantics, self.function, self.coefficients)

    def __str__(self):
        if self.is_exact:
            return str(self.function)
        return f"{self.semantics}: " + ", ".join(str(c) for c in self.coefficients) + f" + O(t^{self.order + 1})"

    def to_json(self):
        if self.is_exact:
            return {"semantics": self.semantics, "exact": True, "function": str(self.function)}
        return {
            "semantics": self.semantics,
            "exact": False,
            "order": self.order,
            "coefficients": [str(c) for c in self.coefficients],
        }


def _check_variable(series):
    if series.is_exact and series.function.var != constants.VAR_T:
        raise InputError(f"expected a series in {constants.VAR_T}, got one in {series.function.var}")


def _scaled_variable(factor):
    return RationalFunction.monomial(factor, 1)


def frequencies(n: GrowthSeries, alphabet: Alphabet) -> GrowthSeries:
    """
    f_k = n_k / |S_k|.

    For an exact N(t): F(t) = n_0 + ((2m-1)/2m)(N(t/(2m-1)) - n_0).
    """
    if n.semantics != COUNTS:
        raise InputError(f"frequencies need a count series, got {n.semantics}")
    _check_variable(n)
    if n.is_exact:
        q = alphabet.size - 1
        n0 = n.function.evaluate(0)
        shrunk = n.function.substitute(_scaled_variable(Fraction(1, q)))
        return GrowthSeries.exact((shrunk - n0) * Fraction(q, alphabet.size) + n0, FREQUENCIES)
    return GrowthSeries.truncated(
        [c / alphabet.sphere_size(k) for k, c in enumerate(n.coefficients)], FREQUENCIES
    )


def counts_from_frequencies(f: GrowthSeries, alphabet: Alphabet) -> GrowthSeries:
    """Inverse of ``frequencies``: n_k = f_k |S_k|."""
    if f.semantics != FREQUENCIES:
        raise InputError(f"expected a frequency series, got {f.semantics}")
    _check_variable(f)
    if f.is_exact:
        q = alphabet.size - 1
        f0 = f.function.evaluate(0)
        stretched = f.function.substitute(_scaled_variable(q))
        return GrowthSeries.exact((stretched - f0) * Fraction(alphabet.size, q) + f0, COUNTS)
    return GrowthSeries.truncated(
        [c * alphabet.sphere_size(k) for k, c in enumerate(f.coefficients)], COUNTS
    )


def counts_series(mu_star: RationalFunction, contains_identity: bool) -> GrowthSeries:
    """N(t) of a set from its adjusted measure mu*(R minus 1)(t)."""
    return GrowthSeries.exact(mu_star + 1 if contains_identity else mu_star, COUNTS)


# ----------------------------------------------------------------------
# combinators for disjoint unions, unambiguous products and t -> t^2


def _truncation_order(*series):
    orders = [s.order for s in series if not s.is_exact]
    return min(orders) if orders else None


def union_disjoint(a: GrowthSeries, b: GrowthSeries) -> GrowthSeries:
    order = _truncation_order(a, b)
    if order is None:
        return GrowthSeries.exact(a.function + b.function, a.semantics)
    left, right = a.coefficients_upto(order), b.coefficients_upto(order)
    return GrowthSeries.truncated([x + y for x, y in zip(left, right)], a.semantics)


def concat_unambiguous(a: GrowthSeries, b: GrowthSeries) -> GrowthSeries:
    order = _truncation_order(a, b)
    if order is None:
        return GrowthSeries.exact(a.function * b.function, a.semantics)
    return GrowthSeries.truncated(
        cauchy_product(a.coefficients_upto(order), b.coefficients_upto(order), order), a.semantics
    )


def substitute_square(a: GrowthSeries) -> GrowthSeries:
    """g(t) -> g(t^2)."""
    if a.is_exact:
        return GrowthSeries.exact(a.function.substitute(RationalFunction.monomial(1, 2)), a.semantics)
    spread = [Fraction(0)] * (2 * a.order + 1)
    for k, c in enumerate(a.coefficients):
        spread[2 * k] = c
    return GrowthSeries.truncated(spread, a.semantics)


def conjugacy_series(f: GrowthSeries, g: GrowthSeries) -> GrowthSeries:
    """f(t)(1 + g(t^2)): words u v u^-1 with u counted by g and v by f."""
    one = GrowthSeries.exact(RationalFunction.one(), g.semantics)
    return concat_unambiguous(f, union_disjoint(one, substitute_square(g)))


# ----------------------------------------------------------------------
# CSV series files

# column name -> (semantics, kind)
_COLUMNS = {
    "n_k": (COUNTS, "int"),
    "b_k": (PATHS, "int"),
    "nstar_k": (MONOID, "int"),
    "f_k_num": (FREQUENCIES, "num"),
    "f_k_den": (FREQUENCIES, "den"),
    "p_k_num": (RETURNS, "num"),
    "p_k_den": (RETURNS, "den"),
    "n_k_num": (COUNTS, "num"),
    "n_k_den": (COUNTS, "den"),
    "b_k_num": (PATHS, "num"),
    "b_k_den": (PATHS, "den"),
    "nstar_k_num": (MONOID, "num"),
    "nstar_k_den": (MONOID, "den"),
}


def read_series_csv(path) -> dict:
    """
    Read a series CSV file.

    Accepted headers start with ``k`` followed by integer columns (``n_k``,
    ``b_k``, ``nstar_k``) or numerator/denominator pairs (``f_k_num,f_k_den``,
    ``p_k_num,p_k_den``, ...); ``k,n_k,f_k_num,f_k_den`` carries both.

    Returns:
        Dict from semantics to truncated GrowthSeries

    Raises:
        InputError: On unknown columns, bad numbers or non-consecutive k
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise InputError(f"{path} has no series rows")
    header = [cell.strip() for cell in rows[0]]
    if header[0] != "k" or len(header) < 2:
        raise InputError(f"{path}: the header must start with k and name at least one column")
    unknown = [name for name in header[1:] if name not in _COLUMNS]
    if unknown:
        raise InputError(f"{path}: unknown column(s) {', '.join(unknown)}")

    values = {}
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputError(f"{path}:{line}: expected {len(header)} fields, got {len(row)}")
        try:
            k = int(row[0])
            cells = {name: int(cell) for name, cell in zip(header[1:], row[1:])}
        except ValueError as exc:
            raise InputError(f"{path}:{line}: {exc}") from exc
        if k != line - 2:
            raise InputError(f"{path}:{line}: expected k = {line - 2}, got {k}")
        for name, value in cells.items():
            semantics, kind = _COLUMNS[name]
            entry = values.setdefault(semantics, {"int": [], "num": [], "den": []})
            entry[kind].append(value)

    result = {}
    for semantics, entry in values.items():
        if entry["int"]:
            result[semantics] = GrowthSeries.truncated(entry["int"], semantics)
            continue
        if len(entry["num"]) != len(entry["den"]):
            raise InputError(f"{path}: {semantics}_k needs both numerator and denominator columns")
        if any(den == 0 for den in entry["den"]):
            raise InputError(f"{path}: zero denominator in {semantics}_k")
        result[semantics] = GrowthSeries.truncated(
            [Fraction(num, den) for num, den in zip(entry["num"], entry["den"])], semantics
        )
    logger.debug("read_series_csv: %s has columns %s", path, ", ".join(sorted(result)))
    return result


def _column_names(series):
    name = f"{series.semantics}_k"
    if series.semantics in INTEGER_SEMANTICS and all(c.denominator == 1 for c in series.coefficients):
        return [name]
    return [f"{name}_num", f"{name}_den"]


def _cells(series, k):
    value = series.coefficients[k]
    if series.semantics in INTEGER_SEMANTICS and all(c.denominator == 1 for c in series.coefficients):
        return [value.numerator]
    return [value.numerator, value.denominator]


def write_series_csv(stream, *series):
    """
    Write truncated series side by side, one row per k.

    ``series`` are truncated to the smallest order among them.
    """
    if not series:
        raise InputError("nothing to write")
    order = min(s.order for s in series)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k"] + [name for s in series for name in _column_names(s)])
    for k in range(order + 1):
        writer.writerow([k] + [cell for s in series for cell in _cells(s, k)])


def frequencies_from_table(table: dict, alphabet: Alphabet | None = None) -> GrowthSeries:
    """
    The frequency series of a decoded CSV file, converting counts when needed.

    Raises:
        InputError: If the file has neither f_k nor (with an alphabet) n_k
    """
    if FREQUENCIES in table:
        return table[FREQUENCIES]
    if COUNTS in table:
        if alphabet is None:
            raise InputError("converting n_k to frequencies needs the rank of the free group")
        return frequencies(table[COUNTS], alphabet)
    raise InputError("the series file has neither f_k nor n_k columns")


def counts_from_table(table: dict, alphabet: Alphabet | None = None) -> GrowthSeries:
    """The count series of a decoded CSV file, converting frequencies when needed."""
    if COUNTS in table:
        return table[COUNTS]
    if FREQUENCIES in table:
        if alphabet is None:
            raise InputError("converting f_k to counts needs the rank of the free group")
        return counts_from_frequencies(table[FREQUENCIES], alphabet)
    raise InputError("the series file has neither n_k nor f_k columns")
