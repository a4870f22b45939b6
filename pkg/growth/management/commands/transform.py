"""
Series transforms between walks on a quotient and reduced words in a subgroup.

    godsil            b_k or n*_k -> n_k (forward), n_k -> b_k (inverse)
    return-frequency  p_k -> f_k
    quenell           characteristic polynomial chi(x) of the Cayley graph -> N*(t)

The input is a series CSV file or a rational function (in t, or in x for
quenell). Exact results print as a rational function unless --max-k asks
for coefficients; truncated results print as CSV.
"""
import os

from core import constants
from core.commands import FreeGroupCommand, non_negative_int, positive_int
from core.exact import RationalFunction
from core.exceptions import InputError
from core.words import Alphabet
from growth.series import (
    COUNTS, MONOID, PATHS, RETURNS, GrowthSeries, read_series_csv, write_series_csv,
)
from growth.transforms import DIRECTIONS, FORWARD, godsil_transform, quenell, return_frequency_transform

GODSIL = 'godsil'
RETURN_FREQUENCY = 'return-frequency'
QUENELL = 'quenell'


class Command(FreeGroupCommand):
    help = "Apply the godsil, return-frequency or quenell transform to a series CSV or expression."

    def add_arguments(self, parser):
        parser.add_argument('transform', choices=[GODSIL, RETURN_FREQUENCY, QUENELL], help='Transform')
        parser.add_argument('input', help='Series CSV file, or a rational function')
        parser.add_argument('--rank', type=positive_int, default=None, help='Rank m of the free group')
        parser.add_argument('--direction', choices=DIRECTIONS, default=FORWARD, help='godsil direction')
        parser.add_argument('--index', type=positive_int, default=None, help='Index |F:N| for quenell')
        parser.add_argument('--max-k', type=non_negative_int, default=None, help='Coefficients to print')

    def handle(self, *args, **options):
        name = options['transform']
        if name == QUENELL:
            if options.get('index') is None:
                raise InputError("quenell needs --index")
            charpoly = RationalFunction.parse(options['input'], constants.VAR_X)
            self._write(quenell(charpoly, options['index']), options.get('max_k'))
            return

        if options.get('rank') is None:
            raise InputError(f"{name} needs --rank")
        alphabet = Alphabet(options['rank'])
        if name == RETURN_FREQUENCY:
            series = self._read_input(options['input'], (RETURNS,), RETURNS)
            result = return_frequency_transform(series, alphabet)
        elif options['direction'] == FORWARD:
            series = self._read_input(options['input'], (PATHS, MONOID), MONOID)
            result = godsil_transform(series, alphabet, FORWARD)
        else:
            series = self._read_input(options['input'], (COUNTS,), COUNTS)
            result = godsil_transform(series, alphabet, options['direction'], order=options.get('max_k'))
        self._write(result, options.get('max_k'))

    def _read_input(self, text, accepted, exact_semantics):
        if os.path.exists(text):
            table = read_series_csv(text)
            for semantics in accepted:
                if semantics in table:
                    return table[semantics]
            raise InputError(f"{text} has none of the columns {', '.join(s + '_k' for s in accepted)}")
        return GrowthSeries.exact(RationalFunction.parse(text), exact_semantics)

    def _write(self, result, max_k):
        if result.is_exact and max_k is None:
            self.stdout.write(str(result.function))
            return
        if max_k is not None:
            result = result.truncate(min(max_k, result.order) if not result.is_exact else max_k)
        write_series_csv(self.stdout, result)
