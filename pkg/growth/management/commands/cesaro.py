"""
Cesaro average (f_0 + ... + f_n)/(n + 1) of a frequency series.
"""
from core import constants
from core.commands import FreeGroupCommand, non_negative_int, positive_int
from core.words import Alphabet
from growth.analysis import cesaro_estimate
from growth.series import frequencies_from_table, read_series_csv


class Command(FreeGroupCommand):
    help = "Estimate mu0 as the Cesaro average of f_0..f_n from a series CSV."

    def add_arguments(self, parser):
        parser.add_argument('file', help='Series CSV')
        parser.add_argument('--n', type=non_negative_int, required=True, help='Horizon n')
        parser.add_argument('--rank', type=positive_int, default=None, help='Rank, for files with n_k only')
        self.add_format_argument(parser)

    def handle(self, *args, **options):
        alphabet = Alphabet(options['rank']) if options.get('rank') else None
        f = frequencies_from_table(read_series_csv(options['file']), alphabet)
        estimate = cesaro_estimate(f, options['n'])
        if options['format'] == constants.FORMAT_JSON:
            self._output_json({'n': options['n'], 'estimate': estimate, 'decimal': float(estimate)})
        else:
            self.stdout.write(f"{estimate} ({float(estimate):.6f})")
