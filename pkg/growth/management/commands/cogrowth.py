"""
Relative growth rate (cogrowth) of a set, with the amenability indicator for normal subgroups.
"""
from core import constants
from core.commands import FreeGroupCommand, positive_int
from core.exceptions import InputError
from core.words import Alphabet
from growth.analysis import cogrowth
from growth.series import counts_from_table, counts_series, read_series_csv
from measures.sets import load_set_file


class Command(FreeGroupCommand):
    help = "Compute gamma = 1/((2m-1) radius of N(t)) for a set file or series CSV."

    def add_arguments(self, parser):
        parser.add_argument('file', help='JSON set file, or a series CSV')
        parser.add_argument('--normal', action='store_true', help='The set is a normal subgroup; report amenability')
        parser.add_argument('--rank', type=positive_int, default=None, help='Rank, required for CSV files')
        self.add_format_argument(parser)

    def handle(self, *args, **options):
        path = options['file']
        if path.endswith('.csv'):
            if not options.get('rank'):
                raise InputError("--rank is required with a series CSV")
            alphabet = Alphabet(options['rank'])
            nseries = counts_from_table(read_series_csv(path), alphabet)
        else:
            definition = load_set_file(path)
            alphabet = definition.alphabet
            nseries = counts_series(definition.mu_star, definition.contains_identity)

        report = cogrowth(nseries, alphabet, normal=options['normal'])
        if report.approximate:
            self.stderr.write(self.style.WARNING("Truncated series: gamma is an estimate"))
        if options['format'] == constants.FORMAT_JSON:
            self._output_json(report.to_json())
        else:
            self._output_lines(report.to_json().items())
