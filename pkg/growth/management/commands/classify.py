"""
Classify a set as Thick or Sparse from its exact measure function.

A ``.csv`` series file is classified heuristically instead (Thick, Sparse,
IntermediateDensity or Singular, reported with "certified": false).
"""
from core import constants
from core.commands import FreeGroupCommand, positive_int
from core.words import Alphabet
from growth.analysis import classify, classify_truncated
from growth.series import frequencies_from_table, read_series_csv
from measures.sets import load_set_file


class Command(FreeGroupCommand):
    help = "Report mu0, mu1, gamma, negligibility and density of a set file or series CSV."

    def add_arguments(self, parser):
        parser.add_argument('file', help='JSON set file, or a series CSV')
        parser.add_argument('--rank', type=positive_int, default=None, help='Rank, for CSV files with n_k only')
        self.add_format_argument(parser, default=constants.FORMAT_JSON)

    def handle(self, *args, **options):
        path = options['file']
        if path.endswith('.csv'):
            alphabet = Alphabet(options['rank']) if options.get('rank') else None
            report = classify_truncated(frequencies_from_table(read_series_csv(path), alphabet))
            self.stderr.write(self.style.WARNING("Truncated series: the classification is heuristic"))
            kind = 'series'
        else:
            definition = load_set_file(path)
            report = classify(definition.mu_of_s)
            kind = definition.kind

        data = {'type': kind, **report.to_json()}
        if options['format'] == constants.FORMAT_JSON:
            self._output_json(data)
        else:
            self._output_lines(data.items())
