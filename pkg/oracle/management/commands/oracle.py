"""
Brute-force counts of a set file, written in the series CSV format.
"""
from core.commands import FreeGroupCommand, non_negative_int
from growth.series import COUNTS, MONOID, GrowthSeries, frequencies, write_series_csv
from measures.sets import load_set_file
from oracle.enumeration import count_monoid_preimage, count_reduced

COUNT = 'count'


class Command(FreeGroupCommand):
    help = "Count the words of length 0..K in a set by exhaustive enumeration."

    def add_arguments(self, parser):
        parser.add_argument('action', choices=[COUNT], help='Oracle action')
        parser.add_argument('file', help='JSON set file')
        parser.add_argument('--max-k', type=non_negative_int, required=True, help='Largest length K')
        parser.add_argument(
            '--monoid',
            action='store_true',
            help='Count words of the free monoid that reduce into the set (n*_k)',
        )
        parser.add_argument('--cap', type=non_negative_int, default=None, help='Override the enumeration cap')

    def handle(self, *args, **options):
        definition = load_set_file(options['file'])
        max_k, cap = options['max_k'], options.get('cap')
        if options['monoid']:
            counts = count_monoid_preimage(definition, definition.alphabet, max_k, cap=cap)
            write_series_csv(self.stdout, GrowthSeries.truncated(counts, MONOID))
            return
        counts = GrowthSeries.truncated(count_reduced(definition, definition.alphabet, max_k, cap=cap), COUNTS)
        write_series_csv(self.stdout, counts, frequencies(counts, definition.alphabet))
