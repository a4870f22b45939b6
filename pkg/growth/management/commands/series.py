"""
Write the count and frequency series of a set as CSV (k,n_k,f_k_num,f_k_den).
"""
from core.commands import FreeGroupCommand, non_negative_int
from growth.series import counts_series, frequencies, write_series_csv
from measures.sets import AUTOMATON, SUBGROUP, load_set_file

ANY_SET = "set"


class Command(FreeGroupCommand):
    help = "Print n_k and f_k for k = 0..K of a subgroup or regular set."

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=[SUBGROUP, AUTOMATON, ANY_SET], help='Expected set type')
        parser.add_argument('file', help='JSON set file')
        parser.add_argument('--max-k', type=non_negative_int, required=True, help='Largest length K')

    def handle(self, *args, **options):
        kind = None if options['kind'] == ANY_SET else options['kind']
        definition = load_set_file(options['file'], expected_kind=kind)
        counts = counts_series(definition.mu_star, definition.contains_identity).truncate(options['max_k'])
        write_series_csv(self.stdout, counts, frequencies(counts, definition.alphabet))
