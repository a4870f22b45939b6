"""
Exact measure of a subgroup or regular set.

Prints the adjusted measure mu*(R minus 1) as a function of t, the measure
mu(R) as a function of s, and its value at ``--s`` when given.
"""
from core import constants
from core.commands import FreeGroupCommand, probability_argument
from measures.measure import measure_value
from measures.sets import AUTOMATON, SUBGROUP, load_set_file

ANY_SET = "set"


class Command(FreeGroupCommand):
    help = "Compute mu*(t) and mu(s) of a subgroup or regular set given as a JSON set file."

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=[SUBGROUP, AUTOMATON, ANY_SET], help='Expected set type')
        parser.add_argument('file', help='JSON set file')
        parser.add_argument('--s', type=probability_argument, default=None, help='Evaluate mu at this s')
        self.add_format_argument(parser)

    def handle(self, *args, **options):
        kind = None if options['kind'] == ANY_SET else options['kind']
        definition = load_set_file(options['file'], expected_kind=kind)
        s = options.get('s')

        result = {
            'type': definition.kind,
            'rank': definition.alphabet.rank,
            'contains_identity': definition.contains_identity,
            'mu_star': str(definition.mu_star),
            'mu_of_s': str(definition.mu_of_s),
        }
        if s is not None:
            result['s'] = s
            result['value'] = measure_value(definition.mu_of_s, s)

        if options['format'] == constants.FORMAT_JSON:
            self._output_json(result)
        else:
            self._output_text(result)

    def _output_text(self, result):
        self.stdout.write(result['mu_star'])
        self.stdout.write(f"mu(s) = {result['mu_of_s']}")
        if 'value' in result:
            self.stdout.write(f"mu at s = {result['s']}: {result['value']}")
