"""
Monte Carlo estimate of mu_s(R) for a set file, checked against the exact value.
"""
from core import constants
from core.commands import FreeGroupCommand, non_negative_int, positive_int, probability_argument
from measures.measure import MeasureParams, measure_value, monte_carlo_measure, sample
from measures.sets import load_set_file


class Command(FreeGroupCommand):
    help = "Estimate mu_s of a subgroup or regular set by sampling W_s. Also available as mc-measure."

    def add_arguments(self, parser):
        parser.add_argument('file', help='JSON set file')
        parser.add_argument('--s', type=probability_argument, required=True, help='Stopping probability')
        parser.add_argument('--samples', type=positive_int, required=True, help='Number of words')
        parser.add_argument('--seed', type=non_negative_int, required=True, help='RNG seed')
        parser.add_argument('--workers', type=positive_int, default=None, help='Sampling threads')
        self.add_format_argument(parser)

    def handle(self, *args, **options):
        definition = load_set_file(options['file'])
        params = MeasureParams(definition.alphabet, options['s'])
        batch = sample(params, options['samples'], options['seed'], workers=options.get('workers'))
        estimate = monte_carlo_measure(params, definition, batch)
        exact_value = measure_value(definition.mu_of_s, params.s)
        z_score = estimate.z_score(exact_value)

        result = {
            'type': definition.kind,
            's': params.s,
            'seed': options['seed'],
            **estimate.to_json(),
            'exact': exact_value,
            'z_score': z_score,
        }
        if options['format'] == constants.FORMAT_JSON:
            self._output_json(result)
            return
        self.stdout.write(f"estimate: {float(estimate.estimate):.6f} +/- {estimate.stderr:.6f}")
        self.stdout.write(f"exact: {exact_value} ({float(exact_value):.6f})")
        if abs(z_score) > 3:
            self.stdout.write(self.style.WARNING(f"z-score: {z_score:.2f}"))
        else:
            self.stdout.write(self.style.SUCCESS(f"z-score: {z_score:.2f}"))
