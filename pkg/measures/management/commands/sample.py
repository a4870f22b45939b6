"""
Draw random words from the no-return walk W_s and summarize them.
"""
import numpy as np

from core import constants
from core.commands import FreeGroupCommand, non_negative_int, positive_int, probability_argument
from core.exceptions import InputError
from core.words import Alphabet, Word, format_word
from measures.measure import MeasureParams, length_goodness_of_fit, sample


class Command(FreeGroupCommand):
    help = "Sample words of a free group from W_s and report length statistics."

    def add_arguments(self, parser):
        parser.add_argument('--rank', type=positive_int, required=True, help='Rank m of the free group')
        parser.add_argument('--s', type=probability_argument, required=True, help='Stopping probability')
        parser.add_argument('--samples', type=positive_int, required=True, help='Number of words')
        parser.add_argument('--seed', type=non_negative_int, required=True, help='RNG seed')
        parser.add_argument('--workers', type=positive_int, default=None, help='Sampling threads')
        parser.add_argument('--show', type=non_negative_int, default=0, help='Print the first N words')
        self.add_format_argument(parser)

    def handle(self, *args, **options):
        params = MeasureParams(Alphabet(options['rank']), options['s'])
        batch = sample(params, options['samples'], options['seed'], workers=options.get('workers'))
        lengths = batch.lengths

        summary = {
            'rank': params.alphabet.rank,
            's': params.s,
            'seed': options['seed'],
            'samples': batch.count,
            'mean_length': float(np.mean(lengths)),
            'expected_mean_length': float(params.mean_length),
            'std_length': float(np.std(lengths)),
            'expected_std_length': params.std_length,
            'identity_fraction': float(np.mean(lengths == 0)),
        }
        try:
            summary['chi_square_pvalue'] = length_goodness_of_fit(lengths, params.s).pvalue
        except InputError as exc:
            self.stderr.write(self.style.WARNING(f"Skipping goodness of fit: {exc}"))

        shown = []
        for letters in batch.iter_letters():
            if len(shown) >= options['show']:
                break
            shown.append(format_word(Word(params.alphabet, letters)))

        if options['format'] == constants.FORMAT_JSON:
            self._output_json({**summary, 'words': shown})
            return
        for text in shown:
            self.stdout.write(text)
        self._output_lines(summary.items())
