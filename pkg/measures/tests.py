import json
import os
import tempfile
from fractions import Fraction
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from automata import machines
from core.exact import RationalFunction
from core.exceptions import InputError
from core.words import Alphabet, Word, iter_sphere
from measures import measure
from measures.measure import MeasureParams
from measures.sets import AUTOMATON, SetDefinition, load_set_file, parse_set
from stallings import graphs

F2 = Alphabet(2)

EVEN_SUBGROUP = {"type": "subgroup", "rank": 2, "generators": ["aa", "ab", "ba"]}
CONJUGATE = {"rank": 2, "generators": ["abA"]}
EVEN_LENGTH_WORDS = {
    "type": "automaton",
    "rank": 2,
    "states": 2,
    "initial": [0],
    "accept": [0],
    "restrict": True,
    "edges": [[q, x, 1 - q] for q in (0, 1) for x in "aAbB"],
}


def rf(text, var="t"):
    return RationalFunction.parse(text, var)


def word(text):
    return Word.parse(text, F2)


class AtomTests(SimpleTestCase):
    def setUp(self):
        self.half = MeasureParams(F2, Fraction(1, 2))

    def test_atom(self):
        self.assertEqual(measure.atom(self.half, word("a")), Fraction(1, 16))
        self.assertEqual(measure.atom(self.half, Word.identity(F2)), Fraction(1, 2))

    def test_atoms_on_a_sphere_sum_to_the_length_law(self):
        params = MeasureParams(F2, Fraction(1, 3))
        for k in range(11):
            w = next(iter_sphere(F2, k))
            total = measure.atom(params, w) * F2.sphere_size(k)
            self.assertEqual(total, params.s * (1 - params.s) ** k)

    def test_adjusted_atom(self):
        self.assertEqual(measure.adjusted_atom(self.half, word("b")), Fraction(1, 6))
        self.assertEqual(measure.adjusted_atom(self.half, word("abA")), Fraction(1, 216))
        with self.assertRaises(InputError):
            measure.adjusted_atom(self.half, Word.identity(F2))

    def test_adjusted_atom_is_multiplicative_without_cancellation(self):
        u, v = word("ab"), word("a")
        self.assertEqual(
            measure.adjusted_atom(self.half, u * v),
            measure.adjusted_atom(self.half, u) * measure.adjusted_atom(self.half, v),
        )

    def test_frequency_atoms(self):
        self.assertEqual(measure.frequency_atom(F2, word("a")), Fraction(1, 4))
        self.assertEqual(measure.adjusted_frequency_atom(F2, word("a")), Fraction(1, 3))
        self.assertEqual(measure.frequency_atom(F2, Word.identity(F2)), 1)
        for w in iter_sphere(F2, 3):
            self.assertEqual(measure.frequency_atom(F2, w) * F2.sphere_size(3), 1)

    def test_parameters(self):
        params = MeasureParams(F2, "0.2")
        self.assertEqual(params.s, Fraction(1, 5))
        self.assertEqual(params.mean_length, 4)
        self.assertAlmostEqual(params.std_length, 0.8**0.5 / 0.2)
        for bad in (0, 1, "3/2"):
            with self.assertRaises(InputError):
                MeasureParams(F2, bad)


class MeasureOfSTests(SimpleTestCase):
    def test_full_group_has_measure_one(self):
        mustar = machines.measure_regular(machines.full_group(F2))
        self.assertEqual(measure.to_measure_of_s(mustar, F2, True), RationalFunction.one("s"))

    def test_even_subgroup(self):
        mustar = graphs.measure_subgroup([word("aa"), word("ab"), word("ba")])
        mu = measure.to_measure_of_s(mustar, F2, True)
        self.assertEqual(mu, rf("1/(2-s)", "s"))
        expected = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]
        self.assertEqual(mu.series_coefficients(3), expected)

    def test_cone_limit_at_zero(self):
        mustar = machines.measure_regular(machines.cone(word("ab")))
        mu = measure.to_measure_of_s(mustar, F2, False)
        self.assertEqual(mu.evaluate(0), Fraction(1, 12))

    def test_rank_one(self):
        # the whole of Z: 2t/(1 - t)
        mu = measure.to_measure_of_s(rf("2*t/(1-t)"), Alphabet(1), True)
        self.assertEqual(mu, RationalFunction.one("s"))

    def test_constant_term_is_rejected(self):
        with self.assertRaises(InputError):
            measure.to_measure_of_s(rf("1 + t"), F2, False)
        with self.assertRaises(InputError):
            measure.to_measure_of_s(rf("1/t"), F2, False)


class SamplerTests(SimpleTestCase):
    def test_same_seed_same_batch(self):
        params = MeasureParams(F2, Fraction(1, 3))
        first = measure.sample(params, 2000, seed=5)
        second = measure.sample(params, 2000, seed=5)
        self.assertEqual(list(first.iter_letters()), list(second.iter_letters()))
        other = measure.sample(params, 2000, seed=6)
        self.assertNotEqual(list(first.iter_letters()), list(other.iter_letters()))

    def test_workers_do_not_change_the_batch(self):
        params = MeasureParams(F2, Fraction(1, 4))
        serial = measure.sample(params, 5000, seed=9, workers=1, chunk=700)
        threaded = measure.sample(params, 5000, seed=9, workers=3, chunk=700)
        self.assertEqual(list(serial.iter_letters()), list(threaded.iter_letters()))

    def test_sampled_words_are_reduced(self):
        params = MeasureParams(Alphabet(3), Fraction(1, 10))
        batch = measure.sample(params, 3000, seed=1)
        for letters, w, length in zip(batch.iter_letters(), batch.words, batch.lengths):
            self.assertEqual(len(letters), length)
            self.assertEqual(w.letters, letters)

    def test_long_words_are_stored_by_total_length(self):
        params = MeasureParams(F2, Fraction(1, 1000))
        batch = measure.sample(params, 300, seed=11, chunk=300)
        (chunk,) = batch.chunks
        self.assertEqual(len(chunk.codes), int(batch.lengths.sum()))
        self.assertGreater(int(batch.lengths.max()), 1000)
        for letters, length in zip(batch.iter_letters(), batch.lengths):
            self.assertEqual(len(letters), length)
            self.assertTrue(all(x != -y for x, y in zip(letters, letters[1:])))

    def test_rank_one_words_are_powers(self):
        batch = measure.sample(MeasureParams(Alphabet(1), Fraction(1, 5)), 500, seed=3)
        for letters in batch.iter_letters():
            self.assertLessEqual(len(set(letters)), 1)

    def test_mean_length(self):
        params = MeasureParams(F2, Fraction(1, 2))
        n = 100_000
        lengths = measure.sample(params, n, seed=2024).lengths
        self.assertLess(abs(lengths.mean() - 1), 3 * params.std_length / n**0.5)

    def test_identity_frequency(self):
        params = MeasureParams(F2, Fraction(3, 10))
        n = 100_000
        lengths = measure.sample(params, n, seed=77).lengths
        self.assertLess(abs(np.mean(lengths == 0) - 0.3), 3 * (0.21 / n) ** 0.5)

    def test_lengths_only_matches_full_sample(self):
        params = MeasureParams(F2, Fraction(1, 3))
        lengths = measure.sample_lengths(params, 3000, seed=4, chunk=1000)
        batch = measure.sample(params, 3000, seed=4, chunk=1000)
        self.assertTrue(np.array_equal(lengths, batch.lengths))

    def test_geometric_length_law(self):
        for s in (Fraction(1, 10), Fraction(1, 2)):
            params = MeasureParams(F2, s)
            lengths = measure.sample_lengths(params, 1_000_000, seed=12345)
            n = len(lengths)
            self.assertLess(abs(lengths.mean() - float(params.mean_length)), 3 * params.std_length / n**0.5)
            self.assertGreater(measure.length_goodness_of_fit(lengths, s).pvalue, 1e-3)

    def test_goodness_of_fit_needs_samples(self):
        with self.assertRaises(InputError):
            measure.length_goodness_of_fit([0, 1], Fraction(1, 2))

    def test_bad_arguments(self):
        params = MeasureParams(F2, Fraction(1, 2))
        with self.assertRaises(InputError):
            measure.sample(params, -1, seed=0)
        with self.assertRaises(InputError):
            measure.sample(params, 10, seed=-3)


class MonteCarloTests(SimpleTestCase):
    def assertMatchesExactMeasure(self, definition, s, seed, count=100_000):
        params = MeasureParams(definition.alphabet, s)
        batch = measure.sample(params, count, seed=seed)
        estimate = measure.monte_carlo_measure(params, definition, batch)
        exact = measure.measure_value(definition.mu_of_s, s)
        self.assertEqual(estimate.count, count)
        self.assertLess(abs(estimate.z_score(exact)), 3, f"{estimate.estimate} against {exact}")

    def test_even_subgroup(self):
        definition = parse_set(EVEN_SUBGROUP)
        self.assertEqual(measure.measure_value(definition.mu_of_s, Fraction(1, 5)), Fraction(5, 9))
        self.assertMatchesExactMeasure(definition, Fraction(1, 5), seed=42)

    def test_cone(self):
        definition = SetDefinition(AUTOMATON, F2, machines.cone(word("ab")))
        self.assertEqual(measure.measure_value(definition.mu_of_s, Fraction(1, 5)), Fraction(4, 75))
        self.assertMatchesExactMeasure(definition, Fraction(1, 5), seed=43)

    def test_cyclic_subgroup(self):
        self.assertMatchesExactMeasure(parse_set({"rank": 2, "generators": ["a"]}), Fraction(1, 3), seed=44)

    def test_index_three_kernel(self):
        kernel = parse_set({"rank": 2, "permutations": [[1, 2, 0], [0, 1, 2]]})
        self.assertMatchesExactMeasure(kernel, Fraction(1, 4), seed=45)

    def test_conjugate_subgroup_through_a_word_predicate(self):
        definition = parse_set(CONJUGATE)
        params = MeasureParams(F2, Fraction(1, 4))
        batch = measure.sample(params, 20_000, seed=10)
        incremental = measure.monte_carlo_measure(params, definition, batch)
        predicate = measure.monte_carlo_measure(params, lambda w: graphs.membership(definition.source, w), batch)
        self.assertEqual(incremental, predicate)
        exact = measure.measure_value(definition.mu_of_s, params.s)
        self.assertLess(abs(incremental.z_score(exact)), 3)

    def test_empty_and_full_sets_are_exact(self):
        params = MeasureParams(F2, Fraction(1, 2))
        batch = measure.sample(params, 1000, seed=8)
        nothing = measure.monte_carlo_measure(params, machines.empty(F2), batch)
        everything = measure.monte_carlo_measure(params, lambda w: True, batch)
        self.assertEqual((nothing.estimate, nothing.stderr), (0, 0))
        self.assertEqual((everything.estimate, everything.stderr), (1, 0))

    def test_batch_must_match_parameters(self):
        batch = measure.sample(MeasureParams(F2, Fraction(1, 2)), 10, seed=0)
        with self.assertRaises(InputError):
            measure.monte_carlo_measure(MeasureParams(F2, Fraction(1, 3)), lambda w: True, batch)


class SetFileTests(SimpleTestCase):
    def test_subgroup(self):
        definition = parse_set(EVEN_SUBGROUP)
        self.assertTrue(definition.is_subgroup)
        self.assertTrue(definition.contains_identity)
        self.assertEqual(definition.mu_star, rf("12*t^2/(1-9*t^2)"))
        self.assertEqual(definition.counts(4), [1, 0, 12, 0, 108])
        self.assertIn(word("ab"), definition)

    def test_type_is_inferred(self):
        self.assertEqual(parse_set(CONJUGATE).kind, "subgroup")
        self.assertEqual(parse_set(EVEN_LENGTH_WORDS).kind, "automaton")
        untyped = {key: value for key, value in EVEN_LENGTH_WORDS.items() if key != "type"}
        self.assertEqual(parse_set(untyped).kind, "automaton")

    def test_restricted_automaton_matches_subgroup(self):
        automaton = parse_set(EVEN_LENGTH_WORDS)
        subgroup = parse_set(EVEN_SUBGROUP)
        self.assertEqual(automaton.mu_of_s, subgroup.mu_of_s)
        self.assertTrue(automaton.contains_identity)

    def test_unrestricted_automaton_must_be_reduced(self):
        raw = {key: value for key, value in EVEN_LENGTH_WORDS.items() if key != "restrict"}
        with self.assertRaises(InputError):
            parse_set(raw)

    def test_permutation_subgroup(self):
        definition = parse_set({"rank": 2, "permutations": [[1, 0], [1, 0]]})
        self.assertEqual(definition.mu_of_s, parse_set(EVEN_SUBGROUP).mu_of_s)

    def test_malformed_files(self):
        for data in ([], {"rank": 2}, {"type": "coset", "rank": 2}, {"generators": ["a"]}, {"rank": 2, "generators": "a"}):
            with self.assertRaises(InputError):
                parse_set(data)

    def test_load_checks_the_expected_type(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "even.json")
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(EVEN_SUBGROUP, handle)
            self.assertEqual(load_set_file(path, "subgroup").kind, "subgroup")
            with self.assertRaises(InputError):
                load_set_file(path, "automaton")
            with self.assertRaises(InputError):
                load_set_file(os.path.join(directory, "missing.json"))


class CommandTests(SimpleTestCase):
    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = directory.name

    def write_set(self, name, data):
        path = os.path.join(self.directory, name)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(data, handle)
        return path

    def run_command(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def test_measure_conjugate_subgroup(self):
        path = self.write_set("conjugate.json", CONJUGATE)
        output = self.run_command("measure", "subgroup", path)
        self.assertEqual(output.splitlines()[0], "2*t^3/(1 - t)")

    def test_measure_json_with_value(self):
        path = self.write_set("even.json", EVEN_SUBGROUP)
        result = json.loads(self.run_command("measure", "set", path, "--s", "1/5", "--format", "json"))
        self.assertEqual(result["mu_of_s"], str(rf("1/(2-s)", "s")))
        self.assertEqual(result["value"], "5/9")
        self.assertEqual(result["s"], "1/5")
        self.assertTrue(result["contains_identity"])

    def test_measure_type_mismatch(self):
        path = self.write_set("even.json", EVEN_SUBGROUP)
        with self.assertRaises(CommandError) as caught:
            self.run_command("measure", "automaton", path)
        self.assertEqual(caught.exception.returncode, 1)

    def test_bad_probability_is_a_parse_error(self):
        path = self.write_set("even.json", EVEN_SUBGROUP)
        with self.assertRaises(CommandError) as caught:
            self.run_command("measure", "subgroup", path, "--s", "2")
        self.assertEqual(caught.exception.returncode, 1)

    def test_sample_json(self):
        result = json.loads(
            self.run_command("sample", "--rank", "2", "--s", "0.5", "--samples", "1000", "--seed", "1",
                             "--show", "5", "--format", "json")
        )
        self.assertEqual(len(result["words"]), 5)
        self.assertEqual(result["samples"], 1000)
        self.assertEqual(result["expected_mean_length"], 1.0)

    def test_sample_is_deterministic(self):
        args = ("sample", "--rank", "3", "--s", "1/4", "--samples", "500", "--seed", "17", "--show", "20")
        self.assertEqual(self.run_command(*args), self.run_command(*args))

    def test_mc_measure(self):
        path = self.write_set("even.json", EVEN_SUBGROUP)
        result = json.loads(
            self.run_command("mc_measure", path, "--s", "0.2", "--samples", "100000", "--seed", "42",
                             "--format", "json")
        )
        self.assertEqual(result["exact"], "5/9")
        self.assertLess(abs(result["z_score"]), 3)

    def test_mc_measure_hyphenated_name(self):
        path = self.write_set("even.json", EVEN_SUBGROUP)
        args = (path, "--s", "1/3", "--samples", "2000", "--seed", "5", "--format", "json")
        self.assertEqual(self.run_command("mc-measure", *args), self.run_command("mc_measure", *args))
