import json
import math
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from automata import machines
from automata.machines import ReducedDfa
from core.exceptions import InputError, ResourceError
from core.words import Alphabet, Word, reduce
from growth import transforms
from growth.series import COUNTS, GrowthSeries, counts_series
from measures.sets import parse_set
from oracle import enumeration
from stallings import graphs

F2 = Alphabet(2)

EVEN_SUBGROUP = {"type": "subgroup", "rank": 2, "generators": ["aa", "ab", "ba"]}


def subgroup(*texts):
    return graphs.build_subgroup_graph([Word.parse(text, F2) for text in texts])


def random_generators(rng, alphabet, count, max_length):
    generators = []
    while len(generators) < count:
        length = int(rng.integers(1, max_length + 1))
        letters = [int(x) for x in rng.choice(alphabet.letters, size=length)]
        w = reduce(letters, alphabet)
        if not w.is_identity:
            generators.append(w)
    return generators


def random_automaton(rng, rank, states):
    letters = "aAbBcC"[: 2 * rank]
    edges = [
        [q, x, int(rng.integers(states))]
        for q in range(states)
        for x in letters
        if rng.random() < 0.7
    ]
    accept = [q for q in range(states) if rng.random() < 0.5] or [states - 1]
    return {
        "type": "automaton",
        "rank": rank,
        "states": states,
        "initial": [0],
        "accept": accept,
        "restrict": True,
        "edges": edges,
    }


class CountReducedTests(SimpleTestCase):
    def test_even_subgroup(self):
        self.assertEqual(enumeration.count_reduced(parse_set(EVEN_SUBGROUP), F2, 4), [1, 0, 12, 0, 108])

    def test_conjugate_subgroup_without_identity(self):
        g = subgroup("abA")
        counts = enumeration.count_reduced(lambda w: not w.is_identity and g.contains(w), F2, 3)
        self.assertEqual(counts, [0, 0, 0, 2])

    def test_full_group(self):
        self.assertEqual(enumeration.count_reduced(lambda w: True, F2, 2), [1, 4, 12])
        self.assertEqual(enumeration.count_reduced(lambda w: True, Alphabet(3), 2), [1, 6, 30])

    def test_length_zero(self):
        self.assertEqual(enumeration.count_reduced(lambda w: True, F2, 0), [1])

    def test_incremental_and_predicate_agree(self):
        d = machines.cone(Word.parse("aB", F2))
        self.assertEqual(enumeration.count_reduced(d, F2, 6), enumeration.count_reduced(d.accepts, F2, 6))

    def test_codiagonal_subgroup(self):
        counts = enumeration.count_reduced(enumeration.exponent_sum_predicate(F2), F2, 6)
        self.assertEqual(counts[:3], [1, 0, 4])
        self.assertTrue(all(c == 0 for c in counts[1::2]))

    def test_budget(self):
        with self.assertRaises(ResourceError):
            enumeration.count_reduced(lambda w: True, F2, 10, cap=1000)

    def test_budget_counts_every_visited_word(self):
        # |S_2| = 12 but the search also visits the 5 shorter words
        with self.assertRaises(ResourceError):
            enumeration.count_reduced(lambda w: True, F2, 2, cap=12)
        self.assertEqual(enumeration.count_reduced(lambda w: True, F2, 2, cap=17), [1, 4, 12])

    @override_settings(FREEGROUP={"ENUMERATION_CAP": 10})
    def test_budget_from_settings(self):
        with self.assertRaises(ResourceError):
            enumeration.count_reduced(lambda w: True, F2, 3)

    def test_bad_arguments(self):
        with self.assertRaises(InputError):
            enumeration.count_reduced(lambda w: True, F2, -1)
        with self.assertRaises(InputError):
            enumeration.count_reduced(42, F2, 2)


class CountMonoidPreimageTests(SimpleTestCase):
    def test_codiagonal_subgroup(self):
        counts = enumeration.count_monoid_preimage(enumeration.exponent_sum_predicate(F2), F2, 6)
        self.assertEqual(counts, [1, 0, 8, 0, 96, 0, 1280])

    def test_full_group(self):
        self.assertEqual(enumeration.count_monoid_preimage(lambda w: True, F2, 3), [1, 4, 16, 64])

    def test_commutator_subgroup(self):
        counts = enumeration.count_monoid_preimage(enumeration.abelianization_predicate(F2), F2, 4)
        self.assertEqual(counts, [1, 0, 4, 0, 36])

    def test_commutator_subgroup_matches_lattice_walks(self):
        counts = enumeration.count_monoid_preimage(enumeration.abelianization_predicate(F2), F2, 8)
        self.assertEqual(counts, enumeration.lattice_return_counts(8))

    def test_finite_index_subgroup_counts_closed_walks(self):
        counts = enumeration.count_monoid_preimage(subgroup("aa", "ab", "ba"), F2, 4)
        self.assertEqual(counts, [1, 0, 16, 0, 256])

    def test_partial_membership(self):
        # <a>: a single vertex with an a-loop, so b leads nowhere until cancelled
        counts = enumeration.count_monoid_preimage(subgroup("a"), F2, 2)
        self.assertEqual(counts, [1, 2, 6])

    def test_budget(self):
        with self.assertRaises(ResourceError):
            enumeration.count_monoid_preimage(lambda w: True, F2, 8, cap=4**7)

    def test_budget_counts_shorter_monoid_words(self):
        with self.assertRaises(ResourceError):
            enumeration.count_monoid_preimage(lambda w: True, F2, 2, cap=16)
        self.assertEqual(enumeration.count_monoid_preimage(lambda w: True, F2, 2, cap=21), [1, 4, 16])


class LatticeTests(SimpleTestCase):
    def test_counts(self):
        self.assertEqual(enumeration.lattice_return_counts(6), [1, 0, 4, 0, 36, 0, 400])

    def test_central_binomial_squares(self):
        counts = enumeration.lattice_return_counts(40)
        self.assertEqual(counts[40], math.comb(40, 20) ** 2)

    def test_range(self):
        with self.assertRaises(InputError):
            enumeration.lattice_return_counts(-1)
        with self.assertRaises(InputError):
            enumeration.lattice_return_counts(enumeration.MAX_LATTICE_LENGTH + 1)


class PredicateTests(SimpleTestCase):
    def test_exponent_sum_with_weights_and_modulus(self):
        kernel = enumeration.exponent_sum_predicate(F2, weights=[1, 0], modulus=3)
        self.assertTrue(kernel(Word.parse("aaab", F2)))
        self.assertTrue(kernel(Word.parse("AAA", F2)))
        self.assertFalse(kernel(Word.parse("ab", F2)))

    def test_exponent_sum_validation(self):
        with self.assertRaises(InputError):
            enumeration.exponent_sum_predicate(F2, weights=[1])
        with self.assertRaises(InputError):
            enumeration.exponent_sum_predicate(F2, modulus=0)

    def test_abelianization(self):
        commutators = enumeration.abelianization_predicate(F2)
        self.assertTrue(commutators(Word.parse("abAB", F2)))
        self.assertFalse(commutators(Word.parse("abA", F2)))

    def test_modular_kernel_matches_permutation_graph(self):
        kernel = enumeration.exponent_sum_predicate(F2, weights=[1, 0], modulus=3)
        g = graphs.from_permutations(F2, [[1, 2, 0], [0, 1, 2]])
        self.assertEqual(enumeration.count_reduced(kernel, F2, 6), enumeration.count_reduced(g, F2, 6))


class ExactPipelineAgreementTests(SimpleTestCase):
    """Exact series against exhaustive counts on random inputs."""

    def test_random_subgroups(self):
        rng = np.random.default_rng(2024)
        for trial in range(8):
            generators = random_generators(rng, F2, int(rng.integers(1, 4)), 5)
            g = graphs.build_subgroup_graph(generators, F2)
            with self.subTest(trial=trial, generators=[str(w) for w in generators]):
                exact = counts_series(graphs.measure_graph(g), True).function.series_coefficients(8)
                self.assertEqual(exact, enumeration.count_reduced(g, F2, 8))

    def test_random_automata(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            data = random_automaton(rng, 2, int(rng.integers(1, 5)))
            definition = parse_set(data)
            raw = ReducedDfa.from_json(data)
            with self.subTest(trial=trial, edges=data["edges"]):
                counts = enumeration.count_reduced(definition, F2, 8)
                self.assertEqual(definition.counts(8), counts)
                self.assertEqual(enumeration.count_reduced(raw, F2, 8), counts)

    def test_monoid_counts_follow_from_reduced_counts(self):
        sets = [
            parse_set(EVEN_SUBGROUP),
            parse_set({"rank": 2, "generators": ["a"]}),
            parse_set({"rank": 2, "generators": ["abA", "bb"]}),
        ]
        for definition in sets:
            with self.subTest(str(definition.source)):
                n = GrowthSeries.exact(definition.count_series(), COUNTS)
                walks = transforms.godsil_transform(n, F2, transforms.INVERSE, order=7)
                self.assertEqual(list(walks.coefficients), enumeration.count_monoid_preimage(definition, F2, 7))


class CommandTests(SimpleTestCase):
    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.path = os.path.join(directory.name, "even.json")
        with open(self.path, "w", encoding="utf-8") as handle:
            json.dump(EVEN_SUBGROUP, handle)

    def run_command(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def test_count(self):
        output = self.run_command("oracle", "count", self.path, "--max-k", "4")
        self.assertEqual(
            output.splitlines(),
            ["k,n_k,f_k_num,f_k_den", "0,1,1,1", "1,0,0,1", "2,12,1,1", "3,0,0,1", "4,108,1,1"],
        )

    def test_monoid_count(self):
        output = self.run_command("oracle", "count", self.path, "--max-k", "2", "--monoid")
        self.assertEqual(output.splitlines(), ["k,nstar_k", "0,1", "1,0", "2,16"])

    def test_cap_is_a_resource_error(self):
        with self.assertRaises(CommandError) as caught:
            self.run_command("oracle", "count", self.path, "--max-k", "6", "--cap", "100")
        self.assertEqual(caught.exception.returncode, 2)

    def test_unknown_action(self):
        with self.assertRaises(CommandError) as caught:
            self.run_command("oracle", "enumerate", self.path, "--max-k", "2")
        self.assertEqual(caught.exception.returncode, 1)
