from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from automata import machines
from automata.machines import ReducedDfa
from core.exact import RationalFunction
from core.exceptions import InputError
from core.words import Alphabet, Word, iter_sphere

F2 = Alphabet(2)


def rf(text):
    return RationalFunction.parse(text)


def word(text, alphabet=F2):
    return Word.parse(text, alphabet)


def even_length_machine(alphabet=F2):
    """Two states counting parity; reads any word, reduced or not."""
    edges = [(q, x, 1 - q) for q in (0, 1) for x in alphabet.letters]
    return ReducedDfa(alphabet, 2, {0}, {0}, edges)


def random_machine(rng, alphabet, states):
    edges = [
        (q, x, int(rng.integers(states)))
        for q in range(states)
        for x in alphabet.letters
        if rng.random() < 0.55
    ]
    accept = {q for q in range(states) if rng.random() < 0.5}
    return ReducedDfa(alphabet, states, {0}, accept, edges)


def accepted_counts(d, alphabet, max_length):
    return [sum(1 for w in iter_sphere(alphabet, k) if d.accepts(w)) for k in range(max_length + 1)]


class AcceptsTests(SimpleTestCase):
    def test_even_length_machine(self):
        evens = machines.restrict_to_reduced(even_length_machine())
        self.assertTrue(evens.accepts(word("ab")))
        self.assertFalse(evens.accepts(word("a")))
        self.assertTrue(word("1") in evens)

    def test_cone_membership_by_prefix(self):
        c = machines.cone(word("ab"))
        self.assertTrue(c.accepts(word("abA")))
        self.assertTrue(c.accepts(word("ab")))
        self.assertFalse(c.accepts(word("a")))
        self.assertFalse(c.accepts(word("ba")))

    def test_cone_of_identity(self):
        with self.assertRaises(InputError):
            machines.cone(Word.identity(F2))

    def test_alphabet_mismatch(self):
        with self.assertRaises(InputError):
            machines.cone(word("a")).accepts(word("a", Alphabet(3)))


class NormalizationTests(SimpleTestCase):
    def test_even_length_machine_normalizes_to_at_most_nine_states(self):
        evens = machines.restrict_to_reduced(even_length_machine())
        self.assertLessEqual(evens.state_count, 9)
        self.assertTrue(machines.is_reduced_form(evens))
        self.assertEqual(accepted_counts(evens, F2, 6), [1, 0, 12, 0, 108, 0, 972])

    def test_machine_reading_cancelling_pairs_is_rejected(self):
        with self.assertRaises(InputError):
            machines.normalize_reduced_form(even_length_machine())

    def test_normalization_is_idempotent(self):
        evens = machines.restrict_to_reduced(even_length_machine())
        again = machines.normalize_reduced_form(evens)
        self.assertEqual(again.state_count, evens.state_count)
        self.assertTrue(machines.equivalent(again, evens))

    def test_single_loop_machine_is_split(self):
        powers = ReducedDfa(F2, 1, {0}, {0}, [(0, 1, 0)])
        self.assertFalse(machines.is_reduced_form(powers))
        normalized = machines.normalize_reduced_form(powers)
        self.assertTrue(machines.is_reduced_form(normalized))
        self.assertTrue(normalized.contains_identity)
        self.assertEqual(machines.path_counts(normalized, 5), [1, 1, 1, 1, 1, 1])
        self.assertEqual(machines.measure_regular(normalized), rf("t/(1-t)"))

    def test_multiple_initial_states(self):
        d = ReducedDfa(F2, 3, {0, 1}, {2}, [(0, 1, 2), (1, 2, 2)])
        normalized = machines.normalize_reduced_form(d)
        self.assertEqual(len(normalized.initial), 1)
        self.assertTrue(normalized.accepts(word("a")))
        self.assertTrue(normalized.accepts(word("b")))
        self.assertEqual(machines.path_counts(normalized, 2), [0, 2, 0])


class BooleanOperationTests(SimpleTestCase):
    def setUp(self):
        self.evens = machines.restrict_to_reduced(even_length_machine())
        self.odds = machines.difference(machines.full_group(F2), self.evens)

    def test_union_with_empty(self):
        self.assertTrue(machines.equivalent(machines.union(self.evens, machines.empty(F2)), self.evens))

    def test_evens_and_odds_are_disjoint(self):
        both = machines.intersection(self.evens, self.odds)
        self.assertTrue(machines.equivalent(both, machines.empty(F2)))
        self.assertTrue(machines.measure_regular(both).is_zero)

    def test_full_group_minus_evens(self):
        counts = machines.path_counts(self.odds, 3)
        self.assertEqual(counts, [0, 4, 0, 36])

    def test_operations_agree_with_membership(self):
        rng = np.random.default_rng(7)
        words = [w for k in range(5) for w in iter_sphere(F2, k)]
        for _ in range(6):
            d1 = random_machine(rng, F2, 3)
            d2 = random_machine(rng, F2, 3)
            union = machines.union(d1, d2)
            meet = machines.intersection(d1, d2)
            minus = machines.difference(d1, d2)
            for w in words:
                a, b = d1.accepts(w), d2.accepts(w)
                self.assertEqual(union.accepts(w), a or b)
                self.assertEqual(meet.accepts(w), a and b)
                self.assertEqual(minus.accepts(w), a and not b)


class ConstructionTests(SimpleTestCase):
    def test_cone_counts(self):
        self.assertEqual(machines.path_counts(machines.cone(word("a")), 6), [0, 1, 3, 9, 27, 81, 243])

    def test_prefix_closure_of_singleton(self):
        closure = machines.prefix_closure(machines.from_words([word("ab")], F2))
        expected = machines.from_words([word("a"), word("ab")], F2)
        self.assertTrue(machines.equivalent(closure, expected))

    def test_prefix_closure_of_cone_contains_vertex_prefixes(self):
        closure = machines.prefix_closure(machines.cone(word("ab")))
        self.assertTrue(closure.accepts(word("a")))
        self.assertTrue(closure.accepts(word("abb")))
        self.assertFalse(closure.accepts(word("b")))

    def test_prefix_closure_of_full_group(self):
        full = machines.full_group(F2)
        self.assertTrue(machines.equivalent(machines.prefix_closure(full), full))

    def test_inverse_set(self):
        ends_in_a_inverse = machines.inverse_set(machines.cone(word("a")))
        self.assertTrue(ends_in_a_inverse.accepts(word("bA")))
        self.assertFalse(ends_in_a_inverse.accepts(word("ab")))
        self.assertEqual(machines.measure_regular(ends_in_a_inverse), rf("t/(1-3*t)"))

    def test_from_words(self):
        finite = machines.from_words([word("1"), word("ab"), word("Ba"), word("ab")], F2)
        self.assertTrue(finite.contains_identity)
        self.assertEqual(machines.path_counts(finite, 3), [1, 0, 2, 0])

    def test_json_round_trip(self):
        c = machines.cone(word("aB"))
        self.assertEqual(ReducedDfa.from_json(c.to_json()), c)

    def test_malformed_json(self):
        with self.assertRaises(InputError):
            ReducedDfa.from_json({"rank": 2, "states": 2})
        with self.assertRaises(InputError):
            ReducedDfa.from_json({"rank": 2, "states": 2, "initial": [0], "edges": [[0, "ab", 1]]})

    def test_nondeterministic_edges_rejected(self):
        with self.assertRaises(InputError):
            ReducedDfa(F2, 3, {0}, {1}, [(0, 1, 1), (0, 1, 2)])


class MeasureTests(SimpleTestCase):
    def test_even_length_measure(self):
        evens = machines.restrict_to_reduced(even_length_machine())
        mu_star = machines.measure_regular(evens)
        self.assertEqual(mu_star, rf("12*t^2/(1-9*t^2)"))
        self.assertEqual(mu_star + 1, rf("(1+3*t^2)/(1-9*t^2)"))

    def test_two_step_paths(self):
        evens = machines.restrict_to_reduced(even_length_machine())
        a = machines.adjacency(evens)
        squared = a.dot(a)
        total = sum(squared[i, j] for i in evens.initial for j in evens.accept)
        self.assertEqual(total, 12)

    def test_adjacency_of_trivial_machine(self):
        self.assertEqual(machines.adjacency(machines.empty(F2)).tolist(), [[0]])

    def test_cone_measure(self):
        self.assertEqual(machines.measure_regular(machines.cone(word("a"))), rf("t/(1-3*t)"))
        self.assertEqual(machines.measure_regular(machines.cone(word("ab"))), rf("t^2/(1-3*t)"))

    def test_full_group_measure(self):
        self.assertEqual(machines.measure_regular(machines.full_group(F2)), rf("4*t/(1-3*t)"))

    def test_random_machines_match_enumeration(self):
        rng = np.random.default_rng(2024)
        for trial in range(20):
            alphabet = F2 if trial % 4 else Alphabet(3)
            raw = random_machine(rng, alphabet, 2 + trial % 3)
            d = machines.restrict_to_reduced(raw)
            max_length = 6 if alphabet.rank == 2 else 4
            brute = accepted_counts(raw, alphabet, max_length)
            self.assertEqual(machines.path_counts(d, max_length), brute)
            series = machines.measure_regular(d).series_coefficients(max_length)
            self.assertEqual(series[1:], brute[1:])
            self.assertEqual(series[0], 0)
            value = machines.measure_regular(d).evaluate(Fraction(1, alphabet.size))
            if d.accept:
                self.assertGreater(value, 0)
            else:
                self.assertEqual(value, 0)
