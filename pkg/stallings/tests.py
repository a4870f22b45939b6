import math
import re
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from automata.machines import measure_regular
from core.exact import CertifiedInterval, RationalFunction, poly_coefficients
from core.exceptions import InputError, ResourceError
from core.words import Alphabet, Word, iter_sphere
from stallings import graphs

F2 = Alphabet(2)


def rf(text):
    return RationalFunction.parse(text)


def words(*texts):
    return [Word.parse(text, F2) for text in texts]


def subgroup(*texts):
    return graphs.build_subgroup_graph(words(*texts))


def z3_kernel():
    """Words whose exponent sum in a is divisible by 3."""
    return graphs.from_permutations(F2, [[1, 2, 0], [0, 1, 2]])


# Membership tests that do not go through subgroup graphs
PREDICATES = {
    ("a",): lambda s: re.fullmatch(r"a+|A+", s) is not None,
    ("ab",): lambda s: re.fullmatch(r"(ab)+|(BA)+", s) is not None,
    ("abA",): lambda s: re.fullmatch(r"ab+A|aB+A", s) is not None,
    ("aa", "ab", "ba"): lambda s: len(s) % 2 == 0,
    ("aa", "bb", "ab"): lambda s: len(s) % 2 == 0,
}


class BuildTests(SimpleTestCase):
    def test_cyclic_subgroup(self):
        g = subgroup("a")
        self.assertEqual(g.vertex_count, 1)
        self.assertEqual(g.edges, ((0, 1, 0),))

    def test_conjugate_folds_to_stem_and_loop(self):
        g = subgroup("abA")
        self.assertEqual(g.vertex_count, 2)
        self.assertEqual(g.edges, ((0, 1, 1), (1, 2, 1)))

    def test_generating_sets_of_one_subgroup_give_one_graph(self):
        expected = subgroup("aa", "ab", "ba")
        self.assertEqual(expected.vertex_count, 2)
        self.assertEqual(subgroup("aa", "bb", "ab"), expected)
        self.assertEqual(subgroup("bA", "aa", "ab"), expected)
        self.assertEqual(subgroup("ba", "aa", "ab"), expected)

    def test_redundant_generators(self):
        self.assertEqual(subgroup("abAB", "ab"), subgroup("ab", "ba"))

    def test_hanging_trees_are_pruned(self):
        self.assertEqual(graphs._prune({(0, 1, 1), (1, 2, 2)}, 0), set())
        self.assertEqual(graphs._prune({(0, 1, 0), (0, 2, 1)}, 0), {(0, 1, 0)})
        self.assertEqual(graphs._prune({(0, 1, 1), (1, 2, 1)}, 0), {(0, 1, 1), (1, 2, 1)})

    def test_identity_generators_are_dropped(self):
        self.assertEqual(subgroup("a", "1", "aA"), subgroup("a"))

    def test_trivial_subgroup(self):
        g = graphs.build_subgroup_graph([], F2)
        self.assertEqual((g.vertex_count, g.edges), (1, ()))
        self.assertTrue(graphs.measure_graph(g).is_zero)
        with self.assertRaises(InputError):
            graphs.build_subgroup_graph([])

    def test_random_products_of_generators_are_members(self):
        rng = np.random.default_rng(11)
        gens = words("aab", "bAb", "abAB")
        g = graphs.build_subgroup_graph(gens)
        for _ in range(200):
            w = Word.identity(F2)
            for _ in range(int(rng.integers(1, 7))):
                h = gens[int(rng.integers(len(gens)))]
                w = w * (h if rng.random() < 0.5 else ~h)
            self.assertTrue(graphs.membership(g, w))


class MembershipTests(SimpleTestCase):
    def test_cyclic(self):
        g = subgroup("a")
        self.assertTrue(graphs.membership(g, Word.parse("aaa", F2)))
        self.assertFalse(graphs.membership(g, Word.parse("b", F2)))
        self.assertTrue(Word.identity(F2) in g)

    def test_even_subgroup(self):
        g = subgroup("aa", "ab", "ba")
        self.assertTrue(graphs.membership(g, Word.parse("ab", F2)))
        self.assertFalse(graphs.membership(g, Word.parse("aba", F2)))

    def test_finite_index_kernel_matches_exponent_sum(self):
        g = z3_kernel()
        for k in range(6):
            for w in iter_sphere(F2, k):
                exponent = sum(1 if x == 1 else -1 for x in w.letters if abs(x) == 1)
                self.assertEqual(graphs.membership(g, w), exponent % 3 == 0)


class IndexTests(SimpleTestCase):
    def test_index(self):
        self.assertEqual(graphs.index(subgroup("aa", "ab", "ba")), 2)
        self.assertEqual(graphs.index(subgroup("a")), math.inf)
        self.assertEqual(graphs.index(subgroup("a", "b")), 1)
        self.assertEqual(graphs.index(z3_kernel()), 3)

    def test_permutations_must_act_transitively(self):
        with self.assertRaises(InputError):
            graphs.from_permutations(F2, [[0, 1], [0, 1]])
        with self.assertRaises(InputError):
            graphs.from_permutations(F2, [[0, 0], [1, 0]])


class ConsolidationTests(SimpleTestCase):
    def test_conjugate(self):
        cg = graphs.consolidate(subgroup("abA"))
        self.assertEqual(cg.vertices, (0, 1))
        self.assertEqual([str(e.label) for e in cg.edges], ["a", "A", "b", "B"])
        self.assertEqual([(e.origin, e.terminus) for e in cg.edges], [(0, 1), (1, 0), (1, 1), (1, 1)])

    def test_cyclic(self):
        cg = graphs.consolidate(subgroup("a"))
        self.assertEqual(cg.vertices, (0,))
        self.assertEqual([str(e.label) for e in cg.edges], ["a", "A"])
        self.assertEqual(cg.reverse, (1, 0))

    def test_even_subgroup_has_nothing_to_collapse(self):
        g = subgroup("aa", "ab", "ba")
        cg = graphs.consolidate(g)
        self.assertEqual(len(cg.vertices), 2)
        self.assertEqual(len(cg.edges), 8)
        self.assertTrue(all(len(e.label) == 1 for e in cg.edges))

    def test_degree_two_basepoint(self):
        cg = graphs.consolidate(subgroup("ab"))
        self.assertEqual(cg.vertices, (0,))
        self.assertEqual([str(e.label) for e in cg.edges], ["ab", "BA"])

    def test_label_lengths_cover_every_edge(self):
        for gens in (("abA",), ("aab", "bAb"), ("abba", "baab", "aBaB")):
            g = subgroup(*gens)
            cg = graphs.consolidate(g)
            self.assertEqual(sum(len(e.label) for e in cg.edges), 2 * len(g.edges))
            for i, e in enumerate(cg.edges):
                self.assertEqual(cg.edges[cg.reverse[i]].label, ~e.label)


class TransferAutomatonTests(SimpleTestCase):
    def test_state_counts(self):
        self.assertEqual(graphs.transfer_automaton(graphs.consolidate(subgroup("abA"))).state_count, 5)
        self.assertEqual(graphs.transfer_automaton(graphs.consolidate(subgroup("a"))).state_count, 3)
        self.assertEqual(
            graphs.transfer_automaton(graphs.consolidate(subgroup("aa", "ab", "ba"))).state_count, 9
        )

    def test_no_transition_back_along_an_edge(self):
        automaton = graphs.transfer_automaton(graphs.consolidate(subgroup("a")))
        self.assertEqual(sorted(automaton.transitions), [(0, 1, 1), (0, 2, 1), (1, 1, 1), (2, 2, 1)])
        self.assertEqual(automaton.accept, frozenset({1, 2}))

    def test_initial_state_has_no_entering_transitions(self):
        automaton = graphs.transfer_automaton(graphs.consolidate(subgroup("aab", "bAb")))
        self.assertTrue(all(target != 0 for _, target, _ in automaton.transitions))
        self.assertNotIn(0, automaton.accept)


class MeasureSubgroupTests(SimpleTestCase):
    def test_conjugates_of_cyclic_subgroups(self):
        self.assertEqual(graphs.measure_subgroup(words("b")), rf("2*t/(1-t)"))
        self.assertEqual(graphs.measure_subgroup(words("abA")), rf("2*t^3/(1-t)"))
        self.assertEqual(graphs.measure_subgroup(words("abaaaBA")), rf("2*t^7/(1-t^3)"))

    def test_even_subgroup(self):
        self.assertEqual(graphs.measure_subgroup(words("aa", "ab", "ba")), rf("12*t^2/(1-9*t^2)"))

    def test_series_match_brute_force_counts(self):
        for gens, predicate in PREDICATES.items():
            series = graphs.measure_subgroup(words(*gens)).series_coefficients(8)
            for k in range(1, 9):
                brute = sum(1 for w in iter_sphere(F2, k) if predicate(str(w)))
                self.assertEqual(series[k], brute, f"{gens} at length {k}")

    def test_generating_set_invariance(self):
        self.assertEqual(
            graphs.measure_subgroup(words("aa", "bb", "ab")),
            graphs.measure_subgroup(words("bA", "ba", "aa")),
        )

    def test_matches_automaton_of_the_graph(self):
        for gens in (("abA",), ("aab", "bAb"), ("aa", "ab", "ba")):
            g = subgroup(*gens)
            d = graphs.to_automaton(g)
            self.assertTrue(d.contains_identity)
            self.assertEqual(measure_regular(d), graphs.measure_graph(g))

    def test_finite_index_kernel(self):
        series = graphs.measure_graph(z3_kernel()).series_coefficients(6)
        for k in range(1, 7):
            brute = sum(1 for w in iter_sphere(F2, k) if graphs.membership(z3_kernel(), w))
            self.assertEqual(series[k], brute)


class SchreierTests(SimpleTestCase):
    def test_charpoly(self):
        self.assertEqual(poly_coefficients(graphs.schreier_charpoly(subgroup("aa", "ab", "ba"))), [-16, 0, 1])
        self.assertEqual(poly_coefficients(graphs.schreier_charpoly(subgroup("a", "b"))), [-4, 1])

    def test_return_series(self):
        self.assertEqual(graphs.return_series(subgroup("aa", "ab", "ba")), rf("1/(1-16*t^2)"))
        self.assertEqual(graphs.return_series(subgroup("a", "b")), rf("1/(1-4*t)"))

    def test_exact_spectral_radius_of_finite_graphs(self):
        for g in (subgroup("aa", "ab", "ba"), subgroup("a", "b"), z3_kernel()):
            nu = graphs.schreier_spectral_radius(g)
            self.assertFalse(nu.approximate)
            self.assertEqual(nu.value, CertifiedInterval.exact(1))

    def test_infinite_index_needs_a_radius(self):
        with self.assertRaises(InputError):
            graphs.schreier_spectral_radius(subgroup("a"))
        with self.assertRaises(InputError):
            graphs.schreier_spectral_radius(subgroup("a"), radius=0)

    def test_estimate_is_monotone_in_radius(self):
        g = subgroup("a")
        estimates = [graphs.schreier_spectral_radius(g, radius=r) for r in (2, 4, 6)]
        for nu in estimates:
            self.assertTrue(nu.approximate)
            self.assertLess(nu.value.lower, 1)
            self.assertEqual(nu.value.upper, 1)
        self.assertGreater(estimates[0].value.lower, Fraction(1, 2))
        for smaller, larger in zip(estimates, estimates[1:]):
            self.assertGreaterEqual(larger.value.lower + Fraction(1, 10**12), smaller.value.lower)

    def test_ball_cap(self):
        with self.assertRaises(ResourceError):
            graphs.schreier_spectral_radius(subgroup("a"), radius=6, ball_cap=10)
