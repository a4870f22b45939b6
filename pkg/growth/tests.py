import json
import math
import os
import tempfile
from fractions import Fraction
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from automata import machines
from core.exact import CertifiedInterval, RationalFunction
from core.exceptions import InputError, InvalidMeasureError
from core.words import Alphabet, Word, cyclic_reduction
from growth import analysis, series, transforms
from growth.series import COUNTS, FREQUENCIES, MONOID, PATHS, RETURNS, GrowthSeries
from measures.measure import to_measure_of_s
from oracle.enumeration import count_reduced, exponent_sum_predicate, lattice_return_counts
from stallings import graphs

F2 = Alphabet(2)
F3 = Alphabet(3)

EVEN_SUBGROUP = {"type": "subgroup", "rank": 2, "generators": ["aa", "ab", "ba"]}


def rf(text, var="t"):
    return RationalFunction.parse(text, var)


def subgroup(*texts, alphabet=F2):
    return graphs.build_subgroup_graph([Word.parse(text, alphabet) for text in texts])


def subgroup_counts(*texts):
    return series.counts_series(graphs.measure_subgroup([Word.parse(t, F2) for t in texts]), True)


def subgroup_mu(*texts, contains_identity=True):
    mustar = graphs.measure_subgroup([Word.parse(t, F2) for t in texts])
    return to_measure_of_s(mustar, F2, contains_identity)


def cone_mu(text, alphabet=F2):
    return to_measure_of_s(machines.measure_regular(machines.cone(Word.parse(text, alphabet))), alphabet, False)


def z3_kernel():
    return graphs.from_permutations(F2, [[1, 2, 0], [0, 1, 2]])


def exact(text, semantics):
    return GrowthSeries.exact(rf(text), semantics)


def codiagonal_monoid_series(order):
    """n*_2k = C(2k, k) 4^k: monoid words with exponent sum 0 in F2."""
    return GrowthSeries.truncated(
        [math.comb(k, k // 2) * 2**k if k % 2 == 0 else 0 for k in range(order + 1)], MONOID
    )


def lattice_returns(order):
    return GrowthSeries.truncated(
        [Fraction(b, 4**k) for k, b in enumerate(lattice_return_counts(order))], RETURNS
    )


class GrowthSeriesTests(SimpleTestCase):
    def test_exact_and_truncated_are_exclusive(self):
        with self.assertRaises(InputError):
            GrowthSeries(COUNTS)
        with self.assertRaises(InputError):
            GrowthSeries(COUNTS, function=rf("1"), coefficients=(1,))
        with self.assertRaises(InputError):
            GrowthSeries.truncated([], COUNTS)

    def test_unknown_semantics(self):
        with self.assertRaises(InputError):
            GrowthSeries.exact(rf("1"), "q")

    def test_truncated_coefficients_past_order(self):
        s = GrowthSeries.truncated([1, 0, 12], COUNTS)
        self.assertEqual(s.order, 2)
        self.assertEqual(s.coefficients_upto(1), [1, 0])
        with self.assertRaises(InputError):
            s.coefficients_upto(3)

    def test_truncate_exact(self):
        s = exact("1/(1-3*t)", COUNTS).truncate(3)
        self.assertFalse(s.is_exact)
        self.assertEqual(list(s.coefficients), [1, 3, 9, 27])

    def test_frequencies_of_even_subgroup(self):
        f = series.frequencies(subgroup_counts("aa", "ab", "ba"), F2)
        self.assertEqual(f.semantics, FREQUENCIES)
        self.assertEqual(f.function, rf("1/(1-t^2)"))

    def test_frequencies_of_full_group(self):
        f = series.frequencies(exact("(1+t)/(1-3*t)", COUNTS), F2)
        self.assertEqual(f.function, rf("1/(1-t)"))

    def test_frequencies_of_a_cone(self):
        f = series.frequencies(GrowthSeries.truncated([0, 1, 3, 9], COUNTS), F2)
        self.assertEqual(list(f.coefficients), [0, Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)])

    def test_counts_from_frequencies_inverts_frequencies(self):
        n = subgroup_counts("abA")
        self.assertEqual(series.counts_from_frequencies(series.frequencies(n, F2), F2).function, n.function)

    def test_frequencies_need_counts(self):
        with self.assertRaises(InputError):
            series.frequencies(exact("1/(1-t)", MONOID), F2)

    def test_union_and_product(self):
        a = exact("t/(1-t)", COUNTS)
        b = exact("t^2", COUNTS)
        self.assertEqual(series.union_disjoint(a, b).function, rf("t/(1-t) + t^2"))
        self.assertEqual(series.concat_unambiguous(a, b).function, rf("t^3/(1-t)"))

    def test_truncated_product_uses_the_shortest_order(self):
        a = GrowthSeries.truncated([1, 1, 1, 1, 1], COUNTS)
        b = GrowthSeries.truncated([1, 2, 3], COUNTS)
        self.assertEqual(list(series.concat_unambiguous(a, b).coefficients), [1, 3, 6])

    def test_substitute_square(self):
        self.assertEqual(series.substitute_square(exact("1/(1-3*t)", COUNTS)).function, rf("1/(1-3*t^2)"))
        spread = series.substitute_square(GrowthSeries.truncated([1, 2], COUNTS))
        self.assertEqual(list(spread.coefficients), [1, 0, 2])

    def test_conjugates_of_powers_of_a(self):
        # words u a^k u^-1, k != 0, u ending in b or B
        n = series.conjugacy_series(exact("2*t/(1-t)", COUNTS), exact("2*t/(1-3*t)", COUNTS))

        def conjugate_of_power(w):
            core = cyclic_reduction(w).letters
            return bool(core) and all(abs(x) == 1 for x in core)

        self.assertEqual(n.function.series_coefficients(8), count_reduced(conjugate_of_power, F2, 8))
        # mu1 = ((2m - 1)/2m) N(1/(2m - 1))
        report = analysis.classify(to_measure_of_s(n.function, F2, False))
        self.assertEqual(report.classification, analysis.SPARSE)
        self.assertEqual(report.mu1, 1)

    def test_csv_round_trip(self):
        n = GrowthSeries.truncated([1, 0, 12, 0, 108], COUNTS)
        stream = StringIO()
        series.write_series_csv(stream, n, series.frequencies(n, F2))
        self.assertEqual(stream.getvalue().splitlines()[:3], ["k,n_k,f_k_num,f_k_den", "0,1,1,1", "1,0,0,1"])
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "even.csv")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(stream.getvalue())
            table = series.read_series_csv(path)
        self.assertEqual(table[COUNTS], n)
        self.assertEqual(list(table[FREQUENCIES].coefficients), [1, 0, 1, 0, 1])

    def test_csv_errors(self):
        cases = {
            "gap.csv": "k,n_k\n0,1\n2,0\n",
            "column.csv": "k,m_k\n0,1\n",
            "zero.csv": "k,f_k_num,f_k_den\n0,1,0\n",
            "short.csv": "k,n_k\n",
            "number.csv": "k,n_k\n0,x\n",
        }
        with tempfile.TemporaryDirectory() as directory:
            for name, text in cases.items():
                path = os.path.join(directory, name)
                with open(path, "w", encoding="utf-8") as handle:
                    handle.write(text)
                with self.subTest(name), self.assertRaises(InputError):
                    series.read_series_csv(path)

    def test_frequencies_from_table_needs_rank_for_counts(self):
        table = {COUNTS: GrowthSeries.truncated([1, 4], COUNTS)}
        with self.assertRaises(InputError):
            series.frequencies_from_table(table)
        self.assertEqual(list(series.frequencies_from_table(table, F2).coefficients), [1, 1])


class GodsilTransformTests(SimpleTestCase):
    def test_forward_of_even_subgroup_walks(self):
        n = transforms.godsil_transform(exact("1/(1-16*t^2)", MONOID), F2)
        self.assertEqual(n.semantics, COUNTS)
        self.assertEqual(n.function, rf("(1+3*t^2)/(1-9*t^2)"))

    def test_forward_of_trivial_walks(self):
        n = transforms.godsil_transform(exact("1", PATHS), F2)
        self.assertEqual(n.function, rf("(1-t^2)/(1+3*t^2)"))

    def test_forward_of_return_series_gives_subgroup_counts(self):
        g = subgroup("aa", "ab", "ba")
        walks = GrowthSeries.exact(graphs.return_series(g), PATHS)
        self.assertEqual(transforms.godsil_transform(walks, F2).function, subgroup_counts("aa", "ab", "ba").function)

    def test_truncated_forward_matches_exact(self):
        b = exact("1/(1-16*t^2)", MONOID)
        truncated = transforms.godsil_transform(b.truncate(12), F2)
        self.assertEqual(list(truncated.coefficients), rf("(1+3*t^2)/(1-9*t^2)").series_coefficients(12))

    def test_codiagonal_counts_match_enumeration(self):
        n = transforms.godsil_transform(codiagonal_monoid_series(12), F2)
        self.assertEqual(list(n.coefficients), count_reduced(exponent_sum_predicate(F2), F2, 12))

    def test_inverse_of_exact_is_truncated(self):
        b = transforms.godsil_transform(exact("(1+3*t^2)/(1-9*t^2)", COUNTS), F2, transforms.INVERSE, order=10)
        self.assertFalse(b.is_exact)
        self.assertEqual(b.semantics, PATHS)
        self.assertEqual(list(b.coefficients), rf("1/(1-16*t^2)").series_coefficients(10))

    def test_forward_after_inverse_is_identity(self):
        n = transforms.godsil_transform(codiagonal_monoid_series(24), F2)
        walks = transforms.godsil_transform(n, F2, transforms.INVERSE)
        self.assertEqual(list(walks.coefficients), list(codiagonal_monoid_series(24).coefficients))
        self.assertEqual(transforms.godsil_transform(walks, F2).coefficients, n.coefficients)

    def test_rank_three(self):
        # full group: a single vertex with 6 loops, B = 1/(1 - 6t)
        n = transforms.godsil_transform(exact("1/(1-6*t)", PATHS), F3)
        self.assertEqual(n.function, rf("(1+t)/(1-5*t)"))

    def test_wrong_semantics(self):
        with self.assertRaises(InputError):
            transforms.godsil_transform(exact("1", COUNTS), F2)
        with self.assertRaises(InputError):
            transforms.godsil_transform(exact("1", PATHS), F2, transforms.INVERSE)
        with self.assertRaises(InputError):
            transforms.godsil_transform(exact("1", PATHS), F2, "sideways")

    def test_order_zero_series(self):
        with self.assertRaises(InputError):
            transforms.godsil_transform(GrowthSeries.truncated([1], COUNTS), F2, transforms.INVERSE)


class ReturnFrequencyTests(SimpleTestCase):
    def test_two_element_quotient(self):
        f = transforms.return_frequency_transform(exact("1/(1-t^2)", RETURNS), F2)
        self.assertEqual(f.semantics, FREQUENCIES)
        self.assertEqual(f.function, rf("1/(1-t^2)"))

    def test_monoid_series_from_returns(self):
        nstar = transforms.monoid_series_from_returns(lattice_returns(6), F2)
        self.assertEqual(list(nstar.coefficients), [1, 0, 4, 0, 36, 0, 400])

    def test_commutator_subgroup_is_intermediate(self):
        f = transforms.return_frequency_transform(lattice_returns(2000), F2)
        self.assertEqual(f.coefficients[:5], (1, 0, 0, 0, Fraction(2, 27)))
        # mu_s/s grows like log(1/s)/pi
        step = analysis.measure_series(f, 0.01) - analysis.measure_series(f, 0.02)
        self.assertAlmostEqual(step, math.log(2) / math.pi, delta=0.2 * math.log(2) / math.pi)
        report = analysis.classify_truncated(f)
        self.assertEqual(report.classification, analysis.INTERMEDIATE)
        self.assertFalse(report.certified)


class QuenellTests(SimpleTestCase):
    def test_two_element_quotient(self):
        nstar = transforms.quenell(rf("x^2 - 16", "x"), 2)
        self.assertEqual(nstar.semantics, MONOID)
        self.assertEqual(nstar.function, rf("1/(1-16*t^2)"))

    def test_coefficient_list(self):
        self.assertEqual(transforms.quenell([-4, 1], 1).function, rf("1/(1-4*t)"))

    def test_cyclic_kernel_pipeline(self):
        g = z3_kernel()
        nstar = transforms.quenell(graphs.schreier_charpoly(g), 3)
        n = transforms.godsil_transform(nstar, F2)
        self.assertEqual(n.function, series.counts_series(graphs.measure_graph(g), True).function)

    def test_index_must_match_degree(self):
        with self.assertRaises(InputError):
            transforms.quenell(rf("x^2 - 16", "x"), 3)

    def test_rejects_non_polynomial(self):
        with self.assertRaises(InputError):
            transforms.quenell(rf("1/(x - 1)", "x"), 1)


class ClassifyTests(SimpleTestCase):
    def test_even_subgroup(self):
        report = analysis.classify(subgroup_mu("aa", "ab", "ba"))
        self.assertEqual(report.classification, analysis.THICK)
        self.assertEqual(report.mu0, Fraction(1, 2))
        self.assertEqual(report.mu1, analysis.INFINITY)
        self.assertEqual(report.gamma, CertifiedInterval.exact(1))
        self.assertFalse(report.negligible)
        self.assertEqual(report.density, 1)

    def test_conjugate_subgroup_without_identity(self):
        report = analysis.classify(subgroup_mu("abA", contains_identity=False))
        self.assertEqual(report.classification, analysis.SPARSE)
        self.assertEqual(report.mu0, 0)
        self.assertEqual(report.mu1, Fraction(1, 12))
        self.assertTrue(report.negligible)
        self.assertEqual(report.gamma, CertifiedInterval.exact(Fraction(1, 3)))
        self.assertEqual(report.density, 0)

    def test_cones(self):
        for text, alphabet in (("a", F2), ("ab", F2), ("aBA", F2), ("abAB", F2), ("c", F3), ("aC", F3), ("abcA", F3)):
            with self.subTest(text, rank=alphabet.rank):
                report = analysis.classify(cone_mu(text, alphabet))
                self.assertEqual(report.classification, analysis.THICK)
                self.assertEqual(report.mu0, Fraction(1, alphabet.sphere_size(len(text))))

    def test_finite_index_kernels(self):
        for index in (1, 2, 3, 4):
            cycle = [(v + 1) % index for v in range(index)]
            g = graphs.from_permutations(F2, [cycle, list(range(index))])
            with self.subTest(index=index):
                report = analysis.classify(to_measure_of_s(graphs.measure_graph(g), F2, True))
                self.assertEqual(report.classification, analysis.THICK)
                self.assertEqual(report.mu0, Fraction(1, index))

    def test_full_group(self):
        report = analysis.classify(rf("1", "s"))
        self.assertEqual(report.mu0, 1)
        self.assertEqual(report.density, 1)

    def test_rational_measures_are_never_intermediate(self):
        for mu in (subgroup_mu("a"), subgroup_mu("ab", "ba"), cone_mu("ab"), subgroup_mu("abA", "b")):
            with self.subTest(str(mu)):
                self.assertIn(analysis.classify(mu).classification, (analysis.THICK, analysis.SPARSE))

    def test_slow_growth_implies_negligible(self):
        for generators in (("a",), ("abA",), ("ab",), ("aa", "bb"), ("aab", "bA")):
            with self.subTest(generators=generators):
                report = analysis.classify(subgroup_mu(*generators))
                self.assertLess(report.gamma.upper, 1)
                self.assertTrue(report.negligible)

    def test_pole_inside_unit_interval(self):
        with self.assertRaises(InvalidMeasureError):
            analysis.classify(rf("1/(2*s - 1)", "s"))

    def test_values_outside_unit_interval(self):
        with self.assertRaises(InvalidMeasureError):
            analysis.classify(rf("2", "s"))

    def test_needs_a_function_of_s(self):
        with self.assertRaises(InputError):
            analysis.classify(rf("1/(2-t)"))

    def test_periodic_part(self):
        self.assertEqual(analysis.periodic_part(rf("1/(1-z^3)", "z")), [1, 0, 0])
        self.assertEqual(analysis.periodic_part(rf("(1+z)/(1-z^2)", "z")), [1])
        self.assertEqual(analysis.periodic_part(rf("1/(3-z)", "z")), [])

    def test_multiple_pole_on_the_circle(self):
        with self.assertRaises(InvalidMeasureError):
            analysis.periodic_part(rf("1/(1-z)^2", "z"))


class TruncatedClassifyTests(SimpleTestCase):
    def test_even_subgroup_is_thick(self):
        f = exact("1/(1-t^2)", FREQUENCIES).truncate(200)
        report = analysis.classify_truncated(f)
        self.assertEqual(report.classification, analysis.THICK)
        self.assertAlmostEqual(report.mu0, 0.5, delta=0.05)
        self.assertEqual(report.negligible, analysis.UNKNOWN)

    def test_cyclic_subgroup_is_sparse(self):
        f = series.frequencies(subgroup_counts("a"), F2).truncate(200)
        self.assertEqual(analysis.classify_truncated(f).classification, analysis.SPARSE)

    def test_too_short(self):
        with self.assertRaises(InputError):
            analysis.classify_truncated(exact("1/(1-t)", FREQUENCIES).truncate(30))

    def test_exact_series_rejected(self):
        with self.assertRaises(InputError):
            analysis.classify_truncated(exact("1/(1-t)", FREQUENCIES))


class CesaroTests(SimpleTestCase):
    def test_even_subgroup(self):
        estimate = analysis.cesaro_estimate(exact("1/(1-t^2)", FREQUENCIES), 9999)
        self.assertAlmostEqual(float(estimate), 0.5, delta=1e-4)

    def assertCesaroNear(self, f, mu0):
        self.assertLess(abs(float(analysis.cesaro_estimate(f, 10_000)) - float(mu0)), 1e-2)

    def test_thick_sets_approach_mu0(self):
        cases = [
            (series.frequencies(GrowthSeries.exact(rf("t^2/(1-3*t)"), COUNTS), F2), Fraction(1, 12)),
            (exact("1/(1-t)", FREQUENCIES), 1),
        ]
        for f, mu0 in cases:
            with self.subTest(str(f)):
                self.assertCesaroNear(f, mu0)

    def test_cones_approach_mu0(self):
        cones = [("a", F2), ("ab", F2), ("aBA", F2), ("abAB", F2), ("c", F3), ("aC", F3), ("cab", F3), ("abcA", F3)]
        for text, alphabet in cones:
            mustar = machines.measure_regular(machines.cone(Word.parse(text, alphabet)))
            f = series.frequencies(series.counts_series(mustar, False), alphabet)
            with self.subTest(text, rank=alphabet.rank):
                self.assertCesaroNear(f, Fraction(1, alphabet.sphere_size(len(text))))

    def test_finite_index_kernels_approach_mu0(self):
        for index in (1, 2, 3, 4):
            cycle = [(v + 1) % index for v in range(index)]
            g = graphs.from_permutations(F2, [cycle, list(range(index))])
            f = series.frequencies(series.counts_series(graphs.measure_graph(g), True), F2)
            with self.subTest(index=index):
                self.assertCesaroNear(f, Fraction(1, index))

    def test_negative_horizon(self):
        with self.assertRaises(InputError):
            analysis.cesaro_estimate(exact("1/(1-t)", FREQUENCIES), -1)


class CogrowthTests(SimpleTestCase):
    def test_even_subgroup_quotient_is_amenable(self):
        report = analysis.cogrowth(subgroup_counts("aa", "ab", "ba"), F2, normal=True)
        self.assertEqual(report.gamma, CertifiedInterval.exact(1))
        self.assertTrue(report.amenable)
        self.assertFalse(report.approximate)
        self.assertEqual(report.to_json()["amenable"], True)

    def test_finite_set(self):
        report = analysis.cogrowth(exact("t", COUNTS), F2)
        self.assertEqual(report.gamma, CertifiedInterval.exact(0))
        self.assertNotIn("amenable", report.to_json())

    def test_empty_set(self):
        self.assertTrue(analysis.cogrowth(exact("0", COUNTS), F2).empty)

    def test_cyclic_subgroup(self):
        report = analysis.cogrowth(subgroup_counts("a"), F2, normal=True)
        self.assertEqual(report.gamma, CertifiedInterval.exact(Fraction(1, 3)))
        self.assertFalse(report.amenable)

    def test_nested_sets_have_non_decreasing_gamma(self):
        chain = [subgroup_counts("aa"), subgroup_counts("a"), exact("(1+t)/(1-3*t)", COUNTS)]
        gammas = [analysis.cogrowth(n, F2).gamma for n in chain]
        for smaller, larger in zip(gammas, gammas[1:]):
            self.assertLessEqual(smaller.lower, larger.upper)

    def test_codiagonal_subgroup_estimate(self):
        n = transforms.godsil_transform(codiagonal_monoid_series(200), F2)
        report = analysis.cogrowth(n, F2)
        self.assertTrue(report.approximate)
        self.assertGreater(report.gamma, 0.97)
        self.assertLessEqual(report.gamma, 1.0)


class NegligibilityAndDensityTests(SimpleTestCase):
    def test_negligibility(self):
        self.assertTrue(analysis.negligibility_test(series.frequencies(subgroup_counts("a"), F2)))
        self.assertFalse(analysis.negligibility_test(exact("1/(1-t^2)", FREQUENCIES)))
        self.assertEqual(analysis.negligibility_test(exact("1/(1-t)", FREQUENCIES).truncate(5)), analysis.UNKNOWN)

    def test_weighted_mean_pole_orders(self):
        f = exact("1/(1-t)", FREQUENCIES)
        for n in (0, 1, 2, 3):
            with self.subTest(n=n):
                self.assertEqual(analysis.weighted_mean(f, n).pole_order, n)

    def test_weighted_mean_of_negligible_set(self):
        f = series.frequencies(subgroup_counts("a"), F2)
        self.assertEqual(analysis.weighted_mean(f, 2).pole_order, 0)

    def test_weighted_mean_errors(self):
        with self.assertRaises(InputError):
            analysis.weighted_mean(exact("1/(1-t)", FREQUENCIES), -1)
        with self.assertRaises(InputError):
            analysis.weighted_mean(exact("1/(1-t)", FREQUENCIES).truncate(5), 1)

    def test_exact_density(self):
        even = analysis.density_estimate(exact("1/(1-t^2)", FREQUENCIES))
        self.assertEqual((even.upper, even.lower), (1, 0))
        self.assertFalse(even.has_limit)
        full = analysis.density_estimate(exact("1/(1-t)", FREQUENCIES))
        self.assertTrue(full.has_limit)
        self.assertEqual(full.upper, 1)
        self.assertEqual(analysis.density_estimate(series.frequencies(subgroup_counts("a"), F2)).upper, 0)

    def test_truncated_density(self):
        estimate = analysis.density_estimate(exact("1/(1-t^2)", FREQUENCIES).truncate(63))
        self.assertTrue(estimate.heuristic)
        self.assertEqual(estimate.upper, 1)
        with self.assertRaises(InputError):
            analysis.density_estimate(exact("1/(1-t)", FREQUENCIES).truncate(20))

    def test_measure_series(self):
        f = exact("1/(1-t^2)", FREQUENCIES)
        self.assertEqual(analysis.measure_series(f, Fraction(1, 5)), Fraction(25, 9))
        self.assertAlmostEqual(analysis.measure_series(f.truncate(400), 0.2), 25 / 9, places=9)


class CommandTests(SimpleTestCase):
    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = directory.name

    def write_file(self, name, text):
        path = os.path.join(self.directory, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def run_command(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def test_series(self):
        path = self.write_file("even.json", json.dumps(EVEN_SUBGROUP))
        output = self.run_command("series", "subgroup", path, "--max-k", "4")
        self.assertEqual(
            output.splitlines(),
            ["k,n_k,f_k_num,f_k_den", "0,1,1,1", "1,0,0,1", "2,12,1,1", "3,0,0,1", "4,108,1,1"],
        )

    def test_classify(self):
        path = self.write_file("even.json", json.dumps(EVEN_SUBGROUP))
        result = json.loads(self.run_command("classify", path))
        self.assertEqual(result["type"], "subgroup")
        self.assertEqual(result["classification"], "Thick")
        self.assertEqual(result["mu0"], "1/2")
        self.assertEqual(result["mu1"], "infinity")
        self.assertEqual(result["gamma"], "1")
        self.assertTrue(result["certified"])

    def test_classify_csv_is_heuristic(self):
        stream = StringIO()
        series.write_series_csv(stream, exact("1/(1-t^2)", FREQUENCIES).truncate(200))
        path = self.write_file("even.csv", stream.getvalue())
        result = json.loads(self.run_command("classify", path))
        self.assertEqual(result["classification"], "Thick")
        self.assertFalse(result["certified"])

    def test_cogrowth(self):
        path = self.write_file("even.json", json.dumps(EVEN_SUBGROUP))
        result = json.loads(self.run_command("cogrowth", path, "--normal", "--format", "json"))
        self.assertEqual(result, {"gamma": "1", "approximate": False, "empty": False, "amenable": True})

    def test_cogrowth_csv_needs_rank(self):
        path = self.write_file("counts.csv", "k,n_k\n0,1\n1,0\n")
        with self.assertRaises(CommandError) as caught:
            self.run_command("cogrowth", path)
        self.assertEqual(caught.exception.returncode, 1)

    def test_cesaro(self):
        stream = StringIO()
        series.write_series_csv(stream, exact("1/(1-t^2)", FREQUENCIES).truncate(99))
        path = self.write_file("even.csv", stream.getvalue())
        result = json.loads(self.run_command("cesaro", path, "--n", "99", "--format", "json"))
        self.assertEqual(result["estimate"], "1/2")

    def test_transform_quenell(self):
        output = self.run_command("transform", "quenell", "x^2 - 16", "--index", "2")
        self.assertEqual(output.strip(), str(rf("1/(1-16*t^2)")))

    def test_transform_godsil_forward(self):
        output = self.run_command("transform", "godsil", "1/(1-16*t^2)", "--rank", "2")
        self.assertEqual(output.strip(), str(rf("(1+3*t^2)/(1-9*t^2)")))

    def test_transform_godsil_inverse_to_csv(self):
        output = self.run_command(
            "transform", "godsil", "(1+3*t^2)/(1-9*t^2)", "--rank", "2", "--direction", "inverse", "--max-k", "4"
        )
        self.assertEqual(output.splitlines(), ["k,b_k", "0,1", "1,0", "2,16", "3,0", "4,256"])

    def test_transform_needs_rank(self):
        with self.assertRaises(CommandError) as caught:
            self.run_command("transform", "godsil", "1/(1-16*t^2)")
        self.assertEqual(caught.exception.returncode, 1)
