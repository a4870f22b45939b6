from fractions import Fraction

from django.test import SimpleTestCase

from core import exact
from core.exact import CertifiedInterval, RatMatrix, RationalFunction
from core.exceptions import EvaluationError, ExactArithmeticError, InputError, SingularMatrixError
from core.utils import fraction_text, to_fraction
from core.words import (
    Alphabet,
    Word,
    cyclic_reduction,
    format_word,
    invert,
    iter_sphere,
    multiply,
    parse_word,
    reduce,
    sphere_size,
)

F2 = Alphabet(2)
T = RationalFunction.variable()


def rf(text, var="t"):
    return RationalFunction.parse(text, var)


class WordTests(SimpleTestCase):
    def test_reduce_cancels_adjacent_pairs(self):
        self.assertTrue(reduce([1, -1], F2).is_identity)
        self.assertEqual(reduce([1, 2, -2, 1], F2).letters, (1, 1))
        self.assertEqual(reduce([1, 2, -1], F2).letters, (1, 2, -1))

    def test_reduce_is_idempotent(self):
        w = reduce([1, 2, -2, -1, 2, 2, -1], F2)
        self.assertEqual(reduce(w.letters, F2), w)

    def test_letter_out_of_range(self):
        with self.assertRaises(InputError):
            reduce([3], F2)
        with self.assertRaises(InputError):
            Word.parse("c", F2)

    def test_multiply(self):
        self.assertEqual(str(multiply(Word.parse("ab", F2), Word.parse("Ba", F2))), "aa")
        w = Word.parse("abA", F2)
        self.assertEqual(w * Word.identity(F2), w)
        self.assertEqual(str(Word.parse("abA", F2) * Word.parse("aB", F2)), "a")

    def test_multiply_alphabet_mismatch(self):
        with self.assertRaises(InputError):
            multiply(Word.parse("a", F2), Word.parse("a", Alphabet(3)))

    def test_invert(self):
        self.assertEqual(str(invert(Word.parse("ab", F2))), "BA")
        self.assertTrue(invert(Word.identity(F2)).is_identity)
        self.assertEqual(str(~Word.parse("aa", F2)), "AA")
        w = Word.parse("abAbb", F2)
        self.assertTrue((w * ~w).is_identity)

    def test_group_axioms_on_sample_triples(self):
        words = [Word.parse(text, F2) for text in ("ab", "BA", "aab", "bAb", "1", "Ba")]
        for u in words:
            for v in words:
                for w in words:
                    self.assertEqual((u * v) * w, u * (v * w))

    def test_length_parity(self):
        u, v = Word.parse("abA", F2), Word.parse("aBB", F2)
        self.assertEqual(len(u * v) % 2, (len(u) + len(v)) % 2)
        self.assertEqual(len(Word.parse("ab", F2) * Word.parse("a", F2)), 3)

    def test_sphere_size(self):
        self.assertEqual(sphere_size(F2, 1), 4)
        self.assertEqual(sphere_size(F2, 3), 36)
        self.assertEqual(sphere_size(Alphabet(5), 0), 1)

    def test_iter_sphere_matches_sphere_size(self):
        for rank in (1, 2, 3):
            alphabet = Alphabet(rank)
            for k in range(6):
                words = list(iter_sphere(alphabet, k))
                self.assertEqual(len(words), alphabet.sphere_size(k))
                self.assertEqual(len(set(words)), len(words))
                self.assertTrue(all(len(w) == k for w in words))

    def test_text_syntax(self):
        self.assertEqual(str(Word.identity(F2)), "1")
        self.assertTrue(Word.parse("", F2).is_identity)
        self.assertTrue(Word.parse("1", F2).is_identity)
        big = Alphabet(30)
        w = Word.parse("x27 X3 x1", big)
        self.assertEqual(w.letters, (27, -3, 1))
        self.assertEqual(str(w), "x27X3x1")
        self.assertEqual(Word.parse(str(w), big), w)
        self.assertEqual(format_word(parse_word("aBba", F2)), "aa")

    def test_cyclic_reduction(self):
        self.assertEqual(str(cyclic_reduction(Word.parse("abA", F2))), "b")
        self.assertEqual(str(cyclic_reduction(Word.parse("abBa", F2))), "aa")
        self.assertEqual(str(cyclic_reduction(Word.parse("ab", F2))), "ab")

    def test_alphabet_rank_must_be_positive(self):
        with self.assertRaises(InputError):
            Alphabet(0)


class RationalFunctionTests(SimpleTestCase):
    def test_field_arithmetic(self):
        f = rf("t/(1-t)")
        self.assertEqual(f + f, rf("2*t/(1-t)"))
        self.assertEqual(rf("(1-t^2)/(1-t)"), rf("1+t"))
        self.assertEqual(rf("1/(1-3*t)") * rf("1-3*t"), 1)
        self.assertEqual((f - f), RationalFunction.zero())
        self.assertEqual(f / f, RationalFunction.one())

    def test_division_by_zero_function(self):
        with self.assertRaises(ExactArithmeticError):
            RationalFunction.one() / RationalFunction.zero()

    def test_canonical_rendering(self):
        self.assertEqual(str(rf("(1+3*t^2)/(1-9*t^2)")), "(1 + 3*t^2)/(1 - 9*t^2)")
        self.assertEqual(str(rf("2*t^3/(1-t)")), "2*t^3/(1 - t)")
        self.assertEqual(str(rf("(3*t^2+1)/(2-18*t^2)")), "(1/2 + 3/2*t^2)/(1 - 9*t^2)")
        self.assertEqual(str(rf("t/(t-1)")), "-t/(1 - t)")

    def test_parse_rejects_other_symbols(self):
        with self.assertRaises(InputError):
            rf("x + t")
        with self.assertRaises(InputError):
            rf("")

    def test_substitute(self):
        f = rf("1/(1-16*x^2)", "x")
        g = rf("t/(1+3*t^2)")
        self.assertEqual(exact.substitute(f, g), rf("(1+3*t^2)^2/((1-9*t^2)*(1-t^2))"))
        self.assertEqual(exact.substitute(rf("t^2"), rf("1-s", "s")), rf("(1-s)^2", "s"))
        self.assertEqual(exact.substitute(T, T), T)

    def test_series_coefficients(self):
        self.assertEqual(exact.series_coefficients(rf("(1+3*t^2)/(1-9*t^2)"), 4), [1, 0, 12, 0, 108])
        self.assertEqual(exact.series_coefficients(rf("1/(1-t)"), 3), [1, 1, 1, 1])
        self.assertEqual(exact.series_coefficients(rf("2*t^3/(1-t)"), 5), [0, 0, 0, 2, 2, 2])

    def test_series_at_pole(self):
        with self.assertRaises(EvaluationError):
            exact.series_coefficients(rf("1/t"), 3)

    def test_series_of_product_is_cauchy_product(self):
        f, g = rf("(1+2*t)/(1-t-t^2)"), rf("(3-t^3)/(1+4*t^2)")
        order = 30
        self.assertEqual(
            (f * g).series_coefficients(order),
            exact.cauchy_product(f.series_coefficients(order), g.series_coefficients(order), order),
        )

    def test_evaluate(self):
        self.assertEqual(exact.evaluate(rf("(1+3*t^2)/(1-9*t^2)"), 0), 1)
        self.assertEqual(exact.evaluate(rf("2*t/(1-t)"), Fraction(1, 3)), 1)
        self.assertEqual(exact.evaluate(rf("s/(2-s)", "s"), 0), 0)
        with self.assertRaises(EvaluationError):
            exact.evaluate(rf("1/(1-3*t)"), Fraction(1, 3))

    def test_differentiate(self):
        f = rf("z^2/(1-z)", "z")
        self.assertEqual(exact.differentiate(f), rf("(2*z-z^2)/(1-z)^2", "z"))
        self.assertEqual(exact.differentiate(f, 0), f)
        self.assertEqual(exact.differentiate(f).pole_order(1), 2)

    def test_pole_order(self):
        self.assertEqual(rf("1/((1-t)^3*(1+t))").pole_order(1), 3)
        self.assertEqual(rf("1/(1+t)").pole_order(1), 0)


class PoleTests(SimpleTestCase):
    def test_rational_poles_are_exact(self):
        report = exact.poles(rf("1/(1-9*t^2)"))
        self.assertEqual([p.location for p in report.real], [
            CertifiedInterval.exact(Fraction(-1, 3)),
            CertifiedInterval.exact(Fraction(1, 3)),
        ])
        self.assertEqual(report.min_modulus, CertifiedInterval.exact(Fraction(1, 3)))

    def test_polynomial_has_no_poles(self):
        report = exact.poles(rf("1 + t + t^5"))
        self.assertEqual(report.real, ())
        self.assertIsNone(report.min_modulus)

    def test_numerator_does_not_matter(self):
        report = exact.poles(rf("(1+3*t^2)/(1-9*t^2)"))
        self.assertEqual(report.min_modulus.lower, Fraction(1, 3))

    def test_complex_pair_min_modulus(self):
        report = exact.poles(rf("1/(1+t+2*t^2)"), width_bits=20)
        self.assertEqual(report.real, ())
        # roots have modulus sqrt(1/2)
        self.assertLessEqual(report.min_modulus.lower ** 2, Fraction(1, 2))
        self.assertGreaterEqual(report.min_modulus.upper ** 2, Fraction(1, 2))
        self.assertLess(report.min_modulus.width, Fraction(1, 2**18))

    def test_irrational_real_pole(self):
        report = exact.poles(rf("1/(1-2*t^2)"), width_bits=16)
        self.assertEqual(len(report.real), 2)
        positive = report.real[1].location
        self.assertLessEqual(positive.lower ** 2, Fraction(1, 2))
        self.assertGreaterEqual(positive.upper ** 2, Fraction(1, 2))
        self.assertEqual(exact.count_real_roots(rf("1-2*t^2").numerator, positive.lower, positive.upper), 1)


class MatrixTests(SimpleTestCase):
    def test_identity_inverse(self):
        self.assertEqual(exact.invert_matrix(RatMatrix.identity(3)), RatMatrix.identity(3))

    def test_unipotent_inverse(self):
        m = RatMatrix(((1, T), (0, 1)))
        self.assertEqual(exact.invert_matrix(m), RatMatrix(((1, -T), (0, 1))))

    def test_transfer_matrix_with_two_word_lengths(self):
        # initial, u, v, v^-1, u^-1 for the conjugate of a cyclic subgroup; p = q = t
        p = q = T
        a = RatMatrix((
            (0, p, 0, 0, 0),
            (0, 0, q, q, 0),
            (0, 0, q, 0, p),
            (0, 0, 0, q, p),
            (0, 0, 0, 0, 0),
        ))
        inverse = exact.invert_matrix(RatMatrix.identity(5) - a)
        self.assertEqual(inverse[0, 4], rf("2*t^3/(1-t)"))
        self.assertEqual(inverse @ (RatMatrix.identity(5) - a), RatMatrix.identity(5))

    def test_inverse_times_matrix_is_identity(self):
        m = RatMatrix((
            (rf("1+t"), rf("t^2"), 2, rf("1/(1-t)")),
            (T, rf("1-t^2"), rf("3*t"), 0),
            (0, 1, rf("2+t"), rf("t^2")),
            (rf("t/(1+t)"), 0, T, rf("1-2*t")),
        ))
        self.assertEqual(m @ m.inverse(), RatMatrix.identity(4))

    def test_singular_matrix(self):
        m = RatMatrix(((T, T), (1, 1)))
        with self.assertRaises(SingularMatrixError):
            exact.invert_matrix(m)

    def test_solve(self):
        m = RatMatrix(((1, -T), (0, 1)))
        self.assertEqual(exact.solve(m, [0, 1]), [T, RationalFunction.one()])


class UtilsTests(SimpleTestCase):
    def test_to_fraction(self):
        self.assertEqual(to_fraction("1/3"), Fraction(1, 3))
        self.assertEqual(to_fraction("0.2"), Fraction(1, 5))
        self.assertEqual(to_fraction(2), 2)
        with self.assertRaises(InputError):
            to_fraction("two")
        with self.assertRaises(InputError):
            to_fraction(True)

    def test_fraction_text(self):
        self.assertEqual(fraction_text(Fraction(1, 2)), "1/2")
        self.assertEqual(fraction_text(3), "3")

    def test_interval_reciprocal(self):
        interval = CertifiedInterval(Fraction(1, 4), Fraction(1, 2))
        self.assertEqual(interval.reciprocal(), CertifiedInterval(2, 4))
        with self.assertRaises(ExactArithmeticError):
            CertifiedInterval(-1, 1).reciprocal()
