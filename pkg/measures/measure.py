"""
The measure family mu_s on a free group and the random words behind it.

A word is drawn by the no-return walk W_s: stop with probability s at each
step, otherwise append one of the letters that does not cancel the last
one. Its length is geometric, P(|w| = k) = s(1-s)^k, and words of the same
length are equally likely, so

    mu_s(1) = s,    mu_s(w) = s(1-s)^|w| / (2m(2m-1)^(|w|-1)).

The adjusted measure mu*_s(w) = t^|w| with t = (1-s)/(2m-1) is
multiplicative on products without cancellation. Generating functions of
sets live in the variable t; ``to_measure_of_s`` moves them to s.

Exact paths take s as a Fraction. The sampler uses s as a double.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy import stats

from core import constants
from core.exact import RationalFunction
from core.exceptions import InputError
from core.utils import freegroup_setting, to_fraction
from core.words import Alphabet, Word

logger = logging.getLogger(__name__)

# Bins of the length histogram must expect at least this many samples
MIN_EXPECTED_PER_BIN = 5


@dataclass(frozen=True)
class MeasureParams:
    alphabet: Alphabet
    s: Fraction

    def __post_init__(self):
        s = self.s if isinstance(self.s, Fraction) else to_fraction(self.s)
        if not 0 < s < 1:
            raise InputError(f"stopping probability must lie in (0, 1), got {s}")
        object.__setattr__(self, "s", s)

    @property
    def t(self) -> Fraction:
        """Adjusted variable (1 - s)/(2m - 1)."""
        return (1 - self.s) / (self.alphabet.size - 1)

    @property
    def mean_length(self) -> Fraction:
        return 1 / self.s - 1

    @property
    def std_length(self) -> float:
        return math.sqrt(1 - self.s) / float(self.s)


def atom(params: MeasureParams, w: Word) -> Fraction:
    """mu_s(w)."""
    s = params.s
    if w.is_identity:
        return s
    return s * (1 - s) ** len(w) / params.alphabet.sphere_size(len(w))


def adjusted_atom(params: MeasureParams, w: Word) -> Fraction:
    """
    mu*_s(w) = t^|w|.

    Raises:
        InputError: For the identity, which has no adjusted measure
    """
    if w.is_identity:
        raise InputError("the adjusted measure is defined on non-empty words only")
    return params.t ** len(w)


def frequency_atom(alphabet: Alphabet, w: Word) -> Fraction:
    """lambda(w) = 1/|S_|w||, uniform on each sphere."""
    return Fraction(1, alphabet.sphere_size(len(w)))


def adjusted_frequency_atom(alphabet: Alphabet, w: Word) -> Fraction:
    """lambda*(w) = (2m - 1)^-|w|."""
    if w.is_identity:
        raise InputError("the adjusted frequency measure is defined on non-empty words only")
    return Fraction(1, (alphabet.size - 1) ** len(w))


def to_measure_of_s(mustar: RationalFunction, alphabet: Alphabet, contains_identity: bool) -> RationalFunction:
    """
    mu_s(R) as a function of s, from mu*(R minus 1) as a function of t.

    Substitutes t = (1 - s)/(2m - 1), rescales the non-identity mass by
    (2m - 1)s/2m and adds s when the identity belongs to R.

    Raises:
        InputError: If mustar has a pole at t = 0 or a nonzero constant term
    """
    if mustar.var != constants.VAR_T:
        raise InputError(f"expected a function of {constants.VAR_T}, got one of {mustar.var}")
    if mustar.denominator_coefficients[0] == 0:
        raise InputError(f"{mustar} has a pole at t = 0 and is not an adjusted measure")
    if mustar.numerator_coefficients and mustar.numerator_coefficients[0] != 0:
        raise InputError(f"{mustar} has a nonzero constant term; the identity is tracked separately")
    q = alphabet.size - 1
    s = RationalFunction.variable(constants.VAR_S)
    inner = RationalFunction.from_coefficients([Fraction(1, q), Fraction(-1, q)], var=constants.VAR_S)
    result = mustar.substitute(inner) * s * Fraction(q, alphabet.size)
    if contains_identity:
        result = result + s
    return result


def measure_value(mu_of_s: RationalFunction, s) -> Fraction:
    return mu_of_s.evaluate(to_fraction(s))


# ----------------------------------------------------------------------
# sampling


def _letter_table(codes):
    """Letter codes 0..2m-1 (a, A, b, B, ...) to signed letters."""
    generators = (codes >> 1) + 1
    return np.where(codes & 1, -generators, generators)


@dataclass(frozen=True, eq=False)
class _SampledChunk:
    """
    Words from one stream, stored by position.

    Words are ranked longest first. Column p holds letter p of the
    ``active[p]`` words longer than p and starts at ``starts[p]`` in
    ``codes``, so storage is the total length of the words.
    """

    lengths: np.ndarray
    rank: np.ndarray
    starts: np.ndarray
    codes: np.ndarray

    def iter_codes(self):
        for length, j in zip(self.lengths.tolist(), self.rank.tolist()):
            yield self.codes[self.starts[:length] + j]


def _sample_chunk(size, s, count, seed_sequence):
    """Lengths and letter codes of ``count`` words from one stream."""
    rng = np.random.default_rng(seed_sequence)
    lengths = rng.geometric(s, size=count) - 1
    order = np.argsort(-lengths, kind="stable")
    rank = np.empty(count, dtype=np.int64)
    rank[order] = np.arange(count)
    width = int(lengths.max(initial=0))
    active = np.cumsum(np.bincount(lengths, minlength=width + 1)[::-1])[::-1][1:]
    starts = np.concatenate(([0], np.cumsum(active))).astype(np.int64)
    codes = np.empty(int(starts[-1]), dtype=np.int16)
    if width:
        first = int(active[0])
        codes[:first] = rng.integers(0, size, size=first, dtype=np.int16)
        offsets = rng.integers(1, size, size=len(codes) - first, dtype=np.int16)
        for position in range(1, width):
            n = int(active[position])
            begin = int(starts[position])
            previous = codes[starts[position - 1] : starts[position - 1] + n]
            # any letter except the inverse of the previous one
            codes[begin : begin + n] = ((previous ^ 1) + offsets[begin - first : begin - first + n]) % size
    return _SampledChunk(lengths, rank, starts, codes)


def _chunk_jobs(count, seed, chunk):
    if not isinstance(count, (int, np.integer)) or count < 0:
        raise InputError(f"sample count must be a non-negative integer, got {count!r}")
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise InputError(f"seed must be a non-negative integer, got {seed!r}")
    chunk = freegroup_setting("SAMPLER_CHUNK", chunk)
    sizes = [min(chunk, count - start) for start in range(0, count, chunk)]
    streams = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    return list(zip(sizes, streams))


def _run_chunks(task, jobs, workers):
    workers = freegroup_setting("SAMPLER_WORKERS", workers)
    if workers > 1 and len(jobs) > 1:
        try:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(lambda job: task(*job), jobs))
        except (RuntimeError, OSError) as exc:
            logger.warning("_run_chunks: worker pool failed, sampling serially: %s", exc, exc_info=True)
    return [task(*job) for job in jobs]


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """
    Words drawn from W_s. The same alphabet, s, seed and count give the
    same batch whatever the chunking across workers.
    """

    alphabet: Alphabet
    s: float
    seed: int
    count: int
    chunks: tuple

    @cached_property
    def lengths(self) -> np.ndarray:
        if not self.chunks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([chunk.lengths for chunk in self.chunks])

    def iter_letters(self):
        """Yield each sampled word as a tuple of signed letters."""
        for chunk in self.chunks:
            for codes in chunk.iter_codes():
                yield tuple(_letter_table(codes.astype(np.int64)).tolist())

    @cached_property
    def words(self) -> list[Word]:
        return [Word(self.alphabet, letters) for letters in self.iter_letters()]


def sample(params: MeasureParams, count: int, seed: int, workers=None, chunk=None) -> SampleBatch:
    """
    Draw ``count`` words from W_s.

    Args:
        params: Alphabet and stopping probability
        count: Number of words
        seed: Non-negative integer seed; one spawned stream per chunk
        workers: Thread count (defaults to SAMPLER_WORKERS)
        chunk: Words per stream (defaults to SAMPLER_CHUNK)
    """
    s = float(params.s)
    size = params.alphabet.size
    jobs = _chunk_jobs(count, seed, chunk)
    chunks = _run_chunks(lambda n, stream: _sample_chunk(size, s, n, stream), jobs, workers)
    logger.info("sample: drew %d words at s = %s from seed %d in %d chunks", count, s, seed, len(chunks))
    return SampleBatch(params.alphabet, s, int(seed), count, tuple(chunks))


def sample_lengths(params: MeasureParams, count: int, seed: int, workers=None, chunk=None) -> np.ndarray:
    """Word lengths only; identical to ``sample(...).lengths`` for the same arguments."""
    s = float(params.s)
    jobs = _chunk_jobs(count, seed, chunk)

    def lengths_only(n, stream):
        return np.random.default_rng(stream).geometric(s, size=n) - 1

    parts = _run_chunks(lengths_only, jobs, workers)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


@dataclass(frozen=True)
class GoodnessOfFit:
    statistic: float
    pvalue: float
    bins: int


def length_goodness_of_fit(lengths, s, min_expected=MIN_EXPECTED_PER_BIN) -> GoodnessOfFit:
    """
    Chi-square test of sampled lengths against the geometric law s(1-s)^k.

    Lengths 0..K-1 get a bin each, where every bin and the pooled tail
    (lengths >= K) expect at least ``min_expected`` samples.

    Raises:
        InputError: If there are too few samples to form two bins
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    n = len(lengths)
    s = float(s)
    bins = 0
    while n * s * (1 - s) ** bins >= min_expected and n * (1 - s) ** (bins + 1) >= min_expected:
        bins += 1
    if bins == 0:
        raise InputError(f"{n} samples are too few for a goodness-of-fit test at s = {s}")
    probabilities = np.array([s * (1 - s) ** k for k in range(bins)] + [(1 - s) ** bins])
    counts = np.bincount(lengths, minlength=bins)[:bins]
    observed = np.append(counts, n - counts.sum())
    result = stats.chisquare(observed, f_exp=probabilities * n)
    logger.debug("length_goodness_of_fit: %d bins, statistic %.3f", bins + 1, result.statistic)
    return GoodnessOfFit(float(result.statistic), float(result.pvalue), bins + 1)


# ----------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloEstimate:
    hits: int
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise InputError("a Monte Carlo estimate needs at least one sample")

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.hits, self.count)

    @property
    def stderr(self) -> float:
        p = self.hits / self.count
        return math.sqrt(p * (1 - p) / self.count)

    def z_score(self, exact_value):
        """Distance to ``exact_value`` in standard errors."""
        delta = float(self.estimate - to_fraction(exact_value))
        if self.stderr == 0:
            return 0.0 if delta == 0 else math.inf
        return delta / self.stderr

    def to_json(self):
        return {
            "hits": self.hits,
            "samples": self.count,
            "estimate": str(self.estimate),
            "stderr": self.stderr,
        }


def _indicator(membership, alphabet):
    """Predicate on letter tuples from a set, an incremental membership object or a word predicate."""
    if all(hasattr(membership, name) for name in ("start", "advance", "accepting")):

        def member(letters):
            state = membership.start()
            for letter in letters:
                state = membership.advance(state, letter)
                if state is None:
                    return False
            return membership.accepting(state)

        return member
    return lambda letters: bool(membership(Word(alphabet, letters)))


def monte_carlo_measure(params: MeasureParams, membership, batch: SampleBatch) -> MonteCarloEstimate:
    """
    Fraction of ``batch`` lying in a set, with its binomial standard error.

    Args:
        params: Must match the batch's alphabet and stopping probability
        membership: Predicate on Word, or an object with start/advance/accepting
        batch: Words drawn by ``sample``
    """
    if batch.alphabet != params.alphabet or batch.s != float(params.s):
        raise InputError("the sample batch was drawn with different parameters")
    member = _indicator(membership, params.alphabet)
    hits = sum(1 for letters in batch.iter_letters() if member(letters))
    logger.info("monte_carlo_measure: %d of %d samples in the set", hits, batch.count)
    return MonteCarloEstimate(hits, batch.count)
