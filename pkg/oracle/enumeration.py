"""
Brute-force reference counts.

Every exact pipeline is checked against these at small lengths. Membership
is either a predicate on Word or an incremental object with

    start()                 state of the empty word
    advance(state, letter)  next state, or None when no extension can be accepted
    accepting(state)        whether the word read so far is in the set

which ReducedDfa, SubgroupGraph and SetDefinition all provide; the DFS
carries the state so each word costs one step.
"""

import logging
import math
from dataclasses import dataclass

from core.exceptions import InputError, ResourceError
from core.utils import freegroup_setting
from core.words import Alphabet, Word

logger = logging.getLogger(__name__)

MAX_LATTICE_LENGTH = 4000


def _check_budget(words, cap, what):
    cap = freegroup_setting("ENUMERATION_CAP", cap)
    if words > cap:
        raise ResourceError(f"{what} would visit {words} words, above the enumeration cap of {cap}")


class _WordPredicate:
    """Incremental adapter for a plain predicate on Word; the state is the prefix."""

    def __init__(self, predicate, alphabet):
        self.predicate = predicate
        self.alphabet = alphabet

    def start(self):
        return ()

    def advance(self, state, letter):
        return state + (letter,)

    def accepting(self, state):
        return bool(self.predicate(Word(self.alphabet, state)))


def _incremental(membership, alphabet):
    if all(hasattr(membership, name) for name in ("start", "advance", "accepting")):
        return membership
    if callable(membership):
        return _WordPredicate(membership, alphabet)
    raise InputError(f"{membership!r} is neither a predicate nor an incremental membership object")


def count_reduced(membership, alphabet: Alphabet, max_length: int, cap=None) -> list[int]:
    """
    n_0 .. n_max_length by exhaustive DFS over reduced words.

    Raises:
        ResourceError: If |B_max_length| exceeds the enumeration cap
    """
    if max_length < 0:
        raise InputError(f"maximum length must be non-negative, got {max_length}")
    _check_budget(alphabet.ball_size(max_length), cap, "count_reduced")
    member = _incremental(membership, alphabet)
    counts = [0] * (max_length + 1)
    start = member.start()
    if member.accepting(start):
        counts[0] = 1
    if max_length == 0:
        return counts
    letters = tuple(reversed(alphabet.letters))
    stack = [(x, 1, member.advance(start, x)) for x in letters]
    while stack:
        letter, depth, state = stack.pop()
        if state is None:
            continue
        if member.accepting(state):
            counts[depth] += 1
        if depth < max_length:
            stack.extend((x, depth + 1, member.advance(state, x)) for x in letters if x != -letter)
    logger.info("count_reduced: counts up to length %d: %s", max_length, counts)
    return counts


def count_monoid_preimage(membership, alphabet: Alphabet, max_length: int, cap=None) -> list[int]:
    """
    n*_0 .. n*_max_length: words of the free monoid on the 2m letters whose
    free reduction lies in the set.

    The reduced form is kept as a linked stack of (letter, state, parent)
    cells so a cancelling letter restores the earlier state.

    Raises:
        ResourceError: If the monoid words of length at most max_length exceed the enumeration cap
    """
    if max_length < 0:
        raise InputError(f"maximum length must be non-negative, got {max_length}")
    _check_budget(sum(alphabet.size**k for k in range(max_length + 1)), cap, "count_monoid_preimage")
    member = _incremental(membership, alphabet)
    start = member.start()
    counts = [0] * (max_length + 1)
    stack = [(None, 0)]
    while stack:
        cell, depth = stack.pop()
        state = start if cell is None else cell[1]
        if state is not None and member.accepting(state):
            counts[depth] += 1
        if depth == max_length:
            continue
        for x in alphabet.letters:
            if cell is not None and cell[0] == -x:
                stack.append((cell[2], depth + 1))
            else:
                following = member.advance(state, x) if state is not None else None
                stack.append(((x, following, cell), depth + 1))
    logger.info("count_monoid_preimage: counts up to length %d: %s", max_length, counts)
    return counts


def lattice_return_counts(max_length: int) -> list[int]:
    """Closed walks of each length on the square lattice: b_2k = C(2k, k)^2, odd terms 0."""
    if not 0 <= max_length <= MAX_LATTICE_LENGTH:
        raise InputError(f"maximum length must lie in 0..{MAX_LATTICE_LENGTH}, got {max_length}")
    return [math.comb(k, k // 2) ** 2 if k % 2 == 0 else 0 for k in range(max_length + 1)]


@dataclass(frozen=True)
class ExponentSumMembership:
    """Kernel of the homomorphism sending generator i to weights[i-1] in Z or Z/modulus."""

    alphabet: Alphabet
    weights: tuple
    modulus: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != self.alphabet.rank:
            raise InputError(f"expected {self.alphabet.rank} weights, got {len(self.weights)}")
        if self.modulus is not None and self.modulus < 1:
            raise InputError(f"modulus must be positive, got {self.modulus}")

    def start(self):
        return 0

    def advance(self, state, letter):
        step = self.weights[abs(letter) - 1]
        total = state + step if letter > 0 else state - step
        return total % self.modulus if self.modulus else total

    def accepting(self, state):
        return state == 0

    def __call__(self, w: Word) -> bool:
        state = self.start()
        for letter in w.letters:
            state = self.advance(state, letter)
        return self.accepting(state)


def exponent_sum_predicate(alphabet: Alphabet, weights=None, modulus=None) -> ExponentSumMembership:
    """Weights default to 1 for every generator (the co-diagonal subgroup)."""
    if weights is None:
        weights = [1] * alphabet.rank
    return ExponentSumMembership(alphabet, tuple(weights), modulus)


@dataclass(frozen=True)
class AbelianizationMembership:
    """The commutator subgroup [F, F]: every generator has exponent sum 0."""

    alphabet: Alphabet

    def start(self):
        return (0,) * self.alphabet.rank

    def advance(self, state, letter):
        index = abs(letter) - 1
        shifted = list(state)
        shifted[index] += 1 if letter > 0 else -1
        return tuple(shifted)

    def accepting(self, state):
        return not any(state)

    def __call__(self, w: Word) -> bool:
        state = self.start()
        for letter in w.letters:
            state = self.advance(state, letter)
        return self.accepting(state)


def abelianization_predicate(alphabet: Alphabet) -> AbelianizationMembership:
    return AbelianizationMembership(alphabet)
