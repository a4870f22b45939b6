"""
Deterministic automata over freely reduced words.

A ``ReducedDfa`` recognizes a set of non-empty reduced words; whether the
identity belongs to the set is carried separately in ``contains_identity``.

Every construction here (boolean operations, cones, inverses, finite sets,
normalization) goes through ``crawl``: a breadth-first exploration of
``(last letter, state set)`` keys. Tracking the last letter means only reduced
words are ever generated, and every state of the result has a letter type, so
crawled automata are already in reduced form.
"""

import logging
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from core import exact
from core.exceptions import InputError, InvariantViolation, SingularMatrixError
from core.words import Alphabet, Word

logger = logging.getLogger(__name__)

# Incremental membership state before any letter has been read
EMPTY_WORD = "empty-word"


@dataclass(frozen=True)
class ReducedDfa:
    """
    Deterministic automaton over an alphabet of signed letters.

    Attributes:
        alphabet: Generators of the free group
        state_count: States are 0 .. state_count - 1
        initial: Initial states
        accept: Accept states
        edges: Sorted (source, letter, target) triples, at most one per (source, letter)
        contains_identity: Whether the recognized set contains the identity
    """

    alphabet: Alphabet
    state_count: int
    initial: frozenset
    accept: frozenset
    edges: tuple
    contains_identity: bool = False

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "accept", frozenset(self.accept))
        object.__setattr__(self, "edges", tuple(sorted(tuple(e) for e in self.edges)))
        if self.state_count < 1:
            raise InputError("an automaton needs at least one state")
        for state in self.initial | self.accept:
            self._check_state(state)
        seen = {}
        for source, letter, target in self.edges:
            self._check_state(source)
            self._check_state(target)
            self.alphabet.check_letter(letter)
            if seen.setdefault((source, letter), target) != target:
                raise InputError(
                    f"state {source} has two exits labelled {self.alphabet.letter_text(letter)}"
                )

    def _check_state(self, state):
        if not isinstance(state, int) or not 0 <= state < self.state_count:
            raise InputError(f"state {state!r} out of range 0..{self.state_count - 1}")

    # ------------------------------------------------------------------
    # structure

    @cached_property
    def delta(self) -> Mapping[tuple[int, int], int]:
        return {(source, letter): target for source, letter, target in self.edges}

    @cached_property
    def state_types(self) -> dict[int, int | None]:
        """The letter on all arrows entering each state, or None."""
        incoming = {q: set() for q in range(self.state_count)}
        for _, letter, target in self.edges:
            incoming[target].add(letter)
        return {q: next(iter(letters)) if len(letters) == 1 else None for q, letters in incoming.items()}

    def state_type(self, state):
        return self.state_types[state]

    def step(self, states, letter):
        return frozenset(self.delta[(q, letter)] for q in states if (q, letter) in self.delta)

    # ------------------------------------------------------------------
    # incremental membership (used by the enumeration oracle)

    def start(self):
        return EMPTY_WORD

    def advance(self, state, letter):
        states = self.initial if state == EMPTY_WORD else state
        following = self.step(states, letter)
        return following or None

    def accepting(self, state):
        if state == EMPTY_WORD:
            return self.contains_identity or bool(self.initial & self.accept)
        return bool(state & self.accept)

    def accepts(self, w: Word) -> bool:
        if w.alphabet != self.alphabet:
            raise InputError("word and automaton use different alphabets")
        state = self.start()
        for letter in w.letters:
            state = self.advance(state, letter)
            if state is None:
                return False
        return self.accepting(state)

    __contains__ = accepts

    # ------------------------------------------------------------------
    # serialization

    @classmethod
    def from_edges(cls, alphabet, state_count, initial, accept, edges, contains_identity=False):
        """Build from edges whose labels are signed letters or single-letter strings."""
        parsed = []
        for edge in edges:
            try:
                source, label, target = edge
            except (TypeError, ValueError):
                raise InputError(f"edge {edge!r} is not a [from, label, to] triple") from None
            if isinstance(label, str):
                letters = alphabet.parse_letters(label)
                if len(letters) != 1:
                    raise InputError(f"edge label {label!r} must be a single letter")
                label = letters[0]
            parsed.append((source, label, target))
        return cls(alphabet, state_count, frozenset(initial), frozenset(accept), tuple(parsed), contains_identity)

    @classmethod
    def from_json(cls, data):
        """
        Read the automaton file format::

            {"rank": m, "states": n, "initial": [..], "accept": [..],
             "identity": bool, "edges": [[from, "label", to], ...]}
        """
        try:
            alphabet = Alphabet(int(data["rank"]))
            return cls.from_edges(
                alphabet,
                int(data["states"]),
                data["initial"],
                data.get("accept", []),
                data.get("edges", []),
                bool(data.get("identity", False)),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed automaton: missing or invalid field {exc}") from exc

    def to_json(self):
        return {
            "rank": self.alphabet.rank,
            "states": self.state_count,
            "initial": sorted(self.initial),
            "accept": sorted(self.accept),
            "identity": self.contains_identity,
            "edges": [[s, self.alphabet.letter_text(x), t] for s, x, t in self.edges],
        }

    def __str__(self):
        return (
            f"ReducedDfa(rank={self.alphabet.rank}, states={self.state_count}, "
            f"initial={sorted(self.initial)}, accept={sorted(self.accept)}, "
            f"identity={self.contains_identity})"
        )


# ----------------------------------------------------------------------
# construction helpers


def _trim(alphabet, state_count, initial, accept, edges, contains_identity):
    """Keep states on initial-to-accept paths and renumber them breadth-first."""
    forward, backward = {}, {}
    for source, letter, target in edges:
        forward.setdefault(source, []).append((letter, target))
        backward.setdefault(target, []).append(source)

    reachable = set(initial)
    queue = deque(sorted(initial))
    while queue:
        q = queue.popleft()
        for _, r in forward.get(q, ()):
            if r not in reachable:
                reachable.add(r)
                queue.append(r)

    productive = set(accept)
    queue = deque(accept)
    while queue:
        q = queue.popleft()
        for p in backward.get(q, ()):
            if p not in productive:
                productive.add(p)
                queue.append(p)

    useful = reachable & productive
    starts = sorted(q for q in initial if q in useful)
    if not starts:
        return ReducedDfa(alphabet, 1, frozenset({0}), frozenset(), (), contains_identity)

    order = {}
    queue = deque()
    for q in starts:
        order[q] = len(order)
        queue.append(q)
    while queue:
        q = queue.popleft()
        for letter, r in sorted(forward.get(q, ()), key=lambda e: alphabet.letters.index(e[0])):
            if r in useful and r not in order:
                order[r] = len(order)
                queue.append(r)

    return ReducedDfa(
        alphabet,
        len(order),
        frozenset(order[q] for q in starts),
        frozenset(order[q] for q in accept if q in order),
        tuple((order[s], x, order[t]) for s, x, t in edges if s in order and t in order),
        contains_identity,
    )


def crawl(alphabet, start, follow, final, contains_identity):
    """
    Explore keys breadth-first from ``start``.

    ``follow(key, letter)`` returns the next key or None; ``final(key)`` says
    whether a key accepts. Keys other than ``start`` must record the last
    letter read so that no arrow re-enters the start state.
    """
    keys = [start]
    index = {start: 0}
    accept = set()
    edges = []
    i = 0
    while i < len(keys):
        key = keys[i]
        if i and final(key):
            accept.add(i)
        for letter in alphabet.letters:
            following = follow(key, letter)
            if following is None:
                continue
            j = index.get(following)
            if j is None:
                j = index[following] = len(keys)
                keys.append(following)
            edges.append((i, letter, j))
        i += 1
    return _trim(alphabet, len(keys), {0}, accept, edges, contains_identity)


def _subset_follow(delta_sets):
    """follow() over (last letter, state set) keys for a transition relation."""

    def follow(key, letter):
        last, states = key
        if last is not None and letter == -last:
            return None
        following = frozenset(r for q in states for r in delta_sets.get((q, letter), ()))
        return (letter, following) if following else None

    return follow


def _relation(d):
    return {(s, x): (t,) for s, x, t in d.edges}


def _has_identity(d):
    return d.contains_identity or bool(d.initial & d.accept)


def _check_same_alphabet(d1, d2):
    if d1.alphabet != d2.alphabet:
        raise InputError(
            f"automata over alphabets of rank {d1.alphabet.rank} and {d2.alphabet.rank}"
        )


# ----------------------------------------------------------------------
# operations


def normalize_reduced_form(d: ReducedDfa) -> ReducedDfa:
    """
    Language-equivalent automaton in reduced form.

    The result has one initial state with no entering arrows, every other
    state has a type (all entering arrows carry the same letter) and no exit
    labelled with the inverse of its type, initial and accept states are
    disjoint, and every state is useful.

    Raises:
        InputError: If the automaton accepts a word that is not freely reduced
    """
    trimmed = _trim(d.alphabet, d.state_count, d.initial, d.accept, d.edges, d.contains_identity)
    for source, letter, target in trimmed.edges:
        if (target, -letter) in trimmed.delta:
            w = d.alphabet.letter_text(letter) + d.alphabet.letter_text(-letter)
            raise InputError(f"automaton accepts words containing the cancelling pair {w}")

    contains_identity = _has_identity(d)
    relation = _relation(d)
    accept = d.accept
    normalized = crawl(
        d.alphabet,
        (None, frozenset(d.initial)),
        _subset_follow(relation),
        lambda key: bool(key[1] & accept),
        contains_identity,
    )
    logger.debug(
        "normalize_reduced_form: %d states -> %d states", d.state_count, normalized.state_count
    )
    return normalized


def is_reduced_form(d: ReducedDfa) -> bool:
    """Check the reduced-form conditions and trimness structurally."""
    if len(d.initial) != 1 or d.initial & d.accept:
        return False
    if any(target in d.initial for _, _, target in d.edges):
        return False
    for state in range(d.state_count):
        if state in d.initial:
            continue
        kind = d.state_type(state)
        if kind is None or (state, -kind) in d.delta:
            return False
    trimmed = _trim(d.alphabet, d.state_count, d.initial, d.accept, d.edges, d.contains_identity)
    return trimmed.state_count == d.state_count and bool(d.accept)


def _product(d1, d2, keep, final, contains_identity):
    _check_same_alphabet(d1, d2)
    delta1, delta2 = d1.delta, d2.delta

    def follow(key, letter):
        last, s1, s2 = key
        if last is not None and letter == -last:
            return None
        t1 = frozenset(delta1[(q, letter)] for q in s1 if (q, letter) in delta1)
        t2 = frozenset(delta2[(q, letter)] for q in s2 if (q, letter) in delta2)
        return (letter, t1, t2) if keep(t1, t2) else None

    start = (None, frozenset(d1.initial), frozenset(d2.initial))
    return crawl(
        d1.alphabet,
        start,
        follow,
        lambda key: final(bool(key[1] & d1.accept), bool(key[2] & d2.accept)),
        contains_identity,
    )


def union(d1: ReducedDfa, d2: ReducedDfa) -> ReducedDfa:
    return _product(
        d1, d2,
        keep=lambda t1, t2: bool(t1 or t2),
        final=lambda a1, a2: a1 or a2,
        contains_identity=_has_identity(d1) or _has_identity(d2),
    )


def intersection(d1: ReducedDfa, d2: ReducedDfa) -> ReducedDfa:
    return _product(
        d1, d2,
        keep=lambda t1, t2: bool(t1 and t2),
        final=lambda a1, a2: a1 and a2,
        contains_identity=_has_identity(d1) and _has_identity(d2),
    )


def difference(d1: ReducedDfa, d2: ReducedDfa) -> ReducedDfa:
    return _product(
        d1, d2,
        keep=lambda t1, t2: bool(t1),
        final=lambda a1, a2: a1 and not a2,
        contains_identity=_has_identity(d1) and not _has_identity(d2),
    )


def restrict_to_reduced(d: ReducedDfa) -> ReducedDfa:
    """The reduced words accepted by ``d``: its product with the all-reduced-words automaton."""
    return intersection(d, full_group(d.alphabet, contains_identity=True))


def empty(alphabet: Alphabet) -> ReducedDfa:
    return ReducedDfa(alphabet, 1, frozenset({0}), frozenset(), ())


def _tail_edges(alphabet, offset):
    """Edges among tail states offset + i (one per letter) accepting every reduced continuation."""
    position = {x: offset + i for i, x in enumerate(alphabet.letters)}
    return position, [
        (position[x], y, position[y]) for x in alphabet.letters for y in alphabet.letters if y != -x
    ]


def full_group(alphabet: Alphabet, contains_identity=True) -> ReducedDfa:
    """All reduced words (the identity according to ``contains_identity``)."""
    position, edges = _tail_edges(alphabet, 1)
    edges += [(0, x, position[x]) for x in alphabet.letters]
    return ReducedDfa(
        alphabet, 1 + alphabet.size, frozenset({0}), frozenset(position.values()), tuple(edges), contains_identity
    )


def cone(w: Word) -> ReducedDfa:
    """
    The cone C(w): reduced words with initial segment w.

    Raises:
        InputError: If w is the identity (use full_group)
    """
    if w.is_identity:
        raise InputError("the cone with the identity vertex is the whole group; use full_group()")
    alphabet = w.alphabet
    length = len(w)
    edges = [(i, x, i + 1) for i, x in enumerate(w.letters)]
    position, tail = _tail_edges(alphabet, length + 1)
    edges += tail
    edges += [(length, x, position[x]) for x in alphabet.letters if x != -w.last]
    d = ReducedDfa(
        alphabet,
        length + 1 + alphabet.size,
        frozenset({0}),
        frozenset([length, *position.values()]),
        tuple(edges),
    )
    return normalize_reduced_form(d)


def from_words(words: Iterable[Word], alphabet: Alphabet) -> ReducedDfa:
    """Automaton of a finite set of words (a trie in reduced form)."""
    words = list(words)
    for w in words:
        if w.alphabet != alphabet:
            raise InputError("word and alphabet mismatch")
    contains_identity = any(w.is_identity for w in words)
    members = {w.letters for w in words if not w.is_identity}
    prefixes = {letters[:k] for letters in members for k in range(len(letters) + 1)}

    def follow(prefix, letter):
        extended = prefix + (letter,)
        return extended if extended in prefixes else None

    return crawl(alphabet, (), follow, lambda prefix: prefix in members, contains_identity)


def inverse_set(d: ReducedDfa) -> ReducedDfa:
    """Automaton of {w^-1 : w accepted by d}."""
    reverse = {}
    for source, letter, target in d.edges:
        reverse.setdefault((target, -letter), []).append(source)
    initial = d.initial
    return crawl(
        d.alphabet,
        (None, frozenset(d.accept)),
        _subset_follow(reverse),
        lambda key: bool(key[1] & initial),
        _has_identity(d),
    )


def prefix_closure(d: ReducedDfa) -> ReducedDfa:
    """Accept every non-empty initial segment of an accepted word."""
    n = normalize_reduced_form(d)
    if not n.accept:
        return n
    return ReducedDfa(
        n.alphabet,
        n.state_count,
        n.initial,
        frozenset(range(n.state_count)) - n.initial,
        n.edges,
        n.contains_identity,
    )


def adjacency(d: ReducedDfa) -> np.ndarray:
    """Integer matrix of arrow counts A[i, j]."""
    matrix = np.zeros((d.state_count, d.state_count), dtype=object)
    for source, _, target in d.edges:
        matrix[source, target] += 1
    return matrix


def path_counts(d: ReducedDfa, max_length: int, include_identity=True) -> list[int]:
    """Number of accepted words of each length 0..max_length."""
    matrix = adjacency(d)
    vector = np.zeros(d.state_count, dtype=object)
    for q in d.initial:
        vector[q] = 1
    accept = sorted(d.accept)
    counts = []
    for k in range(max_length + 1):
        counts.append(int(sum(vector[j] for j in accept)) if k else 0)
        vector = vector.dot(matrix)
    if include_identity:
        counts[0] = int(_has_identity(d))
    return counts


def measure_regular(d: ReducedDfa) -> exact.RationalFunction:
    """
    Adjusted measure of the non-identity part of the language as a function of t.

    Sums ((I - tA)^-1)_{ij} over initial i and accept j, by solving
    (I - tA) x = 1_J once.
    """
    n = normalize_reduced_form(d)
    if not n.accept:
        return exact.RationalFunction.zero()
    matrix = adjacency(n)
    t = exact.RationalFunction.variable()
    size = n.state_count
    rows = tuple(
        tuple(int(i == j) - t * int(matrix[i, j]) if matrix[i, j] else int(i == j) for j in range(size))
        for i in range(size)
    )
    system = exact.RatMatrix(rows)
    try:
        solution = exact.solve(system, [int(j in n.accept) for j in range(size)])
    except SingularMatrixError as exc:
        raise InvariantViolation(f"I - tA is singular for {n}") from exc
    result = exact.sum_all(solution[i] for i in n.initial)
    logger.info("measure_regular: %d-state automaton -> %s", size, result)
    return result


# ----------------------------------------------------------------------
# minimization and language equality


def minimize(d: ReducedDfa) -> ReducedDfa:
    """
    Minimal deterministic automaton (Hopcroft partition refinement).

    The result recognizes the same set but need not be in reduced form;
    use it for comparisons.
    """
    n = normalize_reduced_form(d)
    dead = n.state_count
    states = range(n.state_count + 1)
    letters = n.alphabet.letters

    def target(q, x):
        return n.delta.get((q, x), dead) if q != dead else dead

    predecessors = {}
    for q in states:
        for x in letters:
            predecessors.setdefault((target(q, x), x), set()).add(q)

    accepting = frozenset(n.accept)
    rejecting = frozenset(states) - accepting
    partition = [block for block in (accepting, rejecting) if block]
    worklist = [min(partition, key=len)] if len(partition) == 2 else []
    while worklist:
        splitter = worklist.pop()
        for x in letters:
            sources = set()
            for q in splitter:
                sources |= predecessors.get((q, x), set())
            refined = []
            for block in partition:
                inside, outside = block & sources, block - sources
                if inside and outside:
                    refined.extend([inside, outside])
                    if block in worklist:
                        worklist.remove(block)
                        worklist.extend([inside, outside])
                    else:
                        worklist.append(min(inside, outside, key=len))
                else:
                    refined.append(block)
            partition = refined

    block_of = {q: i for i, block in enumerate(partition) for q in block}
    dead_block = block_of[dead]
    (start,) = n.initial
    edges = {
        (block_of[q], x, block_of[t])
        for q in range(n.state_count)
        for x in letters
        if (t := n.delta.get((q, x))) is not None and block_of[t] != dead_block
    }
    accept = {block_of[q] for q in n.accept}
    return _trim(n.alphabet, len(partition), {block_of[start]}, accept, edges, n.contains_identity)


def canonical_form(d: ReducedDfa):
    """Hashable description equal for isomorphic trimmed single-initial automata."""
    return (d.alphabet.rank, d.state_count, tuple(sorted(d.accept)), d.edges, d.contains_identity)


def equivalent(d1: ReducedDfa, d2: ReducedDfa) -> bool:
    """Language equality by minimize-and-compare."""
    _check_same_alphabet(d1, d2)
    return canonical_form(minimize(d1)) == canonical_form(minimize(d2))
