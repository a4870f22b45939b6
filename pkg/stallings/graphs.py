"""
Subgroup graphs of finitely generated subgroups of a free group.

A ``SubgroupGraph`` is the folded core graph of a subgroup H: reduced words
of H are exactly the labels of reduced closed paths at the basepoint.
Vertices are numbered breadth-first from the basepoint (vertex 0) in letter
order, so two graphs of the same subgroup compare equal.

``consolidate`` collapses chains of degree-2 vertices into word-labelled
edges, and ``transfer_automaton`` turns the consolidated graph into the
transfer matrix whose resolvent gives the adjusted measure of H minus the
identity.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import sympy
from networkx.utils import UnionFind
from scipy import sparse
from sympy import QQ, Poly

from automata.machines import crawl
from core import constants, exact
from core.exceptions import InputError, ResourceError
from core.utils import freegroup_setting
from core.words import Alphabet, Word

logger = logging.getLogger(__name__)

BASEPOINT = 0


@dataclass(frozen=True)
class SubgroupGraph:
    """
    Folded, core, connected graph with a basepoint.

    Attributes:
        alphabet: Generators of the ambient free group
        vertex_count: Vertices are 0 .. vertex_count - 1, 0 is the basepoint
        edges: Sorted (source, generator, target) triples with generator > 0;
            each also stands for the inverse edge labelled -generator
    """

    alphabet: Alphabet
    vertex_count: int
    edges: tuple

    @cached_property
    def step_map(self):
        step = {}
        for source, generator, target in self.edges:
            step[(source, generator)] = target
            step[(target, -generator)] = source
        return step

    def follow(self, vertex, letter):
        return self.step_map.get((vertex, letter))

    def degree(self, vertex):
        return sum(1 for x in self.alphabet.letters if (vertex, x) in self.step_map)

    # incremental membership (used by the enumeration oracle)

    def start(self):
        return BASEPOINT

    def advance(self, state, letter):
        return self.step_map.get((state, letter))

    def accepting(self, state):
        return state == BASEPOINT

    def contains(self, w: Word) -> bool:
        return membership(self, w)

    __contains__ = contains

    def __str__(self):
        return f"SubgroupGraph(rank={self.alphabet.rank}, vertices={self.vertex_count}, edges={len(self.edges)})"


def _canonical(alphabet, edges, basepoint):
    """Renumber breadth-first from ``basepoint``; drops vertices it cannot reach."""
    step = {}
    for source, generator, target in edges:
        step[(source, generator)] = target
        step[(target, -generator)] = source
    order = {basepoint: 0}
    queue = deque([basepoint])
    while queue:
        v = queue.popleft()
        for x in alphabet.letters:
            w = step.get((v, x))
            if w is not None and w not in order:
                order[w] = len(order)
                queue.append(w)
    relabelled = {
        (order[s], x, order[t]) for s, x, t in edges if s in order and t in order
    }
    return SubgroupGraph(alphabet, len(order), tuple(sorted(relabelled))), len(order)


def _fold(edges):
    """Identify vertices until no vertex has two exits or two entries with one label."""
    uf = UnionFind()
    changed = True
    while changed:
        changed = False
        seen = {}
        for source, generator, target in edges:
            for key, end in (((uf[source], generator), target), ((uf[target], -generator), source)):
                other = seen.get(key)
                if other is None:
                    seen[key] = end
                elif uf[other] != uf[end]:
                    uf.union(other, end)
                    changed = True
    return uf, {(uf[s], x, uf[t]) for s, x, t in edges}


def _prune(edges, basepoint):
    """Repeatedly remove degree-1 vertices other than the basepoint."""
    incident = {}
    degree = {}
    for edge in edges:
        source, _, target = edge
        for v in (source, target):
            incident.setdefault(v, set()).add(edge)
            degree[v] = degree.get(v, 0) + 1
    alive = set(edges)
    queue = deque(v for v, d in degree.items() if d == 1 and v != basepoint)
    while queue:
        v = queue.popleft()
        if v == basepoint or degree.get(v) != 1:
            continue
        (edge,) = incident[v]
        alive.discard(edge)
        source, _, target = edge
        other = target if source == v else source
        for u in (source, target):
            incident[u].discard(edge)
            degree[u] -= 1
        if other != basepoint and degree[other] == 1:
            queue.append(other)
    return alive


def build_subgroup_graph(generators, alphabet: Alphabet | None = None) -> SubgroupGraph:
    """
    Folded core graph of the subgroup generated by ``generators``.

    Each non-identity generator contributes a loop at the basepoint; the
    loops are folded and hanging trees are pruned.

    Args:
        generators: Words generating the subgroup (identity words are dropped)
        alphabet: Required when no generator is given

    Raises:
        InputError: On mixed alphabets, or with neither generators nor alphabet
    """
    generators = list(generators)
    if alphabet is None:
        if not generators:
            raise InputError("an alphabet is required for the trivial subgroup")
        alphabet = generators[0].alphabet
    edges = []
    next_vertex = 1
    for w in generators:
        if w.alphabet != alphabet:
            raise InputError("generators use different alphabets")
        if w.is_identity:
            continue
        path = [BASEPOINT] + list(range(next_vertex, next_vertex + len(w) - 1)) + [BASEPOINT]
        next_vertex += len(w) - 1
        for position, letter in enumerate(w.letters):
            u, v = path[position], path[position + 1]
            edges.append((u, letter, v) if letter > 0 else (v, -letter, u))

    uf, folded = _fold(edges)
    base = uf[BASEPOINT]
    core = _prune(folded, base)
    graph, _ = _canonical(alphabet, core, base)
    logger.info(
        "build_subgroup_graph: %d generators folded to %d vertices and %d edges",
        len(generators), graph.vertex_count, len(graph.edges),
    )
    return graph


def from_permutations(alphabet: Alphabet, permutations) -> SubgroupGraph:
    """
    Schreier graph of a transitive action on 0..n-1, with 0 as the basepoint.

    Args:
        permutations: One sequence per generator; permutations[i][v] is the
            image of v under generator i + 1

    Raises:
        InputError: If a sequence is not a permutation or the action is not transitive
    """
    permutations = [list(p) for p in permutations]
    if len(permutations) != alphabet.rank:
        raise InputError(f"expected {alphabet.rank} permutations, got {len(permutations)}")
    n = len(permutations[0]) if permutations else 0
    edges = []
    for generator, images in enumerate(permutations, start=1):
        if sorted(images) != list(range(n)):
            raise InputError(f"images of generator {alphabet.letter_text(generator)} are not a permutation of 0..{n - 1}")
        edges.extend((v, generator, images[v]) for v in range(n))
    graph, reached = _canonical(alphabet, edges, BASEPOINT)
    if reached != n:
        raise InputError("the permutation action is not transitive")
    return graph


def membership(g: SubgroupGraph, w: Word) -> bool:
    """Whether w labels a closed path at the basepoint."""
    if w.alphabet != g.alphabet:
        raise InputError("word and subgroup graph use different alphabets")
    vertex = BASEPOINT
    for letter in w.letters:
        vertex = g.step_map.get((vertex, letter))
        if vertex is None:
            return False
    return vertex == BASEPOINT


def index(g: SubgroupGraph):
    """The index |F : H|: vertex count when every vertex has full degree, else math.inf."""
    if all(g.degree(v) == g.alphabet.size for v in range(g.vertex_count)):
        return g.vertex_count
    return math.inf


# ----------------------------------------------------------------------
# consolidation and the transfer automaton


@dataclass(frozen=True)
class ConsolidatedEdge:
    origin: int
    terminus: int
    label: Word


@dataclass(frozen=True)
class ConsolidatedGraph:
    """
    Vertices of degree at least 3 plus the basepoint, joined by word-labelled
    directed edges; ``reverse[i]`` is the edge travelled the other way.
    """

    graph: SubgroupGraph
    vertices: tuple
    edges: tuple
    reverse: tuple

    @property
    def alphabet(self):
        return self.graph.alphabet


def consolidate(g: SubgroupGraph) -> ConsolidatedGraph:
    """Collapse chains of degree-2 vertices into edges labelled by the chain words."""
    step = g.step_map
    branch = {BASEPOINT} | {v for v in range(g.vertex_count) if g.degree(v) >= 3}
    edges = []
    for origin in sorted(branch):
        for first in g.alphabet.letters:
            vertex = step.get((origin, first))
            if vertex is None:
                continue
            letters = [first]
            while vertex not in branch:
                letter = next(
                    x for x in g.alphabet.letters if x != -letters[-1] and (vertex, x) in step
                )
                letters.append(letter)
                vertex = step[(vertex, letter)]
            edges.append(ConsolidatedEdge(origin, vertex, Word(g.alphabet, tuple(letters))))
    by_start = {(e.origin, e.label.first): i for i, e in enumerate(edges)}
    reverse = tuple(by_start[(e.terminus, -e.label.last)] for e in edges)
    logger.debug("consolidate: %d branch vertices, %d directed edges", len(branch), len(edges))
    return ConsolidatedGraph(g, tuple(sorted(branch)), tuple(edges), reverse)


@dataclass(frozen=True)
class TransferAutomaton:
    """
    State 0 is the initial "empty word written" state; state 1 + i means the
    last edge read was consolidated edge i.

    ``transitions`` holds (source, target, length) triples: after the source
    state the next edge may be the target's edge, which adds ``length`` letters.
    """

    consolidated: ConsolidatedGraph
    transitions: tuple
    accept: frozenset

    @property
    def state_count(self):
        return 1 + len(self.consolidated.edges)

    def matrix(self, var=constants.VAR_T) -> exact.RatMatrix:
        """Transition measure matrix with entries t^length."""
        n = self.state_count
        rows = [[0] * n for _ in range(n)]
        for source, target, length in self.transitions:
            rows[source][target] = exact.RationalFunction.monomial(1, length, var)
        return exact.RatMatrix(tuple(tuple(row) for row in rows), var)


def transfer_automaton(cg: ConsolidatedGraph) -> TransferAutomaton:
    transitions = []
    for j, f in enumerate(cg.edges):
        if f.origin == BASEPOINT:
            transitions.append((0, 1 + j, len(f.label)))
    for i, e in enumerate(cg.edges):
        for j, f in enumerate(cg.edges):
            if e.terminus == f.origin and j != cg.reverse[i]:
                transitions.append((1 + i, 1 + j, len(f.label)))
    accept = frozenset(1 + i for i, e in enumerate(cg.edges) if e.terminus == BASEPOINT)
    return TransferAutomaton(cg, tuple(transitions), accept)


def measure_graph(g: SubgroupGraph) -> exact.RationalFunction:
    """Adjusted measure of H minus the identity, read off the transfer matrix of ``g``."""
    automaton = transfer_automaton(consolidate(g))
    if not automaton.accept:
        return exact.RationalFunction.zero()
    n = automaton.state_count
    system = exact.RatMatrix.identity(n) - automaton.matrix()
    # row 0 of the inverse summed over accept states is entry 0 of (E - A)^-1 1_J
    result = exact.solve(system, [int(j in automaton.accept) for j in range(n)])[0]
    logger.info("measure_graph: %d transfer states -> %s", n, result)
    return result


def measure_subgroup(generators, alphabet: Alphabet | None = None) -> exact.RationalFunction:
    """
    Adjusted measure mu*(H minus 1) of the subgroup generated by ``generators``.

    Returns:
        RationalFunction in t whose k-th coefficient counts reduced words of length k in H
    """
    return measure_graph(build_subgroup_graph(generators, alphabet))


def to_automaton(g: SubgroupGraph):
    """ReducedDfa recognizing the non-identity words of H (identity flagged)."""

    def follow(key, letter):
        last, vertex = key
        if last is not None and letter == -last:
            return None
        target = g.step_map.get((vertex, letter))
        return None if target is None else (letter, target)

    return crawl(g.alphabet, (None, BASEPOINT), follow, lambda key: key[1] == BASEPOINT, True)


# ----------------------------------------------------------------------
# Schreier graphs: walks and spectra


def _require_finite_index(g):
    if index(g) == math.inf:
        raise InputError(f"{g} has infinite index; its core graph is not a Schreier graph")


def adjacency_matrix(g: SubgroupGraph) -> np.ndarray:
    """Schreier-graph adjacency: A[u, v] counts letters leading from u to v."""
    _require_finite_index(g)
    matrix = np.zeros((g.vertex_count, g.vertex_count), dtype=object)
    for source, _, target in g.edges:
        matrix[source, target] += 1
        matrix[target, source] += 1
    return matrix


def return_series(g: SubgroupGraph) -> exact.RationalFunction:
    """B(t) = ((I - tA)^-1)_00: closed walks at the basepoint counted by length."""
    a = adjacency_matrix(g)
    n = g.vertex_count
    t = exact.RationalFunction.variable()
    rows = tuple(tuple(int(i == j) - t * int(a[i, j]) for j in range(n)) for i in range(n))
    solution = exact.solve(exact.RatMatrix(rows), [int(i == BASEPOINT) for i in range(n)])
    return solution[BASEPOINT]


def schreier_charpoly(g: SubgroupGraph) -> Poly:
    """Characteristic polynomial of the Schreier adjacency matrix, in x over QQ."""
    x = exact.SYMBOLS[constants.VAR_X]
    charpoly = sympy.Matrix(adjacency_matrix(g).tolist()).charpoly(x)
    return Poly(charpoly.as_expr(), x, domain=QQ)


@dataclass(frozen=True)
class SpectralRadius:
    """Spectral radius of the simple random walk; ``approximate`` marks truncated estimates."""

    value: exact.CertifiedInterval
    approximate: bool
    radius: int | None = None

    def to_json(self):
        data = {"nu": self.value.to_json(), "approximate": self.approximate}
        if self.radius is not None:
            data["radius"] = self.radius
        return data


def _abs_bounds(interval):
    lower, upper = interval.lower, interval.upper
    largest = max(abs(lower), abs(upper))
    smallest = Fraction(0) if lower <= 0 <= upper else min(abs(lower), abs(upper))
    return smallest, largest


def _ball_neighbours(g, state, letter):
    vertex, tail = state
    if not tail:
        target = g.step_map.get((vertex, letter))
        return (target, ()) if target is not None else (vertex, (letter,))
    if letter == -tail[-1]:
        return vertex, tail[:-1]
    return vertex, tail + (letter,)


def schreier_spectral_radius(g: SubgroupGraph, radius=None, width_bits=None, ball_cap=None) -> SpectralRadius:
    """
    Spectral radius nu of the simple random walk on the Schreier graph of H.

    Without ``radius`` the graph must have finite index and nu is certified
    from the characteristic polynomial. With ``radius`` R the walk is run on
    the ball of radius R around the basepoint (vertices are cosets written as
    core vertex plus a hanging tail word), and max p_2k^(1/2k) over 2k <= 2R
    is returned as an approximate lower bound.

    Raises:
        InputError: Radius below 1, or infinite index without a radius
        ResourceError: The ball exceeds SCHREIER_BALL_CAP vertices
    """
    size = g.alphabet.size
    if radius is None:
        _require_finite_index(g)
        roots = exact.real_roots(schreier_charpoly(g), width_bits)
        bounds = [_abs_bounds(interval) for interval, _ in (roots[0], roots[-1])]
        value = exact.CertifiedInterval(
            max(b[0] for b in bounds) / size,
            max(b[1] for b in bounds) / size,
        )
        return SpectralRadius(value, approximate=False)

    if radius < 1:
        raise InputError(f"truncation radius must be at least 1, got {radius}")
    cap = freegroup_setting("SCHREIER_BALL_CAP", ball_cap)
    start = (BASEPOINT, ())
    position = {start: 0}
    frontier = [start]
    for _ in range(radius):
        following = []
        for state in frontier:
            for letter in g.alphabet.letters:
                neighbour = _ball_neighbours(g, state, letter)
                if neighbour not in position:
                    position[neighbour] = len(position)
                    following.append(neighbour)
                    if len(position) > cap:
                        raise ResourceError(
                            f"Schreier ball of radius {radius} exceeds {cap} vertices"
                        )
        frontier = following

    rows, cols = [], []
    for state, i in position.items():
        for letter in g.alphabet.letters:
            j = position.get(_ball_neighbours(g, state, letter))
            if j is not None:
                rows.append(j)
                cols.append(i)
    n = len(position)
    step = sparse.csr_matrix((np.full(len(rows), 1.0 / size), (rows, cols)), shape=(n, n))
    vector = np.zeros(n)
    vector[0] = 1.0
    best = 0.0
    for k in range(1, 2 * radius + 1):
        vector = step @ vector
        if k % 2 == 0 and vector[0] > 0:
            best = max(best, vector[0] ** (1.0 / k))
    logger.info("schreier_spectral_radius: ball of radius %d has %d vertices, estimate %.6f", radius, n, best)
    return SpectralRadius(exact.CertifiedInterval(Fraction(min(best, 1.0)), 1), approximate=True, radius=radius)
