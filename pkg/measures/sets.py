"""
Set files: one JSON format for every set the commands accept.

    {"type": "subgroup", "rank": 2, "generators": ["aa", "ab", "ba"]}
    {"type": "subgroup", "rank": 2, "permutations": [[1, 0], [1, 0]]}
    {"type": "automaton", "rank": 2, "states": 3, "initial": [0],
     "accept": [1], "identity": false, "edges": [[0, "a", 1], ...]}

``type`` may be omitted: ``generators`` or ``permutations`` mean a
subgroup, ``edges`` means an automaton. Automata must already be in reduced
form unless ``"restrict": true`` asks to intersect them with the reduced
words. An optional ``"name"`` labels the set in command output.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

from automata import machines
from automata.machines import ReducedDfa
from core.commands import read_json_file
from core.exceptions import InputError
from core.words import Alphabet, Word
from measures.measure import to_measure_of_s
from stallings import graphs
from stallings.graphs import SubgroupGraph

logger = logging.getLogger(__name__)

SUBGROUP = "subgroup"
AUTOMATON = "automaton"
SET_TYPES = (SUBGROUP, AUTOMATON)


@dataclass(frozen=True)
class SetDefinition:
    """A subgroup graph or a reduced-form automaton, with the measures derived from it."""

    kind: str
    alphabet: Alphabet
    source: SubgroupGraph | ReducedDfa
    name: str = ""

    @property
    def contains_identity(self) -> bool:
        return self.source.accepting(self.source.start())

    @property
    def is_subgroup(self) -> bool:
        return self.kind == SUBGROUP

    # incremental membership, delegated

    def start(self):
        return self.source.start()

    def advance(self, state, letter):
        return self.source.advance(state, letter)

    def accepting(self, state):
        return self.source.accepting(state)

    def contains(self, w: Word) -> bool:
        return w in self.source

    __contains__ = contains
    __call__ = contains

    @cached_property
    def mu_star(self):
        """Adjusted measure of the set minus the identity, a function of t."""
        if self.is_subgroup:
            return graphs.measure_graph(self.source)
        return machines.measure_regular(self.source)

    @cached_property
    def mu_of_s(self):
        return to_measure_of_s(self.mu_star, self.alphabet, self.contains_identity)

    def count_series(self):
        """N(t) = sum n_k t^k, identity included."""
        mustar = self.mu_star
        return mustar + 1 if self.contains_identity else mustar

    def counts(self, max_length):
        """n_0 .. n_max_length."""
        return [int(c) for c in self.count_series().series_coefficients(max_length)]


def _subgroup_source(alphabet, data):
    if "permutations" in data:
        return graphs.from_permutations(alphabet, data["permutations"])
    generators = data.get("generators")
    if not isinstance(generators, list) or not all(isinstance(g, str) for g in generators):
        raise InputError("a subgroup needs a list of generator words")
    return graphs.build_subgroup_graph([Word.parse(text, alphabet) for text in generators], alphabet)


def _automaton_source(data):
    raw = ReducedDfa.from_json(data)
    if data.get("restrict", False):
        return machines.restrict_to_reduced(raw)
    return machines.normalize_reduced_form(raw)


def parse_set(data) -> SetDefinition:
    """
    Build a SetDefinition from a decoded set file.

    Raises:
        InputError: On an unknown type, missing fields, or an automaton that reads cancelling pairs
    """
    if not isinstance(data, dict):
        raise InputError("a set file must contain a JSON object")
    kind = data.get("type")
    if kind is None:
        if "generators" in data or "permutations" in data:
            kind = SUBGROUP
        elif "edges" in data:
            kind = AUTOMATON
        else:
            raise InputError("cannot tell the set type: give \"type\", \"generators\" or \"edges\"")
    if kind not in SET_TYPES:
        raise InputError(f"unknown set type {kind!r}; expected one of {', '.join(SET_TYPES)}")
    try:
        alphabet = Alphabet(int(data["rank"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("a set file needs an integer \"rank\"") from exc
    if kind == SUBGROUP:
        source = _subgroup_source(alphabet, data)
    else:
        source = _automaton_source(data)
    logger.debug("parse_set: loaded %s %s", kind, source)
    return SetDefinition(kind, alphabet, source, str(data.get("name", "")))


def load_set_file(path, expected_kind=None) -> SetDefinition:
    """
    Read and parse a set file.

    Args:
        path: JSON file
        expected_kind: "subgroup" or "automaton" to insist on a type, None for either
    """
    definition = parse_set(read_json_file(path))
    if expected_kind is not None and definition.kind != expected_kind:
        raise InputError(f"{path} describes a {definition.kind}, not a {expected_kind}")
    logger.info("load_set_file: %s is a %s of rank %d", path, definition.kind, definition.alphabet.rank)
    return definition
