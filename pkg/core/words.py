"""
Free group elements as freely reduced words.

Letters are signed generator indices: ``i`` is the i-th generator and ``-i``
its inverse (1-based). Words are reduced eagerly on construction, so every
``Word`` is freely reduced.

Text syntax: generators are ``a, b, c, ...`` and inverses ``A, B, C, ...``;
ranks above 26 use ``x1 .. xm`` and ``X1 .. Xm``. The identity is written as
the empty string or ``1``.
"""

import re
import string
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from core import constants
from core.exceptions import InputError

_INDEXED_TOKEN = re.compile(r"([xX])(\d+)")


@dataclass(frozen=True)
class Alphabet:
    """Generators 1..rank of a free group together with their inverses."""

    rank: int

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise InputError(f"rank must be a positive integer, got {self.rank!r}")

    @property
    def size(self) -> int:
        """Number of letters, 2m."""
        return 2 * self.rank

    @property
    def letters(self) -> tuple[int, ...]:
        """All letters in traversal order: a, A, b, B, ..."""
        return tuple(x for i in range(1, self.rank + 1) for x in (i, -i))

    def check_letter(self, letter: int) -> int:
        if not isinstance(letter, int) or letter == 0 or abs(letter) > self.rank:
            raise InputError(f"letter {letter!r} is outside the alphabet of rank {self.rank}")
        return letter

    def sphere_size(self, k: int) -> int:
        """|S_k|: 1 for k = 0, otherwise 2m(2m-1)^(k-1)."""
        if k < 0:
            raise InputError(f"sphere radius must be non-negative, got {k}")
        if k == 0:
            return 1
        return 2 * self.rank * (2 * self.rank - 1) ** (k - 1)

    def ball_size(self, k: int) -> int:
        return sum(self.sphere_size(j) for j in range(k + 1))

    def letter_text(self, letter: int) -> str:
        self.check_letter(letter)
        index = abs(letter)
        if self.rank <= constants.MAX_LETTER_RANK:
            char = string.ascii_lowercase[index - 1]
            return char if letter > 0 else char.upper()
        prefix = constants.INDEXED_GENERATOR_PREFIX if letter > 0 else constants.INDEXED_INVERSE_PREFIX
        return f"{prefix}{index}"

    def parse_letters(self, text: str) -> list[int]:
        """Tokenize ``text`` into signed letters (no reduction)."""
        text = text.strip()
        if text in constants.IDENTITY_TOKENS:
            return []
        letters = []
        pos = 0
        while pos < len(text):
            char = text[pos]
            if char.isspace() or char in "*.":
                pos += 1
                continue
            match = _INDEXED_TOKEN.match(text, pos)
            if match:
                index = int(match.group(2))
                letter = index if match.group(1) == constants.INDEXED_GENERATOR_PREFIX else -index
                pos = match.end()
            elif char in string.ascii_letters:
                index = string.ascii_lowercase.index(char.lower()) + 1
                letter = index if char.islower() else -index
                pos += 1
            else:
                raise InputError(f"unexpected character {char!r} in word {text!r}")
            letters.append(self.check_letter(letter))
        return letters


@dataclass(frozen=True)
class Word:
    """A freely reduced word. Construction reduces ``letters``."""

    alphabet: Alphabet
    letters: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "letters", _free_reduction(self.alphabet, self.letters))

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Word":
        return cls(alphabet, ())

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet) -> "Word":
        return cls(alphabet, tuple(alphabet.parse_letters(text)))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(self.alphabet.letter_text(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({self})"

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def first(self) -> int | None:
        return self.letters[0] if self.letters else None

    @property
    def last(self) -> int | None:
        return self.letters[-1] if self.letters else None

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else invert(self)
        return Word(self.alphabet, base.letters * abs(n))

    def is_prefix_of(self, other: "Word") -> bool:
        return other.letters[: len(self.letters)] == self.letters


def _free_reduction(alphabet: Alphabet, raw: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for letter in raw:
        alphabet.check_letter(letter)
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def reduce(raw: Iterable[int], alphabet: Alphabet) -> Word:
    """Free reduction of a sequence of signed letters."""
    return Word(alphabet, tuple(raw))


def multiply(u: Word, v: Word) -> Word:
    if u.alphabet != v.alphabet:
        raise InputError(
            f"cannot multiply words over alphabets of rank {u.alphabet.rank} and {v.alphabet.rank}"
        )
    return Word(u.alphabet, u.letters + v.letters)


def invert(w: Word) -> Word:
    return Word(w.alphabet, tuple(-x for x in reversed(w.letters)))


def sphere_size(alphabet: Alphabet, k: int) -> int:
    return alphabet.sphere_size(k)


def cyclic_reduction(w: Word) -> Word:
    """Strip matching first/last letter pairs: the cyclically reduced core of w."""
    letters = w.letters
    start, stop = 0, len(letters)
    while stop - start >= 2 and letters[start] == -letters[stop - 1]:
        start += 1
        stop -= 1
    return Word(w.alphabet, letters[start:stop])


def iter_sphere(alphabet: Alphabet, k: int) -> Iterator[Word]:
    """All reduced words of length exactly k, in letter order."""
    if k == 0:
        yield Word.identity(alphabet)
        return
    stack = [(x,) for x in reversed(alphabet.letters)]
    while stack:
        prefix = stack.pop()
        if len(prefix) == k:
            yield Word(alphabet, prefix)
            continue
        for x in reversed(alphabet.letters):
            if x != -prefix[-1]:
                stack.append(prefix + (x,))


def parse_word(text: str, alphabet: Alphabet) -> Word:
    return Word.parse(text, alphabet)


def format_word(w: Word) -> str:
    return str(w)
