"""Words over weighted alphabets.

A word is a plain tuple of tokens. Tokens are opaque strings, so the same
machinery works for the base alphabet and for extended alphabets whose
letters stand for whole words.
"""

from __future__ import annotations

from itertools import product
from math import ceil
from typing import Iterable, Iterator, Mapping, Sequence

Word = tuple  # tuple[str, ...]

EMPTY: Word = ()

RESERVED_TOKENS = frozenset({"eps", "->"})


class WeightedAlphabet:
    """Finite ordered set of tokens, each with a positive integer weight.

    The declaration order is the letter order used for length-lexicographic
    comparisons.
    """

    __slots__ = ("tokens", "_weights", "_index")

    def __init__(self, weights: Mapping[str, int] | Iterable[tuple[str, int]]):
        pairs = list(weights.items()) if isinstance(weights, Mapping) else list(weights)
        tokens = []
        table = {}
        for token, w in pairs:
            if not isinstance(token, str) or not token or any(ch.isspace() for ch in token):
                raise ValueError(f"invalid token {token!r}")
            if token in RESERVED_TOKENS:
                raise ValueError(f"token {token!r} is reserved")
            if token in table:
                raise ValueError(f"duplicate token {token!r}")
            if int(w) != w or w < 1:
                raise ValueError(f"weight of {token!r} must be a positive integer, got {w!r}")
            tokens.append(token)
            table[token] = int(w)
        self.tokens = tuple(tokens)
        self._weights = table
        self._index = {t: i for i, t in enumerate(tokens)}

    @classmethod
    def unit(cls, tokens: Iterable[str]) -> "WeightedAlphabet":
        return cls([(t, 1) for t in tokens])

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __contains__(self, token):
        return token in self._weights

    def __eq__(self, other):
        if not isinstance(other, WeightedAlphabet):
            return NotImplemented
        return self.tokens == other.tokens and self._weights == other._weights

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        body = ", ".join(f"{t}:{w}" for t, w in self.items())
        return f"WeightedAlphabet({body})"

    def items(self):
        return [(t, self._weights[t]) for t in self.tokens]

    def letter_weight(self, token: str) -> int:
        return self._weights[token]

    def index(self, token: str) -> int:
        return self._index[token]

    def weight(self, word: Sequence[str]) -> int:
        """Sum of letter weights; 0 for the empty word."""
        w = self._weights
        try:
            return sum(w[t] for t in word)
        except KeyError as exc:
            raise ValueError(f"token {exc.args[0]!r} is not in the alphabet") from None

    @property
    def max_weight(self) -> int:
        return max(self._weights.values(), default=0)

    @property
    def min_weight(self) -> int:
        return min(self._weights.values(), default=0)

    def check(self, word: Sequence[str]) -> Word:
        for t in word:
            if t not in self._weights:
                raise ValueError(f"token {t!r} is not in the alphabet")
        return tuple(word)

    def key(self, word: Sequence[str]):
        """Sort key for the length-lexicographic order."""
        idx = self._index
        return (len(word), tuple(idx[t] for t in word))

    def sorted(self, words: Iterable[Sequence[str]]) -> list:
        return sorted((tuple(w) for w in words), key=self.key)

    def restrict(self, tokens: Iterable[str]) -> "WeightedAlphabet":
        """Sub-alphabet on the given tokens, in the order given."""
        return WeightedAlphabet([(t, self._weights[t]) for t in tokens])

    def word(self, text: str) -> Word:
        """Parse a word: whitespace-separated tokens, or one letter per
        character when every token is a single character. ``eps`` and the
        empty string denote the empty word."""
        text = text.strip()
        if text in ("", "eps"):
            return EMPTY
        parts = text.split()
        if len(parts) == 1 and parts[0] not in self._weights and all(len(t) == 1 for t in self.tokens):
            parts = list(parts[0])
        return self.check(parts)


def fmt(word: Sequence[str], sep: str | None = None) -> str:
    """Render a word; ``eps`` for the empty word."""
    if not word:
        return "eps"
    if sep is None:
        sep = "" if all(len(t) == 1 for t in word) else " "
    return sep.join(word)


def is_factor(u: Sequence, w: Sequence) -> bool:
    n, m = len(u), len(w)
    if n == 0:
        return True
    u = tuple(u)
    w = tuple(w)
    return any(w[i:i + n] == u for i in range(m - n + 1))


def occurrences(u: Sequence, w: Sequence) -> list[int]:
    """Start positions of u inside w."""
    n = len(u)
    u = tuple(u)
    w = tuple(w)
    return [i for i in range(len(w) - n + 1) if w[i:i + n] == u]


def _require_nonempty(w):
    if len(w) == 0:
        raise ValueError("the empty word has no primitive root")


def primitive_root(w: Sequence) -> tuple[Word, int]:
    """Return (root, exponent) with root primitive and root**exponent == w."""
    _require_nonempty(w)
    w = tuple(w)
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d], n // d
    raise AssertionError("unreachable")


def is_primitive(w: Sequence) -> bool:
    # w is primitive iff it occurs in ww only at offsets 0 and |w|
    _require_nonempty(w)
    w = tuple(w)
    return _find(w + w, w, 1) == len(w)


def _find(hay: Word, needle: Word, start: int) -> int:
    n = len(needle)
    for i in range(start, len(hay) - n + 1):
        if hay[i:i + n] == needle:
            return i
    return -1


def are_conjugate(u: Sequence, v: Sequence) -> bool:
    u, v = tuple(u), tuple(v)
    return len(u) == len(v) and (not u or _find(u + u, v, 0) >= 0)


def conjugates(w: Sequence) -> set:
    w = tuple(w)
    return {w[i:] + w[:i] for i in range(max(len(w), 1))}


def has_period(w: Sequence, m: int) -> bool:
    if m < 1:
        raise ValueError("period must be positive")
    return all(w[i] == w[i + m] for i in range(len(w) - m))


def is_factor_of_power(u: Sequence, delta: Sequence) -> bool:
    """True iff u is a factor of delta**k for some k >= 1."""
    if len(delta) == 0:
        raise ValueError("delta must be nonempty")
    delta = tuple(delta)
    reps = ceil(len(u) / len(delta)) + 1
    return is_factor(u, delta * reps)


def in_factor_closure(u: Sequence, deltas: Iterable[Sequence]) -> bool:
    return any(is_factor_of_power(u, d) for d in deltas)


def minimal_nonfactors(deltas: Iterable[Sequence], alphabet: WeightedAlphabet, n: int) -> list[Word]:
    """Minimal words that are not a factor of any delta+, delta in deltas.

    Every returned word avoids all delta+, every word avoiding all delta+ has
    one of them as a factor, and none is a proper factor of another. Words of
    ``deltas`` must have length at most n; the result then has lengths at
    most 2n. Output is in length-lexicographic order.
    """
    deltas = [tuple(d) for d in deltas]
    for d in deltas:
        if not d:
            raise ValueError("deltas must be nonempty words")
        if len(d) > n:
            raise ValueError(f"word {d!r} is longer than the bound {n}")
        alphabet.check(d)
    roots = {primitive_root(d)[0] for d in deltas}

    def in_f(x):
        return not x or any(is_factor_of_power(x, r) for r in roots)

    found = []
    level = [EMPTY]
    for _ in range(2 * n):
        nxt = []
        for x in level:
            for a in alphabet.tokens:
                y = x + (a,)
                if in_f(y):
                    nxt.append(y)
                elif in_f(y[1:]):
                    found.append(y)
        level = nxt
        if not level:
            break
    return alphabet.sorted(found)


def enumerate_words(alphabet: WeightedAlphabet, max_weight: int) -> list[Word]:
    """All words of weight <= max_weight in length-lexicographic order."""
    out = []
    level = [(EMPTY, 0)] if max_weight >= 0 else []
    letters = alphabet.items()
    while level:
        out.extend(w for w, _ in level)
        level = [(w + (a,), s + wa) for w, s in level for a, wa in letters if s + wa <= max_weight]
    return out


def iter_words(alphabet: WeightedAlphabet, length: int) -> Iterator[Word]:
    """All words of exactly the given length, lexicographic."""
    return product(alphabet.tokens, repeat=length)
