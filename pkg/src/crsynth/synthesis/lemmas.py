"""Building blocks shared by the group and monoid constructions."""

from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence

from ..algebra import MonoidHom, exponent, image_submonoid, is_group
from ..errors import ResourceCapExceeded
from ..rewriting import Rule, SemiThueSystem, find_nonjoinable, irr_is_finite
from ..words import RESERVED_TOKENS, WeightedAlphabet, Word, is_primitive


def empty_system(alphabet: WeightedAlphabet) -> SemiThueSystem:
    return SemiThueSystem(alphabet, [])


def base_single_letter(phi: MonoidHom) -> SemiThueSystem:
    """{c^n -> 1} where n is the order of the image of the only letter."""
    if len(phi.source) != 1:
        raise ValueError("base case needs a one-letter alphabet")
    img = image_submonoid(phi)
    if not is_group(img.monoid):
        raise ValueError("image of the letter is not a unit")
    (c,) = phi.source.tokens
    n = exponent(img.monoid)
    return SemiThueSystem(phi.source, [Rule((c,) * n, ())])


def pad_system(S: SemiThueSystem, d: int, check: bool = True, max_rules: int | None = None) -> SemiThueSystem:
    """Rules u·l·v -> u·r·v for all u, v of length d.

    Words of length at most 2d become irreducible, and the irreducible words
    are exactly A^{<=2d} together with A^d·IRR_S·A^d.
    """
    if d < 0:
        raise ValueError("padding must be nonnegative")
    if check:
        if S.weight_violation is not None:
            raise ValueError(f"not weight-reducing: {S.weight_violation}")
        cp = find_nonjoinable(S)
        if cp is not None:
            raise ValueError(f"not confluent: {cp}")
        if not irr_is_finite(S):
            raise ValueError("infinitely many irreducible words")
    if d == 0:
        return S
    k = len(S.alphabet)
    count = len(S) * k ** (2 * d)
    if max_rules is not None and count > max_rules:
        raise ResourceCapExceeded("pad_system", "padded system too large", rules=count, cap=max_rules)
    pads = list(product(S.alphabet.tokens, repeat=d))
    rules = [(u + r.lhs + v, u + r.rhs + v) for r in S for u in pads for v in pads]
    return SemiThueSystem.canonical(S.alphabet, rules)


def power_rules(deltas: Iterable[Sequence], t: int, n: int, alphabet: WeightedAlphabet) -> SemiThueSystem:
    """delta^(t+n) -> delta^t for every primitive delta."""
    if n < 1:
        raise ValueError("n must be positive")
    rules = []
    for d in deltas:
        d = alphabet.check(d)
        if not d:
            raise ValueError("empty word in delta set")
        if len(d) > t:
            raise ValueError(f"{d!r} is longer than t = {t}")
        if is_primitive(d):
            rules.append((d * (t + n), d * t))
    return SemiThueSystem.canonical(alphabet, rules)


def extended_alphabet(words: Sequence[Word], weight) -> tuple[WeightedAlphabet, dict]:
    """Alphabet whose letters stand for the given words (kept in order).

    Letters are named by concatenating their tokens; if that is ambiguous a
    bracketed dotted name is used instead.
    """
    names = ["".join(w) for w in words]
    if len(set(names)) != len(names) or any(n in RESERVED_TOKENS for n in names):
        names = ["(" + ".".join(w) + ")" for w in words]
        if len(set(names)) != len(names):
            raise ValueError("cannot name extended letters unambiguously")
    alphabet = WeightedAlphabet([(name, weight(w)) for name, w in zip(names, words)])
    return alphabet, {name: tuple(w) for name, w in zip(names, words)}


def expand(word: Sequence[str], expansion: Mapping[str, Word]) -> Word:
    out = ()
    for t in word:
        out += expansion[t]
    return out


def lift_rules(
    T: SemiThueSystem, c: str, expansion: Mapping[str, Word], alphabet: WeightedAlphabet
) -> SemiThueSystem:
    """Translate rules l -> r over extended letters into c·l -> c·r."""
    missing = [t for t in T.alphabet if t not in expansion]
    if missing:
        raise ValueError(f"no expansion for extended letters {missing}")
    rules = [((c,) + expand(r.lhs, expansion), (c,) + expand(r.rhs, expansion)) for r in T]
    return SemiThueSystem.canonical(alphabet, rules)
