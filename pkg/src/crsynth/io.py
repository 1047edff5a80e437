"""Text formats for alphabets, automata, systems and accepting classes.

Alphabet files hold ``token weight`` lines. Automaton files use the
directives ``states:``, ``initial:``, ``accepting:`` and ``trans: q a r``.
System files embed their alphabet::

    [alphabet]
    c 1
    [rules]
    c c c -> eps

Lines starting with ``#`` and blank lines are ignored everywhere.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .algebra import Dfa
from .rewriting import SemiThueSystem
from .words import EMPTY, WeightedAlphabet, Word


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip())


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _alphabet_entry(line: str, no: int, source):
    parts = line.split()
    if len(parts) != 2:
        raise FormatError(f"expected 'token weight', got {line!r}", no, source)
    try:
        weight = int(parts[1])
    except ValueError:
        raise FormatError(f"weight {parts[1]!r} is not an integer", no, source) from None
    return parts[0], weight


def _make_alphabet(pairs, source) -> WeightedAlphabet:
    try:
        return WeightedAlphabet(pairs)
    except ValueError as exc:
        raise FormatError(str(exc), source=source) from None


def parse_alphabet(text: str, source: str | None = None) -> WeightedAlphabet:
    pairs = [_alphabet_entry(line, no, source) for no, line in _lines(text)]
    return _make_alphabet(pairs, source)


def emit_alphabet(alphabet: WeightedAlphabet) -> str:
    return "".join(f"{t} {w}\n" for t, w in alphabet.items())


def parse_dfa(text: str, alphabet: WeightedAlphabet, source: str | None = None) -> Dfa:
    states = initial = None
    accepting: list = []
    trans = {}
    for no, line in _lines(text):
        key, sep, rest = line.partition(":")
        if not sep:
            raise FormatError(f"expected a directive, got {line!r}", no, source)
        key, args = key.strip(), rest.split()
        if key == "states":
            states = args
        elif key == "initial":
            if len(args) != 1:
                raise FormatError("initial: needs exactly one state", no, source)
            initial = args[0]
        elif key == "accepting":
            accepting.extend(args)
        elif key == "trans":
            if len(args) != 3:
                raise FormatError("trans: needs '<state> <token> <state>'", no, source)
            q, a, r = args
            if (q, a) in trans and trans[q, a] != r:
                raise FormatError(f"two transitions for state {q!r} and token {a!r}", no, source)
            trans[q, a] = r
        else:
            raise FormatError(f"unknown directive {key!r}", no, source)
    if states is None or initial is None:
        raise FormatError("missing 'states:' or 'initial:'", source=source)
    try:
        return Dfa(states, initial, accepting, trans, alphabet)
    except ValueError as exc:
        raise FormatError(str(exc), source=source) from None


def emit_dfa(dfa: Dfa) -> str:
    out = [
        "states: " + " ".join(map(str, dfa.states)),
        f"initial: {dfa.initial}",
        "accepting: " + " ".join(str(q) for q in dfa.states if q in dfa.accepting),
    ]
    for q in dfa.states:
        for a in dfa.alphabet:
            out.append(f"trans: {q} {a} {dfa.transitions[q, a]}")
    return "\n".join(out) + "\n"


def format_word(word: Sequence[str]) -> str:
    """Space-separated tokens, ``eps`` for the empty word."""
    return " ".join(word) if word else "eps"


def parse_word(text: str, alphabet: WeightedAlphabet) -> Word:
    try:
        return alphabet.word(text)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _side(text: str, alphabet: WeightedAlphabet, no: int, source) -> Word:
    parts = text.split()
    if parts == ["eps"]:
        return EMPTY
    if not parts:
        raise FormatError("empty rule side; write eps", no, source)
    for t in parts:
        if t not in alphabet:
            raise FormatError(f"undeclared token {t!r}", no, source)
    return tuple(parts)


def parse_system(text: str, source: str | None = None) -> SemiThueSystem:
    section = None
    pairs, rules = [], []
    alphabet = None
    for no, line in _lines(text):
        if line == "[alphabet]" and section is None:
            section = line
        elif line == "[rules]" and section == "[alphabet]":
            section = line
            alphabet = _make_alphabet(pairs, source)
        elif section == "[alphabet]":
            pairs.append(_alphabet_entry(line, no, source))
        elif section == "[rules]":
            lhs, sep, rhs = line.partition("->")
            if not sep:
                raise FormatError(f"expected 'lhs -> rhs', got {line!r}", no, source)
            lhs = _side(lhs, alphabet, no, source)
            if not lhs:
                raise FormatError("left side must be nonempty", no, source)
            rules.append((lhs, _side(rhs, alphabet, no, source)))
        else:
            raise FormatError(f"unexpected line {line!r}; need [alphabet] then [rules]", no, source)
    if alphabet is None:
        raise FormatError("missing [alphabet] or [rules] section", source=source)
    return SemiThueSystem(alphabet, rules)


def emit_system(S: SemiThueSystem) -> str:
    S = SemiThueSystem.canonical(S.alphabet, S.rules)
    out = ["[alphabet]", *(f"{t} {w}" for t, w in S.alphabet.items()), "[rules]"]
    out += [f"{format_word(r.lhs)} -> {format_word(r.rhs)}" for r in S]
    return "\n".join(out) + "\n"


def parse_classes(text: str, alphabet: WeightedAlphabet, source: str | None = None) -> set:
    out = set()
    for no, line in _lines(text):
        try:
            out.add(alphabet.word(line))
        except ValueError as exc:
            raise FormatError(str(exc), no, source) from None
    return out


def emit_classes(words: Iterable[Sequence[str]]) -> str:
    return "".join(format_word(w) + "\n" for w in words)
