"""Semi-Thue systems: rewriting, confluence checks and irreducible words."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .algebra import FiniteMonoid, MonoidHom, hom_apply
from .errors import ResourceCapExceeded
from .words import EMPTY, WeightedAlphabet, Word, fmt

DEFAULT_IRR_CAP = 10**6


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if not self.lhs:
            raise ValueError("left-hand side must be nonempty")

    def __iter__(self):
        return iter((self.lhs, self.rhs))

    def __str__(self):
        return f"{fmt(self.lhs, ' ')} -> {fmt(self.rhs, ' ')}"


class _Trie:
    """Trie over left-hand sides with Aho-Corasick failure links."""

    def __init__(self, rules: Sequence[Rule], alphabet: WeightedAlphabet):
        children = [{}]
        terminal = [[]]
        for i, rule in enumerate(rules):
            node = 0
            for a in rule.lhs:
                nxt = children[node].get(a)
                if nxt is None:
                    nxt = len(children)
                    children[node][a] = nxt
                    children.append({})
                    terminal.append([])
                node = nxt
            terminal[node].append(i)
        self.children = children
        self.terminal = terminal
        self.alphabet = alphabet

    @cached_property
    def automaton(self):
        """(goto, dead) where goto[s][a] is the Aho-Corasick transition and
        dead[s] means some left-hand side is a suffix of the input read."""
        children, terminal = self.children, self.terminal
        n = len(children)
        fail = [0] * n
        dead = [bool(terminal[s]) for s in range(n)]
        goto = [None] * n
        goto[0] = {a: children[0].get(a, 0) for a in self.alphabet}
        order = deque(children[0].values())
        for s in order:
            fail[s] = 0
        while order:
            s = order.popleft()
            dead[s] = dead[s] or dead[fail[s]]
            fs = goto[fail[s]]
            row = dict(fs)
            for a, nxt in children[s].items():
                row[a] = nxt
                fail[nxt] = fs[a] if s != 0 else 0
                order.append(nxt)
            goto[s] = row
        return goto, dead

    def match_at(self, word: Sequence, i: int):
        """Rule index of the shortest left-hand side starting at i (lowest
        rule index on ties), or None."""
        children, terminal = self.children, self.terminal
        node = 0
        for j in range(i, len(word)):
            node = children[node].get(word[j])
            if node is None:
                return None
            if terminal[node]:
                return terminal[node][0]
        return None

    def all_matches_at(self, word: Sequence, i: int):
        children, terminal = self.children, self.terminal
        node = 0
        out = []
        for j in range(i, len(word)):
            node = children[node].get(word[j])
            if node is None:
                break
            out.extend(terminal[node])
        return out


class SemiThueSystem:
    """Finite, ordered set of rules over a weighted alphabet."""

    def __init__(self, alphabet: WeightedAlphabet, rules: Iterable = ()):
        self.alphabet = alphabet
        seen = set()
        out = []
        for r in rules:
            r = r if isinstance(r, Rule) else Rule(*r)
            alphabet.check(r.lhs)
            alphabet.check(r.rhs)
            if r not in seen:
                seen.add(r)
                out.append(r)
        self.rules = tuple(out)

    @classmethod
    def canonical(cls, alphabet: WeightedAlphabet, rules: Iterable) -> "SemiThueSystem":
        """System with rules sorted by lhs, then rhs, length-lexicographically."""
        rules = [r if isinstance(r, Rule) else Rule(*r) for r in rules]
        rules = sorted(set(rules), key=lambda r: (alphabet.key(r.lhs), alphabet.key(r.rhs)))
        return cls(alphabet, rules)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __eq__(self, other):
        if not isinstance(other, SemiThueSystem):
            return NotImplemented
        return self.alphabet == other.alphabet and self.rules == other.rules

    def __repr__(self):
        return f"SemiThueSystem({len(self.rules)} rules over {len(self.alphabet)} letters)"

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)

    @cached_property
    def trie(self) -> _Trie:
        return _Trie(self.rules, self.alphabet)

    @cached_property
    def max_lhs(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    @cached_property
    def weight_violation(self) -> Rule | None:
        w = self.alphabet.weight
        return next((r for r in self.rules if w(r.lhs) <= w(r.rhs)), None)

    def is_irreducible(self, word: Sequence) -> bool:
        trie = self.trie
        return all(trie.match_at(word, i) is None for i in range(len(word)))


def is_weight_reducing(S: SemiThueSystem) -> bool:
    return S.weight_violation is None


def _require_terminating(S: SemiThueSystem):
    bad = S.weight_violation
    if bad is not None:
        raise ValueError(f"system is not weight-reducing: rule {bad}")


def normalize(S: SemiThueSystem, word: Sequence, trace: bool = False):
    """Rewrite to an irreducible word.

    Always rewrites the redex with the leftmost start, then the shortest
    lhs, then the lowest rule index. Returns ``(normal_form, steps)``, or
    ``(normal_form, [(position, rule_index), ...])`` when ``trace`` is set.
    """
    _require_terminating(S)
    S.alphabet.check(word)
    w = list(word)
    trie = S.trie
    rules = S.rules
    back = max(S.max_lhs - 1, 0)
    log = []
    steps = 0
    i = 0
    while i < len(w):
        k = trie.match_at(w, i)
        if k is None:
            i += 1
            continue
        rule = rules[k]
        w[i:i + len(rule.lhs)] = rule.rhs
        steps += 1
        if trace:
            log.append((i, k))
        # redexes starting before i - back cannot involve the rewritten span
        i = max(0, i - back)
    return (tuple(w), log) if trace else (tuple(w), steps)


def normal_form(S: SemiThueSystem, word: Sequence) -> Word:
    return normalize(S, word)[0]


def normalize_random(S: SemiThueSystem, word: Sequence, rng: random.Random) -> tuple[Word, int]:
    """Rewrite choosing a uniformly random redex at every step."""
    _require_terminating(S)
    w = tuple(word)
    trie = S.trie
    steps = 0
    while True:
        redexes = [(i, k) for i in range(len(w)) for k in trie.all_matches_at(w, i)]
        if not redexes:
            return w, steps
        i, k = rng.choice(redexes)
        rule = S.rules[k]
        w = w[:i] + rule.rhs + w[i + len(rule.lhs):]
        steps += 1


@dataclass(frozen=True)
class CriticalPair:
    peak: Word
    left: Word
    right: Word
    first: int  # rule applied at position 0 of the peak
    second: int
    offset: int  # start of the second rule's lhs in the peak
    kind: str  # "overlap" or "containment"

    def __str__(self):
        return (
            f"peak {fmt(self.peak, ' ')} ({self.kind}, rules {self.first}/{self.second} at {self.offset}): "
            f"{fmt(self.left, ' ')} | {fmt(self.right, ' ')}"
        )


def critical_pairs(S: SemiThueSystem) -> Iterable[CriticalPair]:
    """All overlap and containment peaks between left-hand sides."""
    rules = S.rules
    prefixes = {}
    for j, r in enumerate(rules):
        for k in range(1, len(r.lhs)):
            prefixes.setdefault(r.lhs[:k], []).append(j)
    trie = S.trie
    for i, r1 in enumerate(rules):
        l1, r1r = r1.lhs, r1.rhs
        for k in range(1, len(l1)):
            for j in prefixes.get(l1[-k:], ()):
                l2 = rules[j].lhs
                peak = l1 + l2[k:]
                yield CriticalPair(peak, r1r + l2[k:], l1[:-k] + rules[j].rhs, i, j, len(l1) - k, "overlap")
        for p in range(len(l1)):
            for j in trie.all_matches_at(l1, p):
                if j == i and p == 0:
                    continue
                l2 = rules[j].lhs
                right = l1[:p] + rules[j].rhs + l1[p + len(l2):]
                yield CriticalPair(l1, r1r, right, i, j, p, "containment")


def find_nonjoinable(S: SemiThueSystem, max_pairs: int | None = None) -> CriticalPair | None:
    _require_terminating(S)
    # peaks repeat the same few words many times over
    cache = {}

    def nf(w):
        r = cache.get(w)
        if r is None:
            r = cache[w] = normal_form(S, w)
        return r

    for count, cp in enumerate(critical_pairs(S)):
        if max_pairs is not None and count >= max_pairs:
            raise ResourceCapExceeded("confluence", "too many critical pairs", max_pairs=max_pairs)
        if cp.left != cp.right and nf(cp.left) != nf(cp.right):
            return cp
    return None


def is_locally_confluent(S: SemiThueSystem) -> bool:
    """Every critical pair joins; with weight reduction this is confluence."""
    return find_nonjoinable(S) is None


def _live_graph(S: SemiThueSystem):
    goto, dead = S.trie.automaton
    return goto, dead


def _find_cycle(S: SemiThueSystem) -> bool:
    goto, dead = _live_graph(S)
    colour = {0: 1}
    stack = [(0, iter(goto[0].values()))]
    while stack:
        s, it = stack[-1]
        for t in it:
            if dead[t]:
                continue
            c = colour.get(t, 0)
            if c == 1:
                return True
            if c == 0:
                colour[t] = 1
                stack.append((t, iter(goto[t].values())))
                break
        else:
            colour[s] = 2
            stack.pop()
    return False


def irr_is_finite(S: SemiThueSystem) -> bool:
    """True iff only finitely many words avoid every left-hand side."""
    return not _find_cycle(S)


def count_irr(S: SemiThueSystem) -> int | None:
    """Number of irreducible words (the index when S is confluent), or None
    if infinite. Counts paths in the factor-avoidance automaton."""
    if _find_cycle(S):
        return None
    goto, dead = _live_graph(S)
    count = {}
    stack = [(0, False)]
    while stack:
        s, done = stack.pop()
        if done:
            count[s] = 1 + sum(count[t] for t in goto[s].values() if not dead[t])
            continue
        if s in count:
            continue
        stack.append((s, True))
        stack.extend((t, False) for t in goto[s].values() if not dead[t] and t not in count)
    return count[0]


def max_irr_weight(S: SemiThueSystem) -> int | None:
    """Largest weight of an irreducible word, or None if there are
    infinitely many."""
    if _find_cycle(S):
        return None
    goto, dead = _live_graph(S)
    weights = S.alphabet.items()
    best = {}
    stack = [(0, False)]
    while stack:
        s, done = stack.pop()
        if done:
            best[s] = max((w + best[goto[s][a]] for a, w in weights if not dead[goto[s][a]]), default=0)
            continue
        if s in best:
            continue
        stack.append((s, True))
        stack.extend((t, False) for t in goto[s].values() if not dead[t] and t not in best)
    return best[0]


def enumerate_irr(S: SemiThueSystem, cap: int = DEFAULT_IRR_CAP) -> list[Word]:
    """Irreducible words in length-lexicographic order."""
    if _find_cycle(S):
        raise ValueError("the system has infinitely many irreducible words")
    goto, dead = _live_graph(S)
    tokens = S.alphabet.tokens
    out = []
    level = [(EMPTY, 0)]
    while level:
        out.extend(w for w, _ in level)
        if len(out) > cap:
            raise ResourceCapExceeded("enumerate_irr", "irreducible word cap exceeded", cap=cap, found=len(out))
        nxt = []
        for w, s in level:
            row = goto[s]
            for a in tokens:
                t = row[a]
                if not dead[t]:
                    nxt.append((w + (a,), t))
        level = nxt
    return out


@dataclass(frozen=True)
class QuotientMonoid:
    system: SemiThueSystem
    irreducibles: tuple
    monoid: FiniteMonoid
    index_of: dict = field(repr=False)

    def classify(self, word: Sequence) -> int:
        return self.index_of[normal_form(self.system, word)]


def quotient_monoid(S: SemiThueSystem, cap: int = DEFAULT_IRR_CAP) -> QuotientMonoid:
    """The monoid of congruence classes, one per irreducible word."""
    bad = S.weight_violation
    if bad is not None:
        raise ValueError(f"not weight-reducing: {bad}")
    cp = find_nonjoinable(S)
    if cp is not None:
        raise ValueError(f"not confluent: {cp}")
    if not irr_is_finite(S):
        raise ValueError("infinite index")
    irr = enumerate_irr(S, cap)
    index = {w: i for i, w in enumerate(irr)}
    table = [[index[normal_form(S, u + v)] for v in irr] for u in irr]
    monoid = FiniteMonoid(table, index[EMPTY], [fmt(w) for w in irr])
    return QuotientMonoid(S, tuple(irr), monoid, index)


def find_invariance_violation(S: SemiThueSystem, phi: MonoidHom) -> Rule | None:
    if S.alphabet != phi.source:
        raise ValueError("system and homomorphism use different alphabets")
    return next((r for r in S.rules if hom_apply(phi, r.lhs) != hom_apply(phi, r.rhs)), None)


def rule_invariance(S: SemiThueSystem, phi: MonoidHom) -> bool:
    """phi(lhs) == phi(rhs) for every rule, i.e. phi factorizes through S."""
    return find_invariance_violation(S, phi) is None


@dataclass
class CrsReport:
    weight_reducing: bool
    confluent: bool | None
    finite: bool
    index: int | None
    invariant: bool | None
    rules: int
    weight_witness: Rule | None = None
    confluence_witness: CriticalPair | None = None
    invariance_witness: Rule | None = None

    @property
    def passed(self) -> bool:
        return self.weight_reducing and bool(self.confluent) and self.finite and self.invariant is not False

    def summary(self) -> str:
        parts = []
        if not self.weight_reducing:
            parts.append(f"not weight-reducing ({self.weight_witness})")
        if self.confluent is False:
            parts.append(f"not confluent ({self.confluence_witness})")
        if not self.finite:
            parts.append("infinite index")
        if self.invariant is False:
            parts.append(f"not invariant ({self.invariance_witness})")
        return "; ".join(parts) or f"ok, index {self.index}"

    def lines(self) -> list[str]:
        def verdict(v):
            return "n/a" if v is None else ("pass" if v else "fail")

        out = [
            f"rules: {self.rules}",
            f"weight_reducing: {verdict(self.weight_reducing)}",
            f"locally_confluent: {verdict(self.confluent)}",
            f"finite_index: {verdict(self.finite)}",
            f"index: {self.index if self.index is not None else 'infinite'}",
            f"invariant: {verdict(self.invariant)}",
        ]
        if self.weight_witness:
            out.append(f"weight_witness: {self.weight_witness}")
        if self.confluence_witness:
            out.append(f"confluence_witness: {self.confluence_witness}")
        if self.invariance_witness:
            out.append(f"invariance_witness: {self.invariance_witness}")
        out.append(f"verdict: {'pass' if self.passed else 'fail'}")
        return out


def verify_crs(S: SemiThueSystem, phi: MonoidHom | None = None, max_pairs: int | None = None) -> CrsReport:
    """Check weight reduction, local confluence, finite index and (when phi
    is given) that phi factorizes through S."""
    wv = S.weight_violation
    cp = None
    confluent = None
    if wv is None:
        cp = find_nonjoinable(S, max_pairs)
        confluent = cp is None
    index = count_irr(S)
    inv = None
    iv = None
    if phi is not None:
        iv = find_invariance_violation(S, phi)
        inv = iv is None
    return CrsReport(wv is None, confluent, index is not None, index, inv, len(S), wv, cp, iv)
