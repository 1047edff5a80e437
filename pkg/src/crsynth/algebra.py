"""Finite monoids given by multiplication tables, and the maps into them.

Elements are the integers ``0 .. size-1``. Everything here is small enough
to tabulate eagerly; all constructions iterate over whole tables.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .words import WeightedAlphabet, Word


class FiniteMonoid:
    """A finite monoid as a multiplication table.

    ``table[i][j]`` is the index of the product ``i * j``. Construction checks
    closure, the identity law and associativity.
    """

    def __init__(self, table, identity: int = 0, labels: Sequence[str] | None = None, check: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.size = len(self.table)
        self.identity = identity
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.size))
        if check:
            self._validate()

    def _validate(self):
        n = self.size
        if n == 0:
            raise ValueError("a monoid has at least one element")
        if len(self.labels) != n:
            raise ValueError("one label per element is required")
        arr = np.array(self.table, dtype=np.int64)
        if arr.shape != (n, n):
            raise ValueError("multiplication table must be square")
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("multiplication table is not closed")
        e = self.identity
        if not (0 <= e < n):
            raise ValueError("identity out of range")
        rng = np.arange(n)
        if not (np.array_equal(arr[e], rng) and np.array_equal(arr[:, e], rng)):
            raise ValueError(f"element {e} is not a two-sided identity")
        for i in range(n):
            # (i*j)*k versus i*(j*k) for all j, k
            if not np.array_equal(arr[arr[i]], arr[i][arr]):
                j, k = map(int, np.argwhere(arr[arr[i]] != arr[i][arr])[0])
                raise ValueError(f"table is not associative at ({i}, {j}, {k})")

    def __repr__(self):
        return f"FiniteMonoid(size={self.size})"

    def __len__(self):
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def product(self, xs: Iterable[int]) -> int:
        t = self.table
        acc = self.identity
        for x in xs:
            acc = t[acc][x]
        return acc

    def power(self, x: int, k: int) -> int:
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][x]
        return acc

    @cached_property
    def _inverses(self) -> dict:
        e = self.identity
        inv = {}
        for x in range(self.size):
            row = self.table[x]
            for y in range(self.size):
                if row[y] == e and self.table[y][x] == e:
                    inv[x] = y
                    break
        return inv

    def inverse(self, x: int) -> int:
        try:
            return self._inverses[x]
        except KeyError:
            raise ValueError(f"element {self.labels[x]} is not a unit") from None

    def order(self, x: int) -> int:
        """Least k >= 1 with x**k == identity (units only)."""
        self.inverse(x)
        k, acc = 1, x
        while acc != self.identity:
            acc = self.table[acc][x]
            k += 1
        return k

    def cyclic_subgroup(self, x: int) -> list[int]:
        out = [self.identity]
        acc = x
        while acc != self.identity:
            out.append(acc)
            acc = self.table[acc][x]
        return out


def monoid_from_generators(
    generators: Sequence[Hashable],
    multiply: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable,
    label: Callable[[Hashable], str] = str,
) -> tuple[FiniteMonoid, list, list[int]]:
    """Close a set of concrete generators under ``multiply``.

    Returns the monoid, the concrete element of every index (breadth-first
    order from the identity, generators tried in order) and the index of each
    generator.
    """
    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = multiply(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    table = [[index[multiply(x, y)] for y in elements] for x in elements]
    monoid = FiniteMonoid(table, 0, [label(x) for x in elements])
    return monoid, elements, [index[g] for g in generators]


def cyclic_group(n: int) -> FiniteMonoid:
    """Z/nZ with element k at index k."""
    return FiniteMonoid([[(i + j) % n for j in range(n)] for i in range(n)], 0, [str(i) for i in range(n)])


def permutation_group(generators: Sequence[Sequence[int]]) -> tuple[FiniteMonoid, list, list[int]]:
    """Group generated by permutations (tuples of images), acting on the right."""
    degree = len(generators[0])

    def compose(p, q):
        return tuple(q[p[i]] for i in range(degree))

    return monoid_from_generators([tuple(g) for g in generators], compose, tuple(range(degree)))


@dataclass(frozen=True)
class MonoidHom:
    """Homomorphism from the free monoid over ``source`` into ``target``."""

    source: WeightedAlphabet
    target: FiniteMonoid
    images: Mapping[str, int]

    def __post_init__(self):
        missing = [t for t in self.source if t not in self.images]
        if missing:
            raise ValueError(f"no image for letters {missing}")
        for t, x in self.images.items():
            if not 0 <= x < self.target.size:
                raise ValueError(f"image of {t!r} is not an element of the target")

    def __call__(self, word: Sequence[str]) -> int:
        return hom_apply(self, word)

    def restrict(self, tokens: Iterable[str]) -> "MonoidHom":
        sub = self.source.restrict(tokens)
        return MonoidHom(sub, self.target, {t: self.images[t] for t in sub})


def hom_apply(phi: MonoidHom, word: Sequence[str]) -> int:
    table = phi.target.table
    images = phi.images
    acc = phi.target.identity
    for t in word:
        try:
            acc = table[acc][images[t]]
        except KeyError:
            raise ValueError(f"letter {t!r} is not in the source alphabet") from None
    return acc


class Dfa:
    """Complete deterministic automaton over a weighted alphabet."""

    def __init__(self, states, initial, accepting, transitions: Mapping[tuple, Hashable], alphabet: WeightedAlphabet):
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")
        known = set(self.states)
        if initial not in known:
            raise ValueError(f"initial state {initial!r} is not declared")
        bad = [q for q in accepting if q not in known]
        if bad:
            raise ValueError(f"accepting states {bad} are not declared")
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.alphabet = alphabet
        self.transitions = dict(transitions)
        for (q, a), r in self.transitions.items():
            if q not in known or r not in known:
                raise ValueError(f"transition {q} --{a}--> {r} uses an undeclared state")
            if a not in alphabet:
                raise ValueError(f"transition {q} --{a}--> {r} uses an unknown token")
        for q in self.states:
            for a in alphabet:
                if (q, a) not in self.transitions:
                    raise ValueError(f"missing transition for state {q!r} and token {a!r}")

    def run(self, word: Sequence[str], start=None):
        q = self.initial if start is None else start
        for a in word:
            try:
                q = self.transitions[q, a]
            except KeyError:
                raise ValueError(f"letter {a!r} is not in the automaton alphabet") from None
        return q

    def accepts(self, word: Sequence[str]) -> bool:
        return self.run(word) in self.accepting


class TransitionMonoid(NamedTuple):
    monoid: FiniteMonoid
    hom: MonoidHom
    accepting: frozenset
    actions: list  # element index -> tuple of target state indices


def transition_monoid(dfa: Dfa) -> TransitionMonoid:
    """Monoid of state transformations induced by words, read left to right."""
    pos = {q: i for i, q in enumerate(dfa.states)}
    n = len(dfa.states)
    letters = [tuple(pos[dfa.transitions[q, a]] for q in dfa.states) for a in dfa.alphabet]

    def then(f, g):
        return tuple(g[f[i]] for i in range(n))

    def label(f):
        return "[" + " ".join(str(dfa.states[i]) for i in f) + "]"

    monoid, actions, gens = monoid_from_generators(letters, then, tuple(range(n)), label)
    hom = MonoidHom(dfa.alphabet, monoid, dict(zip(dfa.alphabet, gens)))
    init = pos[dfa.initial]
    acc = {pos[q] for q in dfa.accepting}
    accepting = frozenset(x for x, f in enumerate(actions) if f[init] in acc)
    return TransitionMonoid(monoid, hom, accepting, actions)


def is_unit(M: FiniteMonoid, x: int) -> bool:
    return x in M._inverses


def is_group(M: FiniteMonoid) -> bool:
    return len(M._inverses) == M.size


def exponent(G: FiniteMonoid) -> int:
    """Least n >= 1 with g**n == 1 for every g."""
    if not is_group(G):
        raise ValueError("exponent is only defined for groups")
    return reduce(lcm, (G.order(g) for g in G.elements), 1)


class ImageSubmonoid(NamedTuple):
    monoid: FiniteMonoid
    embed: tuple  # index in the image -> index in the original target
    hom: MonoidHom  # the same map, corestricted to the image


def image_submonoid(phi: MonoidHom) -> ImageSubmonoid:
    """Submonoid generated by the letter images, with the corestricted map."""
    M = phi.target
    elems = [M.identity]
    seen = {M.identity: 0}
    queue = deque(elems)
    gens = [phi.images[t] for t in phi.source]
    while queue:
        x = queue.popleft()
        for g in gens:
            y = M.mul(x, g)
            if y not in seen:
                seen[y] = len(elems)
                elems.append(y)
                queue.append(y)
    table = [[seen[M.mul(x, y)] for y in elems] for x in elems]
    sub = FiniteMonoid(table, 0, [M.labels[x] for x in elems], check=False)
    hom = MonoidHom(phi.source, sub, {t: seen[phi.images[t]] for t in phi.source})
    return ImageSubmonoid(sub, tuple(elems), hom)


@dataclass(frozen=True)
class LocalDivisor:
    """The monoid cM ∩ Mc with product xc ∘ cy = xcy and identity c."""

    base: FiniteMonoid
    c: int
    carrier: tuple  # base elements, increasing
    divisor: FiniteMonoid
    left_factor: dict = field(repr=False)  # carrier element u -> some x with x*c == u

    @property
    def embed(self) -> tuple:
        return self.carrier

    def position(self, base_element: int) -> int:
        return self.carrier.index(base_element)


def local_divisor(M: FiniteMonoid, c: int) -> LocalDivisor:
    t = M.table
    right = {t[x][c] for x in M.elements}  # Mc
    left = {t[c][y] for y in M.elements}  # cM
    carrier = tuple(sorted(right & left))
    pos = {u: i for i, u in enumerate(carrier)}
    lefts = {}
    for x in M.elements:
        u = t[x][c]
        if u in pos:
            lefts.setdefault(u, []).append(x)
    # xc ∘ v = x·v for any x with xc = u, since v = cy; check every choice agrees
    table = []
    for u in carrier:
        row = []
        for v in carrier:
            values = {t[x][v] for x in lefts[u]}
            if len(values) != 1:
                raise AssertionError(f"local product not well defined at ({u}, {v})")
            (w,) = values
            if w not in pos:
                raise AssertionError("local product leaves the carrier")
            row.append(pos[w])
        table.append(row)
    divisor = FiniteMonoid(table, pos[c], [M.labels[u] for u in carrier])
    return LocalDivisor(M, c, carrier, divisor, {u: lefts[u][0] for u in carrier})


def kernel_weight_gcd(phi: MonoidHom) -> int | None:
    """gcd of the weights of all nonempty words mapped to the identity.

    Uses potentials on the weighted Cayley graph of the generated subgroup:
    the gcd of all closed-walk weights at the identity equals the gcd of the
    edge defects ``pot(u) + |a| - pot(v)``. Returns None when the alphabet is
    empty (the kernel is just the empty word).
    """
    img = image_submonoid(phi)
    H, hom = img.monoid, img.hom
    if not is_group(H):
        raise ValueError("kernel_weight_gcd needs a group image")
    letters = [(hom.images[t], phi.source.letter_weight(t)) for t in phi.source]
    if not letters:
        return None
    pot = {H.identity: 0}
    queue = deque([H.identity])
    while queue:
        x = queue.popleft()
        for g, w in letters:
            y = H.mul(x, g)
            if y not in pot:
                pot[y] = pot[x] + w
                queue.append(y)
    g_all = 0
    for x in pot:
        for g, w in letters:
            g_all = gcd(g_all, abs(pot[x] + w - pot[H.mul(x, g)]))
    return g_all or None
