"""Groups that admit representatives of one common weight."""

from __future__ import annotations

from math import gcd
from typing import Mapping, Sequence

from ..algebra import MonoidHom, image_submonoid, is_group, kernel_weight_gcd
from ..errors import GcdObstruction, ResourceCapExceeded
from ..rewriting import SemiThueSystem
from ..words import WeightedAlphabet, Word, enumerate_words
from .lemmas import empty_system


def _smallest_prime(n: int) -> int:
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


def common_weight_representatives(phi: MonoidHom, max_weight: int = 10_000) -> tuple[int, dict]:
    """Smallest d such that every element of the image has a word of weight
    d, together with the length-lex least such word for each element.

    Keys of the returned dict are indices in the image group.
    """
    img = image_submonoid(phi)
    G, hom = img.monoid, img.hom
    A = phi.source
    letters = [(t, A.letter_weight(t), hom.images[t]) for t in A]
    key = A.key
    # best[w][g]: length-lex least word of weight w mapping to g
    best: list[dict] = [{G.identity: ()}]
    w = 0
    while True:
        if len(best[w]) == len(G):
            return w, best[w]
        w += 1
        if w > max_weight:
            raise ResourceCapExceeded("simple_group_system", "no common weight found", max_weight=max_weight)
        row: dict = {}
        for t, wt, g in letters:
            if wt > w:
                continue
            for x, u in best[w - wt].items():
                y = G.mul(x, g)
                cand = u + (t,)
                if y not in row or key(cand) < key(row[y]):
                    row[y] = cand
        best.append(row)


def simple_group_system(
    phi: MonoidHom,
    representatives: Mapping[int, Sequence[str]] | None = None,
    max_rules: int | None = None,
    reduced: bool = False,
) -> SemiThueSystem:
    """All words of weight in (d, d + max letter weight] rewrite to the
    chosen representative of their image; representatives all weigh d.

    The image of ``phi`` must be a group. Raises GcdObstruction when no
    common weight exists. ``representatives`` maps elements of the target
    of ``phi`` to words; by default the length-lex least words of the
    smallest common weight are used.

    With ``reduced`` only the window words whose proper factors all weigh
    at most d are kept. The dropped rules are redundant: irreducible words
    and the congruence stay the same, and the rule count is bounded by the
    number of light words times the alphabet size.
    """
    A = phi.source
    if len(A) == 0:
        return empty_system(A)
    img = image_submonoid(phi)
    if not is_group(img.monoid):
        raise ValueError("image is not a group")
    p = kernel_weight_gcd(phi)
    g0 = 0
    for t in A:
        g0 = gcd(g0, A.letter_weight(t))
    if p != g0:
        raise GcdObstruction(p, _smallest_prime(p // g0))
    G, hom = img.monoid, img.hom
    if representatives is None:
        d, reps = common_weight_representatives(phi)
    else:
        back = {x: i for i, x in enumerate(img.embed)}
        reps = {}
        for x, u in representatives.items():
            if x not in back:
                raise ValueError(f"element {x} is not in the image")
            u = A.check(u)
            if phi(u) != x:
                raise ValueError(f"representative {u!r} does not map to {x}")
            reps[back[x]] = u
        if len(reps) != len(G):
            raise ValueError("need exactly one representative per image element")
        weights = {A.weight(u) for u in reps.values()}
        if len(weights) != 1:
            raise ValueError(f"representatives have different weights {sorted(weights)}")
        (d,) = weights
    if reduced:
        # w = u a with u light and w heavy; w[1:] light makes every proper factor light
        window = (
            w
            for w in (u + (a,) for u in enumerate_words(A, d) for a in A.tokens)
            if A.weight(w) > d and A.weight(w[1:]) <= d
        )
    else:
        window = (w for w in enumerate_words(A, d + A.max_weight) if A.weight(w) > d)
    rules = []
    for w in window:
        rules.append((w, reps[hom(w)]))
        if max_rules is not None and len(rules) > max_rules:
            raise ResourceCapExceeded("simple_group_system", "too many rules", cap=max_rules)
    return SemiThueSystem.canonical(A, rules)
