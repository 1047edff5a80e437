"""Systems for arbitrary finite monoids, and recognition of regular languages."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from ..algebra import Dfa, MonoidHom, image_submonoid, is_group, is_unit, local_divisor, transition_monoid
from ..errors import VerificationFailed
from ..rewriting import QuotientMonoid, SemiThueSystem, enumerate_irr, normal_form, quotient_monoid, verify_crs
from ..words import fmt
from .groups import _check_no_overlap, _checked, group_dispatch, group_system
from .lemmas import empty_system, extended_alphabet, lift_rules
from .options import SynthesisOptions
from .simple import simple_group_system


def monoid_system(phi: MonoidHom, opts: SynthesisOptions | None = None, depth: int = 0) -> SemiThueSystem:
    """Weighted Church-Rosser system of finite index through which phi
    factorizes.

    Group images go to the group constructions. Otherwise a letter c with
    non-unit image is split off, B = A - {c} is handled recursively, and the
    words IRR_R(B*)c become letters mapped into the local divisor at the
    image of c, which is strictly smaller than the image monoid.
    """
    opts = opts or SynthesisOptions()
    A = phi.source
    if len(A) == 0:
        return empty_system(A)
    img = image_submonoid(phi)
    N, hom = img.monoid, img.hom
    if is_group(N):
        return group_dispatch(phi, opts, depth)
    c = next(t for t in reversed(A.tokens) if not is_unit(N, hom.images[t]))
    B = A.restrict([t for t in A.tokens if t != c])
    opts.note(depth, f"non-unit letter {c}: |M|={len(N)}, |B|={len(B)}")
    R = monoid_system(phi.restrict(B.tokens), opts, depth + 1)
    irr = enumerate_irr(R, opts.max_irr)
    K, expansion = extended_alphabet([u + (c,) for u in irr], A.weight)
    ld = local_divisor(N, hom.images[c])
    pos = {x: i for i, x in enumerate(ld.carrier)}
    psi = MonoidHom(K, ld.divisor, {t: pos[hom((c,) + w)] for t, w in expansion.items()})
    opts.note(depth, f"local divisor at {c}: |K|={len(K)}, size {len(N)} -> {len(ld.divisor)}")
    T = monoid_system(psi, opts, depth + 1)
    lifted = lift_rules(T, c, expansion, A)
    _check_no_overlap(R, lifted)
    S = SemiThueSystem.canonical(A, list(R.rules) + list(lifted.rules))
    return _checked(S, phi, "monoid_system")


def synthesize(phi: MonoidHom, opts: SynthesisOptions | None = None) -> SemiThueSystem:
    """Entry point honouring ``opts.strategy`` at the top level."""
    opts = opts or SynthesisOptions()
    if opts.strategy == "simple":
        S = simple_group_system(phi, max_rules=opts.max_rules)
        opts.note(0, f"common-weight window: {len(S)} rules")
        return _checked(S, phi, "simple_group_system")
    if opts.strategy == "group":
        return group_system(phi, opts)
    return monoid_system(phi, opts)


@dataclass
class RecognizedLanguage:
    system: SemiThueSystem
    quotient: QuotientMonoid
    accepting_classes: frozenset
    source: Dfa
    path: list = field(default_factory=list)

    def accepts(self, word: Sequence[str]) -> bool:
        return self.quotient.index_of[normal_form(self.system, word)] in self.accepting_classes

    def accepting_forms(self) -> list:
        irr = self.quotient.irreducibles
        return [irr[i] for i in sorted(self.accepting_classes)]


def recognize(dfa: Dfa, opts: SynthesisOptions | None = None) -> RecognizedLanguage:
    """A system S and a set of S-classes whose union is the language of dfa.

    Agreement with the automaton is checked on every word up to
    ``opts.check_length`` (shortened if that would exceed
    ``opts.max_check_words``).
    """
    opts = opts or SynthesisOptions()
    tm = transition_monoid(dfa)
    S = synthesize(tm.hom, opts)
    Q = quotient_monoid(S, opts.max_irr)
    accepting = frozenset(i for i, w in enumerate(Q.irreducibles) if dfa.accepts(w))
    lang = RecognizedLanguage(S, Q, accepting, dfa, list(opts.trace))
    bad = find_disagreement(lang, opts.check_length, opts.max_check_words)
    if bad is not None:
        report = verify_crs(S, tm.hom)
        raise VerificationFailed(f"recognize: disagreement on {fmt(bad)}", report)
    return lang


def find_disagreement(lang: RecognizedLanguage, length: int, max_words: int | None = None):
    """First word (by length) where the system and the automaton disagree."""
    tokens = lang.system.alphabet.tokens
    total = 0
    for n in range(length + 1):
        total += len(tokens) ** n
        if max_words is not None and total > max_words:
            break
        for w in product(tokens, repeat=n):
            if lang.accepts(w) != lang.source.accepts(w):
                return w
    return None
