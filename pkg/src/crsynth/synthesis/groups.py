"""Weighted Church-Rosser systems for homomorphisms onto finite groups.

Letters of A are split into a distinguished letter c and the rest B. A
system R for B is built recursively, then the problem moves to the prefix
code K = IRR_R(B*)c, read as a new alphabet. Over K, short periodic words
are cut down by power rules and everything else is forced through marker
words (Omega) that are separated by a bounded amount of material.
"""

from __future__ import annotations

import logging
from bisect import insort
from collections import deque
from dataclasses import dataclass, field
from math import ceil

from ..algebra import FiniteMonoid, MonoidHom, exponent, image_submonoid, is_group
from ..errors import ConstructionError, GcdObstruction, ResourceCapExceeded, VerificationFailed
from ..rewriting import CrsReport, SemiThueSystem, enumerate_irr, find_invariance_violation, irr_is_finite, max_irr_weight, verify_crs
from ..words import WeightedAlphabet, Word, enumerate_words, is_factor, is_primitive, minimal_nonfactors
from .lemmas import base_single_letter, empty_system, extended_alphabet, lift_rules, pad_system, power_rules
from .options import SynthesisOptions
from .simple import simple_group_system

log = logging.getLogger(__name__)


@dataclass
class GroupConstructionState:
    """Everything computed before the marker rules are enumerated."""

    hom: MonoidHom  # A* onto the image group G
    n: int
    c: str
    B: WeightedAlphabet  # a0 first
    a0: str
    R: SemiThueSystem
    pad: int
    K: WeightedAlphabet
    expansion: dict  # K token -> word over A
    psi: MonoidHom  # K* -> G
    gammas: list  # K tokens
    v: dict  # element of G -> word over K
    exps: dict  # element of G -> exponents (n_0, ..., n_m)
    deltas: list
    t: int
    J: list
    omega: list  # in increasing order
    t_omega: int
    omega_weight_bound: int  # heaviest K-word avoiding Omega and the power rules
    T_delta: SemiThueSystem = field(repr=False, default=None)

    @property
    def group(self) -> FiniteMonoid:
        return self.hom.target

    @property
    def m(self) -> int:
        return len(self.gammas) - 1


def _require_group(phi: MonoidHom):
    img = image_submonoid(phi)
    if not is_group(img.monoid):
        raise ValueError("image is not a group")
    return img


def _ordered_products(G: FiniteMonoid, images, tail: int) -> set:
    acc = {G.identity}
    for g in images:
        cyc = G.cyclic_subgroup(g)
        acc = {G.mul(x, y) for x in acc for y in cyc}
    return {G.mul(x, tail) for x in acc}


def make_gammas(hom: MonoidHom, b_order, c: str, n: int, max_len: int = 10_000) -> list[Word]:
    """Words gamma_i = a_{i mod (s+1)}^(n + i div (s+1)) c over A.

    The sequence stops once gamma_{s+1} = a_0^(n+1) c exists, every image
    of a_j c has occurred, and every group element is a product
    g_0^{n_0} ... g_m^{n_m} g_0 with n_i >= 1, g_i the image of gamma_i.
    """
    if not b_order:
        raise ValueError("need at least one letter besides c")
    G = hom.target
    s1 = len(b_order)
    need = {hom((a, c)) for a in b_order}
    words, images = [], []
    i = 0
    while True:
        a = b_order[i % s1]
        w = (a,) * (n + i // s1) + (c,)
        words.append(w)
        images.append(hom(w))
        i += 1
        if i >= s1 + 1 and need <= set(images) and len(_ordered_products(G, images, images[0])) == len(G):
            return words
        if i > max_len:
            raise ResourceCapExceeded("make_gammas", "gamma sequence does not cover the group", length=i)


def make_normal_forms(G: FiniteMonoid, images, weights, n: int, a0_weight: int, balance: int) -> dict:
    """Exponents (n_0, ..., n_m) for each g with g_0^{n_0}...g_m^{n_m} g_0 = g.

    Picks the lightest exponents in [1, order] (lexicographically least on
    ties), then balances: while the weight gap is at least n*|a_0|, the
    heaviest forms get n more copies of gamma_0 and the others n more
    copies of gamma_balance. Both moves keep the image since g_i^n = 1.
    """
    best = {G.identity: (0, ())}
    for g, w in zip(images, weights):
        cyc = G.cyclic_subgroup(g)
        nxt: dict = {}
        for x, (wx, ex) in best.items():
            for k in range(1, len(cyc) + 1):
                y = G.mul(x, cyc[k % len(cyc)])
                cand = (wx + k * w, ex + (k,))
                if y not in nxt or cand < nxt[y]:
                    nxt[y] = cand
        best = nxt
    tail = images[0]
    exps = {}
    for x, (_, ex) in best.items():
        exps[G.mul(x, tail)] = list(ex)
    if len(exps) != len(G):
        raise ConstructionError("make_normal_forms", "gamma products do not cover the group")

    def weight(ex):
        return sum(k * w for k, w in zip(ex, weights)) + weights[0]

    while True:
        ws = {g: weight(ex) for g, ex in exps.items()}
        hi, lo = max(ws.values()), min(ws.values())
        if hi - lo < n * a0_weight:
            break
        for g, ex in exps.items():
            if ws[g] == hi:
                ex[0] += n
            else:
                ex[balance] += n
    return {g: tuple(ex) for g, ex in exps.items()}


def build_omega(J, gammas, K: WeightedAlphabet) -> list:
    """Markers in increasing order: gamma_m gamma_0 first, then those ending
    in gamma_0, then the rest, each block length-lex."""
    gset = set(gammas)
    omega = [
        w for w in J if w[0] not in gset or (len(w) == 2 and w[1] in gset and K.index(w[0]) > K.index(w[1]))
    ]
    first = (gammas[-1], gammas[0])
    if first not in omega:
        raise ConstructionError("build_omega", "gamma_m gamma_0 is not a marker", first)
    rest = [w for w in omega if w != first]
    ending = K.sorted(w for w in rest if len(w) >= 2 and w[-1] == gammas[0])
    others = K.sorted(w for w in rest if not (len(w) >= 2 and w[-1] == gammas[0]))
    return [first] + ending + others


def group_dispatch(phi: MonoidHom, opts: SynthesisOptions, depth: int = 0) -> SemiThueSystem:
    """Pick a construction for a homomorphism whose image is a group."""
    A = phi.source
    if len(A) == 0:
        return empty_system(A)
    if len(A) == 1:
        S = base_single_letter(phi)
        opts.note(depth, f"single letter {A.tokens[0]}: {len(S)} rule")
        return _checked(S, phi, "base_single_letter")
    if opts.strategy != "group":
        try:
            S = simple_group_system(phi, max_rules=opts.max_rules, reduced=True)
        except GcdObstruction as exc:
            opts.note(depth, f"common weight impossible (Z/{exc.prime}Z quotient), using markers")
        else:
            opts.note(depth, f"common-weight window over {len(A)} letters: {len(S)} rules")
            return _checked(S, phi, "simple_group_system")
    return group_system(phi, opts, depth)


def _checked(S: SemiThueSystem, phi: MonoidHom, stage: str, max_pairs=None) -> SemiThueSystem:
    report = verify_crs(S, phi, max_pairs)
    if not report.passed:
        raise VerificationFailed(stage, report)
    return S


def prepare_group_construction(phi: MonoidHom, opts: SynthesisOptions | None = None, depth: int = 0):
    """Compute the data preceding marker rule enumeration (|A| >= 2)."""
    opts = opts or SynthesisOptions()
    A = phi.source
    if len(A) < 2:
        raise ValueError("marker construction needs at least two letters")
    img = _require_group(phi)
    G, hom = img.monoid, img.hom
    n = exponent(G)
    c = A.tokens[-1]
    rest = A.tokens[:-1]
    a0 = min(rest, key=lambda t: (A.letter_weight(t), A.index(t)))
    B = A.restrict([a0] + [t for t in rest if t != a0])
    gamma_words = make_gammas(hom, B.tokens, c, n)
    opts.note(depth, f"markers over {len(A)} letters: c={c}, n={n}, |G|={len(G)}")

    R0 = group_dispatch(phi.restrict(B.tokens), opts, depth + 1)
    parts = [w[:-1] for w in gamma_words]
    d = 0
    while True:
        R = pad_system(R0, d, check=False, max_rules=opts.max_rules)
        if all(R.is_irreducible(u) for u in parts):
            break
        d += 1
    irr = enumerate_irr(R, opts.max_irr)
    K, expansion = extended_alphabet([u + (c,) for u in irr], A.weight)
    name = {w: t for t, w in expansion.items()}
    gammas = [name[w] for w in gamma_words]
    psi = MonoidHom(K, G, {t: hom(w) for t, w in expansion.items()})

    images = [psi.images[g] for g in gammas]
    gw = [K.letter_weight(g) for g in gammas]
    wa0 = A.letter_weight(a0)
    exps = make_normal_forms(G, images, gw, n, wa0, len(B))
    v = {}
    for g, ex in exps.items():
        word = ()
        for tok, k in zip(gammas, ex):
            word += (tok,) * k
        v[g] = word + (gammas[0],)
    _check_normal_forms(G, psi, v, gammas, K, n, wa0)

    short = [w for w in enumerate_words(K, n * wa0) if w]
    deltas = K.sorted(set(short) | {(t,) for t in K})
    dlen = max(len(x) for x in deltas)
    max_k, c_w = K.max_weight, A.letter_weight(c)
    vmax = max(K.weight(w) for w in v.values())
    prims = [x for x in deltas if is_primitive(x)]
    t = max(n, ceil(2 * n * max_k / c_w), dlen)
    if opts.t_policy == "formula":
        t = max(t, vmax + 1)
    else:
        # least t such that no normal form contains delta^(t+n)
        for w in v.values():
            for x in prims:
                k = 1
                while is_factor(x * k, w):
                    k += 1
                t = max(t, k - n)
    T_delta = power_rules(deltas, t, n, K)
    for g, w in v.items():
        for x in prims:
            if is_factor(x * (t + n), w):
                raise ConstructionError("choose t", "normal form contains a power", (g, x))

    J = minimal_nonfactors(deltas, K, max(n, dlen))
    if J and c_w * t < max(K.weight(w) for w in J):
        raise ConstructionError("choose t", "c^t lighter than a minimal non-factor")
    omega = build_omega(J, gammas, K)
    first = omega[0]
    for g, w in v.items():
        for x in omega[1:]:
            if is_factor(x, w):
                raise ConstructionError("build_omega", "normal form contains a marker", (g, x))

    t2 = (t + n + 2) * max_k
    t1 = (t + n - 1) * len(gammas) * max(gw) + 1 + t2
    t_omega = opts.t_omega or t1 * (2 + ceil((vmax + 1) / K.min_weight))
    avoid = SemiThueSystem(K, [(x, ()) for x in omega] + [(r.lhs, ()) for r in T_delta])
    bound = max_irr_weight(avoid)
    if bound is None:
        raise ConstructionError("markers", "infinitely many words avoid markers and powers")
    if bound >= t_omega:
        raise ConstructionError("markers", f"a word of weight {bound} avoids all markers, t_omega = {t_omega}")

    opts.note(
        depth,
        f"pad={d}, |K|={len(K)}, m={len(gammas) - 1}, "
        f"t={t}, |Delta|={len(deltas)}, |Omega|={len(omega)}, t_omega={t_omega}",
    )
    assert first == (gammas[-1], gammas[0])
    return GroupConstructionState(
        hom, n, c, B, a0, R, d, K, expansion, psi, gammas, v, exps, deltas, t, J, omega, t_omega, bound, T_delta
    )


def _check_normal_forms(G, psi, v, gammas, K, n, wa0):
    ranks = {g: K.index(g) for g in gammas}
    ws = []
    for g, w in v.items():
        if psi(w) != g:
            raise ConstructionError("make_normal_forms", "normal form has the wrong image", g)
        body = w[:-1]
        if w[0] != gammas[0] or w[-2:] != (gammas[-1], gammas[0]) or set(body) != set(gammas):
            raise ConstructionError("make_normal_forms", "normal form has the wrong shape", w)
        if any(ranks[x] > ranks[y] for x, y in zip(body, body[1:])):
            raise ConstructionError("make_normal_forms", "normal form letters out of order", w)
        if min(K.letter_weight(x) for x in w) <= n * wa0:
            raise ConstructionError("make_normal_forms", "normal form uses a light letter", w)
        ws.append(K.weight(w))
    if max(ws) - min(ws) >= n * wa0:
        raise ConstructionError("make_normal_forms", "weights not balanced", (min(ws), max(ws)))


class _Matcher:
    """Aho-Corasick automaton over integer letters reporting which patterns
    end at the current position."""

    def __init__(self, patterns, k: int):
        goto = [[-1] * k]
        out = [[]]
        for pid, p in enumerate(patterns):
            s = 0
            for a in p:
                if goto[s][a] == -1:
                    goto[s][a] = len(goto)
                    goto.append([-1] * k)
                    out.append([])
                s = goto[s][a]
            out[s].append(pid)
        fail = [0] * len(goto)
        queue = deque()
        for a in range(k):
            nxt = goto[0][a]
            if nxt == -1:
                goto[0][a] = 0
            else:
                queue.append(nxt)
        while queue:
            s = queue.popleft()
            if s:
                out[s] = out[s] + out[fail[s]]
            for a in range(k):
                nxt = goto[s][a]
                if nxt == -1:
                    goto[s][a] = goto[fail[s]][a]
                else:
                    fail[nxt] = goto[fail[s]][a] if s else 0
                    queue.append(nxt)
        self.goto = goto
        self.out = out


@dataclass
class MarkerRules:
    rules: list
    nodes: int
    truncated: bool  # some branch was cut by t_omega


def marker_rules(state: GroupConstructionState, t_omega: int, max_nodes: int, max_rules: int) -> MarkerRules:
    """Rules omega u omega -> omega v_g omega, g the image of u, with
    |v_g| < |u| <= t_omega, no marker above omega inside, and no proper
    factor that is itself such a left side or a power rule left side.

    Searches, per marker, all words starting with it that stay clear of
    every forbidden factor; each such word ending in a rule left side is
    emitted and not extended.
    """
    K = state.K
    tokens = K.tokens
    k = len(tokens)
    idx = {t: i for i, t in enumerate(tokens)}
    wt = [K.letter_weight(t) for t in tokens]
    G = state.group
    table = G.table
    img = [state.psi.images[t] for t in tokens]
    inv = [G.inverse(x) for x in G.elements]
    vw = [0] * len(G)
    for g, w in state.v.items():
        vw[g] = K.weight(w)

    omegas = [tuple(idx[t] for t in w) for w in state.omega]
    no = len(omegas)
    deltas = [tuple(idx[t] for t in r.lhs) for r in state.T_delta]
    m = _Matcher(omegas + deltas, k)
    goto = m.goto
    delta_hit = [any(p >= no for p in o) for o in m.out]
    omega_end = [[p for p in o if p < no] for o in m.out]
    olen = [len(w) for w in omegas]

    rules = []
    nodes = 0
    truncated = False
    ident = G.identity
    for r, root in enumerate(omegas):
        word = []
        W = [0]
        P = [ident]
        st = [0]
        ok = True
        for a in root:
            s = goto[st[-1]][a]
            if delta_hit[s]:
                ok = False
                break
            word.append(a)
            W.append(W[-1] + wt[a])
            P.append(table[P[-1]][img[a]])
            st.append(s)
        if not ok:
            continue
        occ = [(0, len(root), r)]
        limit = t_omega + 2 * W[-1]
        stack = [0]
        undo = []
        while stack:
            a = stack[-1]
            if a == k:
                stack.pop()
                if undo:
                    for item in undo.pop():
                        occ.remove(item)
                    word.pop()
                    W.pop()
                    P.pop()
                    st.pop()
                continue
            stack[-1] = a + 1
            nodes += 1
            if nodes > max_nodes:
                raise ResourceCapExceeded(
                    "marker rules", "search node budget exhausted",
                    nodes=nodes, rules=len(rules), marker=r, markers=no, t_omega=t_omega,
                )
            s = goto[st[-1]][a]
            if delta_hit[s]:
                continue
            ends = omega_end[s]
            if any(o > r for o in ends):
                continue
            wnew = W[-1] + wt[a]
            if wnew > limit:
                truncated = True
                continue
            e = len(word) + 1
            word.append(a)
            W.append(wnew)
            P.append(table[P[-1]][img[a]])
            st.append(s)
            added = []
            for o in ends:
                item = (e - olen[o], e, o)
                insort(occ, item)
                added.append(item)

            proper = False
            whole = None
            for qs0, _, o in added:
                mx = -1
                for j in range(len(occ) - 1, -1, -1):
                    qs, qe, qo = occ[j]
                    if qo > mx:
                        mx = qo
                    if mx > o:
                        break
                    if qo == o and qe <= qs0:
                        uw = W[qs0] - W[qe]
                        if uw > t_omega:
                            break
                        g = table[inv[P[qe]]][P[qs0]]
                        if uw > vw[g]:
                            if qs == 0:
                                whole = g
                            else:
                                proper = True
                            break
                if proper:
                    break

            if proper or whole is not None:
                if not proper:
                    lhs = tuple(tokens[x] for x in word)
                    rw = state.omega[r]
                    rules.append((lhs, rw + state.v[whole] + rw))
                    if len(rules) > max_rules:
                        raise ResourceCapExceeded("marker rules", "rule cap exceeded", rules=len(rules), cap=max_rules)
                for item in added:
                    occ.remove(item)
                word.pop()
                W.pop()
                P.pop()
                st.pop()
                continue
            undo.append(added)
            stack.append(0)
    return MarkerRules(rules, nodes, truncated)


def group_system(phi: MonoidHom, opts: SynthesisOptions | None = None, depth: int = 0) -> SemiThueSystem:
    """Weighted Church-Rosser system of finite index through which phi
    factorizes; the image of phi must be a group."""
    opts = opts or SynthesisOptions()
    A = phi.source
    _require_group(phi)
    if len(A) == 0:
        return empty_system(A)
    if len(A) == 1:
        S = base_single_letter(phi)
        opts.note(depth, f"single letter {A.tokens[0]}: {len(S)} rule")
        return _checked(S, phi, "base_single_letter")
    state = prepare_group_construction(phi, opts, depth)
    t_omega = state.t_omega
    for attempt in range(opts.retries + 1):
        found = marker_rules(state, t_omega, opts.max_nodes, opts.max_rules)
        T = SemiThueSystem.canonical(state.K, list(state.T_delta.rules) + found.rules)
        report = verify_crs(T, state.psi) if irr_is_finite(T) else _infinite_report(T, state.psi)
        opts.note(depth + 1, f"t_omega={t_omega}: {len(found.rules)} marker rules, {found.nodes} nodes, {report.summary()}")
        if report.passed:
            break
        if not found.truncated or attempt == opts.retries:
            raise VerificationFailed("marker system", report)
        t_omega *= 2
    state.t_omega = t_omega
    lifted = lift_rules(T, state.c, state.expansion, A)
    _check_no_overlap(state.R, lifted)
    S = SemiThueSystem.canonical(A, list(state.R.rules) + list(lifted.rules))
    return _checked(S, phi, "group_system")


def _infinite_report(T: SemiThueSystem, psi: MonoidHom) -> CrsReport:
    """Report for a system already known to have infinite index; the
    costly confluence check is skipped since the verdict is settled."""
    wv = T.weight_violation
    iv = find_invariance_violation(T, psi)
    return CrsReport(wv is None, None, False, None, iv is None, len(T), wv, None, iv)


def _overlaps(u: Word, v: Word) -> bool:
    """True if u is a factor of v or a proper suffix of one is a prefix of
    the other."""
    if is_factor(u, v) or is_factor(v, u):
        return True
    for i in range(1, min(len(u), len(v))):
        if u[-i:] == v[:i] or v[-i:] == u[:i]:
            return True
    return False


def _check_no_overlap(R: SemiThueSystem, T: SemiThueSystem):
    for r in R:
        for q in T:
            if _overlaps(r.lhs, q.lhs):
                raise ConstructionError("lift", "left sides of R and T' overlap", (r, q))
