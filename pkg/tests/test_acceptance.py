"""End-to-end acceptance checks. Each test carries a ``criterion`` marker and
the run ends with one PASS/FAIL line per criterion."""

import random
import time
from itertools import product
from pathlib import Path

import pytest

from conftest import cyclic_hom, one_zero, s3_hom
from crsynth import MonoidHom, ResourceCapExceeded, SemiThueSystem, SynthesisOptions, WeightedAlphabet
from crsynth.algebra import cyclic_group, is_unit, local_divisor, transition_monoid
from crsynth.io import parse_alphabet, parse_dfa
from crsynth.rewriting import (
    critical_pairs,
    enumerate_irr,
    find_nonjoinable,
    normal_form,
    normalize,
    normalize_random,
    quotient_monoid,
    verify_crs,
)
from crsynth.synthesis import (
    base_single_letter,
    group_system,
    monoid_system,
    pad_system,
    power_rules,
    recognize,
    simple_group_system,
)
from crsynth.words import are_conjugate, minimal_nonfactors
from oracles import minimal_nonfactors as brute_nonfactors
from oracles import words_upto

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def load_dfa(name, alphabet):
    A = parse_alphabet((SAMPLES / alphabet).read_text())
    return parse_dfa((SAMPLES / name).read_text(), A)


def all_words(tokens, n):
    return list(words_upto(tokens, n))


@pytest.mark.criterion(1, "S3 common-weight window: 16 rules, index 15")
def test_s3_window(record_property):
    phi = s3_hom()
    # rho^3, rho tau^2, tau rho tau, tau^3, rho^2 tau, tau rho^2
    words = ["rrr", "rtt", "trt", "ttt", "rrt", "trr"]
    reps = {phi(tuple(w)): tuple(w) for w in words}
    assert len(reps) == 6
    start = time.perf_counter()
    S = simple_group_system(phi, reps)
    report = verify_crs(S, phi)
    Q = quotient_monoid(S)
    elapsed = time.perf_counter() - start
    record_property("rules", len(S))
    record_property("index", report.index)
    record_property("seconds", f"{elapsed:.3f}")
    assert report.passed
    assert len(S) == 16
    assert report.index == 15
    assert len(Q.monoid) == 15
    assert {S.alphabet.weight(u) for u in reps.values()} == {3}
    assert elapsed < 1.0


@pytest.mark.criterion(2, "single letter onto Z/n: {c^n -> eps}, index n")
def test_single_letter():
    start = time.perf_counter()
    for n in range(1, 7):
        phi = cyclic_hom(n, {"c": 1})
        S = base_single_letter(phi)
        assert [(r.lhs, r.rhs) for r in S] == [(("c",) * n, ())]
        report = verify_crs(S, phi)
        assert report.passed
        assert report.index == n
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(3, "marker construction for {a, c} onto Z/2, parity agreement to length 12")
def test_marker_construction_parity(record_property):
    phi = cyclic_hom(2, {"a": 1, "c": 1})
    opts = SynthesisOptions(strategy="group", max_rules=10**7, max_nodes=2 * 10**8, retries=1)
    start = time.perf_counter()
    try:
        S = group_system(phi, opts)
    except ResourceCapExceeded as exc:
        for line in opts.trace:
            record_property("path", line)
        record_property("stage", exc.stage)
        record_property("details", exc.details)
        record_property("seconds", f"{time.perf_counter() - start:.1f}")
        pytest.fail(f"cap exceeded: {exc}")
    elapsed = time.perf_counter() - start
    record_property("rules", len(S))
    record_property("seconds", f"{elapsed:.1f}")
    report = verify_crs(S, phi)
    assert report.passed, report.summary()
    dfa = load_dfa("parity.dfa", "ac.alphabet")
    Q = quotient_monoid(S)
    accepting = {i for i, w in enumerate(Q.irreducibles) if dfa.accepts(w)}
    bad = [w for w in all_words("ac", 12) if (Q.classify(w) in accepting) != dfa.accepts(w)]
    assert bad == []
    assert elapsed < 600


@pytest.mark.criterion(4, "monoid construction: {1,0} and (ab)*, agreement to length 10")
def test_monoid_construction():
    A = WeightedAlphabet.unit("ab")
    M = one_zero()
    phi = MonoidHom(A, M, {"a": 1, "b": 0})
    S = monoid_system(phi)
    assert verify_crs(S, phi).passed
    for w in all_words("ab", 10):
        assert phi(normal_form(S, w)) == phi(w)

    for name in ("contains_a.dfa", "abstar.dfa"):
        dfa = load_dfa(name, "ab.alphabet")
        lang = recognize(dfa, SynthesisOptions(check_length=0))
        assert verify_crs(lang.system, transition_monoid(dfa).hom).passed
        for w in all_words("ab", 10):
            assert lang.accepts(w) == dfa.accepts(w), w


def _padding_cases():
    A1 = WeightedAlphabet.unit("a")
    yield "aa->a", SemiThueSystem(A1, [(("a", "a"), ("a",))]), None
    A2 = WeightedAlphabet.unit("ab")
    yield "b->eps, aa->a", SemiThueSystem(A2, [(("b",), ()), (("a", "a"), ("a",))]), MonoidHom(A2, one_zero(), {"a": 1, "b": 0})
    phi = s3_hom()
    reps = {phi(tuple(w)): tuple(w) for w in ["rrr", "rtt", "trt", "ttt", "rrt", "trr"]}
    yield "S3 window", simple_group_system(phi, reps), phi


@pytest.mark.criterion(5, "padding: irreducible words are A^<=2d and A^d IRR A^d")
def test_padding():
    for name, S, phi in _padding_cases():
        tokens = S.alphabet.tokens
        irr = set(enumerate_irr(S))
        for d in (1, 2):
            Sd = pad_system(S, d)
            assert verify_crs(Sd, phi).passed, (name, d)
            short = set(words_upto(tokens, 2 * d))
            assert all(Sd.is_irreducible(w) for w in short)
            pads = list(product(tokens, repeat=d))
            expected = short | {u + w + v for u in pads for w in irr for v in pads}
            assert set(enumerate_irr(Sd)) == expected, (name, d)


@pytest.mark.criterion(6, "power rules over {ab, ba, a, b} with t=4, n=2 are confluent")
def test_power_rules(record_property):
    A = WeightedAlphabet.unit("ab")
    deltas = [tuple("ab"), tuple("ba"), ("a",), ("b",)]
    S = power_rules(deltas, 4, 2, A)
    assert len(S) == 4
    pairs = list(critical_pairs(S))
    conjugate = 0
    for cp in pairs:
        assert normal_form(S, cp.left) == normal_form(S, cp.right), str(cp)
        if are_conjugate(S.rules[cp.first].lhs, S.rules[cp.second].lhs) and cp.first != cp.second:
            conjugate += 1
    assert find_nonjoinable(S) is None
    assert conjugate > 0
    record_property("critical_pairs", len(pairs))
    record_property("conjugate_peaks", conjugate)


@pytest.mark.criterion(7, "minimal non-factors agree with brute force")
def test_minimal_nonfactors():
    A = WeightedAlphabet.unit("ab")
    cases = [
        ([("a",), ("b",)], 1),
        ([("a",)], 1),
        ([tuple("ab")], 2),
        ([tuple("ab"), tuple("ba"), ("a",), ("b",)], 2),
        ([tuple("aa"), ("b",)], 2),
    ]
    for deltas, n in cases:
        got = minimal_nonfactors(deltas, A, n)
        assert set(got) == brute_nonfactors(deltas, "ab", 2 * n + 2), deltas
        assert all(len(w) <= 2 * n for w in got)


def _battery():
    yield "S3 window", *next((S, phi) for name, S, phi in _padding_cases() if name == "S3 window")
    for n in range(1, 7):
        phi = cyclic_hom(n, {"c": 1})
        yield f"c^{n}", base_single_letter(phi), phi
    A = WeightedAlphabet.unit("ab")
    phi = MonoidHom(A, one_zero(), {"a": 1, "b": 0})
    yield "{1,0}", monoid_system(phi), phi
    dfa = load_dfa("abstar.dfa", "ab.alphabet")
    yield "(ab)*", recognize(dfa).system, transition_monoid(dfa).hom
    for name, S, phi in _padding_cases():
        yield f"{name} padded", pad_system(S, 1), phi
    phi = cyclic_hom(5, {"a": 2, "b": 3})
    yield "Z/5 weights 2,3", simple_group_system(phi), phi


@pytest.mark.criterion(8, "normalization takes at most weight steps; random strategy agrees")
def test_linear_steps(record_property):
    base_seed = 20261015
    seeds = []
    for k, (name, S, phi) in enumerate(_battery()):
        assert verify_crs(S, phi).passed, name
        seed = base_seed + k
        seeds.append(f"{name}={seed}")
        rng = random.Random(seed)
        tokens = S.alphabet.tokens
        for _ in range(10**4):
            w = tuple(rng.choice(tokens) for _ in range(rng.randint(0, 30)))
            nf, steps = normalize(S, w)
            assert steps <= S.alphabet.weight(w), (name, w)
        for _ in range(10**3):
            w = tuple(rng.choice(tokens) for _ in range(rng.randint(0, 30)))
            assert normalize_random(S, w, rng)[0] == normal_form(S, w), (name, seed, w)
    record_property("seeds", ", ".join(seeds))


def _local_divisor_cases():
    yield "Z/4", cyclic_group(4)
    yield "{1,0}", one_zero()
    dfa = load_dfa("abstar.dfa", "ab.alphabet")
    yield "(ab)*", transition_monoid(dfa).monoid


@pytest.mark.criterion(9, "local divisors: well defined, associative, identity c, smaller for non-units")
def test_local_divisors():
    for name, M in _local_divisor_cases():
        t = M.table
        E = M.elements
        for c in E:
            ld = local_divisor(M, c)
            carrier = sorted({t[x][c] for x in E} & {t[c][y] for y in E})
            assert list(ld.carrier) == carrier
            pos = {u: i for i, u in enumerate(carrier)}
            D = ld.divisor.table
            # xc o cy == xcy for every way of writing the operands
            for x in E:
                for y in E:
                    u, v = t[x][c], t[c][y]
                    if u in pos and v in pos:
                        assert carrier[D[pos[u]][pos[v]]] == t[t[x][c]][y], (name, c, x, y)
            n = len(carrier)
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        assert D[D[i][j]][k] == D[i][D[j][k]]
            assert carrier[ld.divisor.identity] == c
            assert all(D[pos[c]][i] == i == D[i][pos[c]] for i in range(n))
            if not is_unit(M, c):
                assert n < len(M), (name, c)


@pytest.mark.criterion(10, "stretch: {a, b, c} onto Z/3 through markers (reported, not gated)")
def test_stretch_z3(record_property):
    phi = cyclic_hom(3, {"a": 1, "b": 1, "c": 1})
    opts = SynthesisOptions(strategy="auto", max_rules=10**7, max_nodes=5 * 10**7, retries=0)
    start = time.perf_counter()
    try:
        S = monoid_system(phi, opts)
    except ResourceCapExceeded as exc:
        record_property("outcome", "cap_exceeded")
        record_property("stage", exc.stage)
        record_property("details", exc.details)
    else:
        report = verify_crs(S, phi)
        record_property("outcome", "verified" if report.passed else "failed verification")
        record_property("rules", len(S))
        record_property("index", report.index)
    for line in opts.trace:
        record_property("path", line)
    record_property("seconds", f"{time.perf_counter() - start:.1f}")
