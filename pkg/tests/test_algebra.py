import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import cyclic_hom, one_zero, s3_hom
from crsynth.algebra import (
    Dfa,
    FiniteMonoid,
    MonoidHom,
    cyclic_group,
    exponent,
    image_submonoid,
    is_group,
    is_unit,
    kernel_weight_gcd,
    local_divisor,
    permutation_group,
    transition_monoid,
)
from crsynth.words import WeightedAlphabet


def test_rejects_bad_tables():
    with pytest.raises(ValueError, match="not associative"):
        # x*y = 1 for x, y != 0 breaks associativity together with 1*1 = 0
        FiniteMonoid([[0, 1, 2], [1, 0, 1], [2, 1, 1]])
    with pytest.raises(ValueError, match="identity"):
        FiniteMonoid([[0, 1], [1, 1]], 1)
    with pytest.raises(ValueError, match="closed"):
        FiniteMonoid([[0, 2], [1, 0]])
    with pytest.raises(ValueError, match="square"):
        FiniteMonoid([[0, 1]])


def test_cyclic_group():
    G = cyclic_group(4)
    assert is_group(G)
    assert [G.order(x) for x in G.elements] == [1, 4, 2, 4]
    assert exponent(G) == 4
    assert G.inverse(1) == 3
    assert G.power(3, 3) == 1


def test_s3():
    phi = s3_hom()
    G = phi.target
    assert len(G) == 6
    assert exponent(G) == 6 == oracles.lcm_orders(G)
    r, t = phi.images["r"], phi.images["t"]
    assert G.order(r) == 3 and G.order(t) == 2
    assert phi(tuple("trt")) == phi(tuple("rr"))


def test_one_zero_is_not_a_group():
    M = one_zero()
    assert not is_group(M)
    assert is_unit(M, 0) and not is_unit(M, 1)
    with pytest.raises(ValueError):
        exponent(M)
    with pytest.raises(ValueError):
        M.order(1)


def test_hom_checks_images():
    A = WeightedAlphabet.unit("ab")
    with pytest.raises(ValueError, match="no image"):
        MonoidHom(A, cyclic_group(2), {"a": 1})
    with pytest.raises(ValueError, match="not an element"):
        MonoidHom(A, cyclic_group(2), {"a": 1, "b": 2})
    phi = MonoidHom(A, cyclic_group(3), {"a": 1, "b": 2})
    assert phi(tuple("abab")) == 0
    assert phi(()) == 0
    with pytest.raises(ValueError):
        phi(("c",))


@given(st.lists(st.sampled_from("rt"), max_size=12), st.lists(st.sampled_from("rt"), max_size=12))
def test_hom_is_multiplicative(u, v):
    phi = s3_hom()
    assert phi(u + v) == phi.target.mul(phi(u), phi(v))


def _abstar():
    A = WeightedAlphabet.unit("ab")
    trans = {
        ("p0", "a"): "p1", ("p0", "b"): "sink",
        ("p1", "a"): "sink", ("p1", "b"): "p0",
        ("sink", "a"): "sink", ("sink", "b"): "sink",
    }
    return Dfa(["p0", "p1", "sink"], "p0", ["p0"], trans, A)


def test_transition_monoid_of_abstar():
    dfa = _abstar()
    tm = transition_monoid(dfa)
    # 1, a, b, ab, ba, 0
    assert len(tm.monoid) == 6
    for w in oracles.words_upto("ab", 8):
        assert (tm.hom(w) in tm.accepting) == dfa.accepts(w)
    letters = [tuple(dfa.states.index(dfa.transitions[q, a]) for q in dfa.states) for a in "ab"]
    then = lambda f, g: tuple(g[i] for i in f)  # noqa: E731
    assert len(oracles.closure(letters, then, (0, 1, 2))) == 6


def test_dfa_validation():
    A = WeightedAlphabet.unit("ab")
    with pytest.raises(ValueError, match="missing transition for state 'p' and token 'b'"):
        Dfa(["p"], "p", [], {("p", "a"): "p"}, A)
    with pytest.raises(ValueError, match="undeclared"):
        Dfa(["p"], "p", [], {("p", "a"): "q", ("p", "b"): "p"}, A)
    with pytest.raises(ValueError, match="initial"):
        Dfa(["p"], "q", [], {}, A)


def test_image_submonoid():
    A = WeightedAlphabet.unit("a")
    phi = MonoidHom(A, cyclic_group(6), {"a": 2})
    img = image_submonoid(phi)
    assert len(img.monoid) == 3
    assert sorted(img.embed) == [0, 2, 4]
    assert img.embed[img.hom.images["a"]] == 2


@pytest.mark.parametrize(
    "n, weights, images",
    [
        (3, {"a": 1, "b": 1, "c": 1}, None),
        (2, {"a": 1, "c": 1}, None),
        (5, {"a": 2, "b": 3}, None),
        (4, {"a": 2, "b": 4}, {"a": 1, "b": 2}),
        (6, {"a": 1, "b": 1}, {"a": 1, "b": 5}),
    ],
)
def test_kernel_gcd_against_brute_force(n, weights, images):
    phi = cyclic_hom(n, weights, images)
    G = phi.target
    letters = [(phi.images[t], w) for t, w in weights.items()]
    assert kernel_weight_gcd(phi) == oracles.kernel_gcd(letters, G.mul, G.identity, 2 * n + 4)


def test_kernel_gcd_s3_is_one():
    phi = s3_hom()
    letters = [(phi.images[t], 1) for t in "rt"]
    G = phi.target
    assert kernel_weight_gcd(phi) == 1 == oracles.kernel_gcd(letters, G.mul, G.identity, 8)


def test_kernel_gcd_empty_alphabet():
    phi = MonoidHom(WeightedAlphabet([]), cyclic_group(1), {})
    assert kernel_weight_gcd(phi) is None


def test_local_divisor_one_zero():
    M = one_zero()
    ld = local_divisor(M, 1)
    assert ld.carrier == (1,)
    assert len(ld.divisor) == 1
    ld = local_divisor(M, 0)
    assert ld.carrier == (0, 1) and len(ld.divisor) == 2


def test_local_divisor_of_unit_is_isomorphic():
    G, _, _ = permutation_group([(1, 2, 0), (1, 0, 2)])
    for c in G.elements:
        ld = local_divisor(G, c)
        assert len(ld.divisor) == len(G)
        assert is_group(ld.divisor)
