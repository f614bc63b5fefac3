from fractions import Fraction
from itertools import combinations
from math import comb
from random import Random

import pytest

from tightcycles.errors import InvalidInput
from tightcycles.hypergraph import (
    RED,
    ColoredHypergraph,
    Hypergraph,
    complete,
    random_colored_complete,
)
from tightcycles.lp import solve_packing_lp
from tightcycles.matching import (
    FractionalMatching,
    Matching,
    completion,
    induced_fractional,
    is_r_fractional,
    max_fractional_confined,
    maximal_matching_greedy,
    maximum_matching,
    sum_disjoint,
    weight,
)
from tightcycles.structure import mono_components, tight_components


def test_weight_of_induced_matching():
    K9 = complete(3, 9)
    M = Matching(K9, ((0, 1, 2), (3, 4, 5), (6, 7, 8)))
    phi = induced_fractional(M)
    assert weight(phi) == 3
    assert weight(FractionalMatching.over_graph(K9, {})) == 0


def test_uniform_spread_weight():
    # 1/k on the k+1 edges spanned by k+1 vertices
    for k in (3, 4):
        K = complete(k, k + 1)
        phi = FractionalMatching.over_graph(K, {e: Fraction(1, k) for e in K.edges})
        assert weight(phi) == Fraction(k + 1, k)


def test_is_r_fractional():
    K6 = complete(3, 6)
    M = induced_fractional(Matching(K6, ((0, 1, 2),)))
    for r in (1, 2, 3, 7):
        assert is_r_fractional(M, r)
    third = FractionalMatching.over_graph(K6, {(0, 1, 2): Fraction(1, 3)})
    assert is_r_fractional(third, 6)
    assert not is_r_fractional(third, 2)
    with pytest.raises(InvalidInput):
        is_r_fractional(third, 0)


def test_induced_fractional_domain_is_spanned_subgraph():
    K9 = complete(3, 9)
    M = Matching(K9, ((0, 1, 2), (3, 4, 5)))
    phi = induced_fractional(M)
    assert phi.domain_vertices == frozenset(range(6))
    assert phi.domain_edges == frozenset(
        e for e in K9.edges if set(e) <= set(range(6))
    )


def test_completion_preserves_weights_and_is_idempotent():
    K9 = complete(3, 9)
    M = Matching(K9, ((0, 1, 2),))
    phi = induced_fractional(M)
    full = completion(phi, K9)
    assert weight(full) == weight(phi)
    assert completion(full, K9).weights == full.weights
    zero = FractionalMatching(3, frozenset({0, 1, 2}), frozenset({(0, 1, 2)}), {})
    assert weight(completion(zero, K9)) == 0


def test_sum_requires_disjoint_hosts():
    K9 = complete(3, 9)
    a = induced_fractional(Matching(K9, ((0, 1, 2),)))
    b = induced_fractional(Matching(K9, ((3, 4, 5),)))
    s = sum_disjoint(a, b)
    assert weight(s) == weight(a) + weight(b) == 2
    zero = FractionalMatching(3, frozenset(), frozenset(), {})
    assert sum_disjoint(a, zero).weights == a.weights
    with pytest.raises(InvalidInput) as exc:
        sum_disjoint(a, a)
    assert exc.value.code == "hosts-not-disjoint"


def test_vertex_capacity_is_enforced():
    K6 = complete(3, 6)
    with pytest.raises(InvalidInput):
        FractionalMatching.over_graph(
            K6, {(0, 1, 2): Fraction(2, 3), (0, 3, 4): Fraction(2, 3)}
        )


def test_greedy_maximal_matching():
    assert len(maximal_matching_greedy(complete(3, 9), seed=4)) == 3
    single = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
    assert len(maximal_matching_greedy(single)) == 1
    star = Hypergraph.from_edges(3, 6, [(0, 1, v) for v in (2, 3, 4, 5)])
    assert len(maximal_matching_greedy(star, seed=8)) == 1


def test_greedy_respects_component_restriction():
    G = random_colored_complete(3, 9, Fraction(1, 2), seed=6)
    red, _ = mono_components(G)
    comp = red.components[0]
    M = maximal_matching_greedy(G.base, within=comp, seed=1)
    assert set(M.edges) <= set(comp)


def test_greedy_meets_component_counting_bound():
    # any maximal matching M in a component T satisfies
    # |T| <= |M| * k * C(n-1, k-1)
    for seed in range(6):
        G = random_colored_complete(3, 9, Fraction(2, 3), seed=seed)
        H = G.color_class(RED)
        index = tight_components(H)
        for cid, comp in enumerate(index.components):
            M = maximal_matching_greedy(H, within=comp, seed=seed)
            assert len(comp) <= len(M) * 3 * comb(8, 2)


def exhaustive_maximum_oracle(edges):
    best = 0

    def grow(i, covered, size):
        nonlocal best
        best = max(best, size)
        for j in range(i, len(edges)):
            if covered.isdisjoint(edges[j]):
                grow(j + 1, covered | set(edges[j]), size + 1)

    grow(0, frozenset(), 0)
    return best


def test_maximum_matching_small_complete():
    assert len(maximum_matching(complete(3, 6))) == 2
    assert len(maximum_matching(complete(3, 7))) == 2


def test_maximum_matching_matches_exhaustive_oracle():
    rng = Random(17)
    for _ in range(8):
        pool = list(combinations(range(12), 3))
        rng.shuffle(pool)
        edges = sorted(pool[:30])
        H = Hypergraph.from_edges(3, 12, edges)
        assert len(maximum_matching(H)) == exhaustive_maximum_oracle(edges)


def test_maximum_at_least_greedy_and_at_most_lp():
    for seed in range(5):
        G = random_colored_complete(3, 8, Fraction(1, 2), seed=seed)
        H = G.color_class(RED)
        if not H.edges:
            continue
        greedy = maximal_matching_greedy(H, seed=seed)
        maxm = maximum_matching(H)
        lp = solve_packing_lp(list(H.edges), H.n)
        assert len(greedy) <= len(maxm) <= lp.value


def test_lp_complete_graph_values():
    for k in range(3, 6):
        for n in range(k, 10):
            lp = solve_packing_lp(list(complete(k, n).edges), n)
            assert lp.value == Fraction(n, k)
            assert lp.certified


def test_confined_lp_examples():
    all_red = random_colored_complete(3, 6, Fraction(1), seed=0)
    phi, lp = max_fractional_confined(all_red, [("R", 0)])
    assert weight(phi) == 2
    single = ColoredHypergraph(Hypergraph.from_edges(3, 3, [(0, 1, 2)]), (RED,))
    phi, _ = max_fractional_confined(single, [("R", 0)])
    assert weight(phi) == 1
    # K_4^(3): uniform 1/3 is the unique optimum, value 4/3 (hand LP)
    k4 = random_colored_complete(3, 4, Fraction(1), seed=0)
    phi, _ = max_fractional_confined(k4, [("R", 0)])
    assert weight(phi) == Fraction(4, 3)
    assert all(w == Fraction(1, 3) for w in phi.weights.values())


def test_confined_lp_support_stays_in_components():
    G = random_colored_complete(3, 8, Fraction(1, 2), seed=3)
    red, blue = mono_components(G)
    phi, _ = max_fractional_confined(G, [("R", 0)])
    assert set(phi.weights) <= set(red.components[0])


def test_confined_lp_rejects_empty_selection():
    G = random_colored_complete(3, 6, Fraction(1), seed=0)
    with pytest.raises(InvalidInput):
        max_fractional_confined(G, [])


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**20), st.integers(2, 4))
def test_sum_weight_additive_property(seed, denom):
    rng = Random(seed)
    K = complete(3, 12)
    left = sorted(rng.sample(range(6), 3))
    right = sorted(rng.sample(range(6, 12), 3))
    a = FractionalMatching(
        3, frozenset(left), frozenset({tuple(left)}), {tuple(left): Fraction(1, denom)}
    )
    b = FractionalMatching(
        3, frozenset(right), frozenset({tuple(right)}), {tuple(right): Fraction(1)}
    )
    s = sum_disjoint(a, b)
    assert weight(s) == weight(a) + weight(b)
    assert completion(s, K).weights == s.weights


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 24), st.integers(1, 6))
def test_fractionality_is_divisor_monotone(r, mult):
    K = complete(3, 6)
    phi = FractionalMatching.over_graph(K, {(0, 1, 2): Fraction(1, r)})
    assert is_r_fractional(phi, r)
    assert is_r_fractional(phi, r * mult)
