from fractions import Fraction
from itertools import combinations, permutations
from random import Random

import pytest

from tightcycles.errors import InvalidInput
from tightcycles.hypergraph import (
    BLUE,
    RED,
    ColoredHypergraph,
    Hypergraph,
    complete,
    random_colored_complete,
)
from tightcycles.structure import (
    PseudoWalk,
    closed_walk_red_link,
    edge_adjacent,
    find_tight_cycle,
    find_tight_path,
    find_walk,
    induced_walk,
    mono_components,
    random_walk_between,
    tight_components,
)


def bfs_components_oracle(H: Hypergraph):
    """Quadratic pairwise-adjacency BFS, independent of the union-find path."""
    edges = list(H.edges)
    seen = set()
    comps = []
    for start in edges:
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            for other in edges:
                if other not in comp and edge_adjacent(cur, other):
                    comp.add(other)
                    frontier.append(other)
        seen |= comp
        comps.append(frozenset(comp))
    return set(comps)


def test_edge_adjacent_examples():
    assert edge_adjacent((0, 1, 2), (0, 1, 2))
    assert edge_adjacent((0, 1, 2), (1, 2, 3))
    assert not edge_adjacent((0, 1, 2), (2, 3, 4))


def test_components_complete_and_disjoint():
    assert len(tight_components(complete(3, 5))) == 1
    two = Hypergraph.from_edges(3, 6, [(0, 1, 2), (3, 4, 5)])
    assert len(tight_components(two)) == 2
    cyc = Hypergraph.from_edges(
        3, 5, [(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 4), (0, 1, 4)]
    )
    assert len(tight_components(cyc)) == 1


def test_components_match_bfs_oracle_on_random_graphs():
    for seed in range(12):
        G = random_colored_complete(3, 8, Fraction(1, 4), seed=seed)
        H = G.color_class(RED)
        index = tight_components(H)
        assert {frozenset(c) for c in index.components} == bfs_components_oracle(H)
        # a partition: each edge in exactly one class
        total = sum(len(c) for c in index.components)
        assert total == len(H.edges)


def test_mono_components_all_red():
    G = random_colored_complete(3, 6, Fraction(1), seed=0)
    red, blue = mono_components(G)
    assert (len(red), len(blue)) == (1, 0)


def test_mono_components_parity_instance_golden():
    # X = {0}, Y = {1..5}: red edges inside Y one component, the ten edges
    # through 0 one blue component (frozen from the BFS oracle)
    from tightcycles.constructions import extremal_coloring

    inst = extremal_coloring(3, 2, 0)
    red, blue = mono_components(inst.coloring)
    assert (len(red), len(blue)) == (1, 1)
    assert {frozenset(c) for c in red.components} == bfs_components_oracle(
        inst.coloring.color_class(RED)
    )


def test_single_red_edge():
    G = ColoredHypergraph(Hypergraph.from_edges(3, 3, [(0, 1, 2)]), (RED,))
    red, blue = mono_components(G)
    assert (len(red), len(blue)) == (1, 0)


def test_induced_walk_example():
    K5 = complete(3, 5)
    walk = induced_walk(K5, (0, 1, 2, 3, 4))
    assert walk.edges == ((0, 1, 2), (1, 2, 3), (2, 3, 4))
    single = induced_walk(K5, (0, 1, 2))
    assert len(single) == 1


def test_induced_walk_rejects_window_errors():
    K5 = complete(3, 5)
    with pytest.raises(InvalidInput) as exc:
        induced_walk(K5, (0, 1, 2, 1))
    assert exc.value.code == "repeated-vertex-in-window"
    sparse = Hypergraph.from_edges(3, 5, [(0, 1, 2)])
    with pytest.raises(InvalidInput) as exc:
        induced_walk(sparse, (0, 1, 2, 3))
    assert exc.value.code == "window-not-an-edge"


def test_find_walk_trivial_and_absent():
    K5 = complete(3, 5)
    walk = find_walk(K5, (0, 1, 2), (0, 1, 2))
    assert len(walk) == 1
    two = Hypergraph.from_edges(3, 6, [(0, 1, 2), (3, 4, 5)])
    assert find_walk(two, (0, 1, 2), (3, 4, 5)) is None


def test_find_walk_shortest_length_golden():
    # distance frozen from a Floyd-Warshall oracle over edge adjacency
    walk = find_walk(complete(3, 5), (0, 1, 2), (2, 3, 4))
    assert len(walk) == 3


def floyd_warshall_distances(H: Hypergraph):
    es = list(H.edges)
    big = len(es) + 10
    dist = {
        (a, b): 0 if a == b else (1 if edge_adjacent(a, b) else big)
        for a in es
        for b in es
    }
    for m in es:
        for a in es:
            for b in es:
                alt = dist[a, m] + dist[m, b]
                if alt < dist[a, b]:
                    dist[a, b] = alt
    return dist, big


def test_find_walk_minimal_on_random_sparse_graphs():
    rng = Random(3)
    for _ in range(8):
        pool = list(combinations(range(7), 3))
        rng.shuffle(pool)
        H = Hypergraph.from_edges(3, 7, sorted(pool[:12]))
        dist, big = floyd_warshall_distances(H)
        index = tight_components(H)
        for a in H.edges:
            for b in H.edges:
                walk = find_walk(H, a, b)
                if dist[a, b] >= big:
                    assert walk is None
                    assert index.comp_of[a] != index.comp_of[b]
                else:
                    assert len(walk) == dist[a, b] + 1
                    assert index.comp_of[a] == index.comp_of[b]
                    assert walk.edges[0] == a and walk.edges[-1] == b


def test_random_walk_between_is_valid():
    K8 = complete(3, 8)
    rng = Random(5)
    walk = random_walk_between(K8, (0, 1, 2), (5, 6, 7), rng)
    assert walk.edges[0] == (0, 1, 2) and walk.edges[-1] == (5, 6, 7)


def closed_walk_for_tests(G, e, f, seed):
    host = G.base
    rng = Random(seed)
    there = random_walk_between(host, e, f, rng)
    back = random_walk_between(host, f, e, rng)
    edges = there.edges + back.edges[1:]
    return PseudoWalk(host.k, edges), len(there)


def test_closed_walk_red_link_preconditions():
    all_red = random_colored_complete(3, 8, Fraction(1), seed=1)
    Q, i = closed_walk_for_tests(all_red, (0, 1, 2), (4, 5, 6), 7)
    verdict = closed_walk_red_link(all_red, Q, i)
    assert verdict.status == "precondition-failed"
    # same blue component
    half = ColoredHypergraph(
        complete(3, 8), tuple(BLUE for _ in range(len(complete(3, 8).edges)))
    )
    Q2, i2 = closed_walk_for_tests(half, (0, 1, 2), (4, 5, 6), 9)
    assert closed_walk_red_link(half, Q2, i2).status == "precondition-failed"


def test_closed_walk_red_link_holds_on_engineered_instance():
    # blue = the two disjoint edges only; everything else red and tightly
    # connected, so any closed walk between them carries red links
    base = complete(3, 9)
    blue_edges = {(0, 1, 2), (3, 4, 5)}
    colors = tuple(BLUE if e in blue_edges else RED for e in base.edges)
    G = ColoredHypergraph(base, colors)
    Q, i = closed_walk_for_tests(G, (0, 1, 2), (3, 4, 5), 13)
    verdict = closed_walk_red_link(G, Q, i)
    assert verdict.holds
    a, b = verdict.witness
    assert 2 <= a <= i - 1 and i + 1 <= b <= len(Q.edges)


def test_closed_walk_red_link_reversed_colors():
    base = complete(3, 9)
    red_edges = {(0, 1, 2), (3, 4, 5)}
    colors = tuple(RED if e in red_edges else BLUE for e in base.edges)
    G = ColoredHypergraph(base, colors)
    Q, i = closed_walk_for_tests(G, (0, 1, 2), (3, 4, 5), 13)
    assert closed_walk_red_link(G, Q, i).status == "precondition-failed"
    assert closed_walk_red_link(G, Q, i, colors_reversed=True).holds


def cycle_oracle(G, length, color):
    """All cyclic orderings by brute permutation enumeration."""
    if color == "any":
        edge_set = G.base.edge_set if isinstance(G, ColoredHypergraph) else G.edge_set
    else:
        edge_set = set(G.red_edges if color == RED else G.blue_edges)
    n = G.n if isinstance(G, ColoredHypergraph) else G.n
    k = 3
    for vs in combinations(range(n), length):
        for perm in permutations(vs[1:]):
            seq = (vs[0],) + perm
            if all(
                tuple(sorted(seq[(i + j) % length] for j in range(k))) in edge_set
                for i in range(length)
            ):
                return True
    return False


def test_cycle_search_examples():
    all_red = random_colored_complete(3, 6, Fraction(1), seed=0)
    assert find_tight_cycle(all_red, 6, RED).found
    assert find_tight_cycle(all_red, 6, BLUE).status == "absent"


def test_cycle_search_found_witness_revalidates():
    G = random_colored_complete(3, 8, Fraction(3, 4), seed=21)
    res = find_tight_cycle(G, 6, RED)
    if res.found:
        w = res.witness
        reds = set(G.red_edges)
        assert len(set(w)) == 6
        for i in range(6):
            window = tuple(sorted(w[(i + j) % 6] for j in range(3)))
            assert window in reds
        assert w[0] == min(w) and w[1] < w[-1]


def test_cycle_search_agrees_with_permutation_oracle():
    for seed in range(10):
        G = random_colored_complete(3, 7, Fraction(3, 5), seed=seed)
        for length in (5, 6, 7):
            got = find_tight_cycle(G, length, RED)
            assert got.status in ("found", "absent")
            assert got.found == cycle_oracle(G, length, RED), (seed, length)


def test_path_search_agrees_with_oracle_on_small_paths():
    for seed in (3, 5):
        G = random_colored_complete(3, 6, Fraction(1, 2), seed=seed)
        res = find_tight_path(G, 4, BLUE)
        blues = set(G.blue_edges)
        brute = any(
            all(
                tuple(sorted(seq[i + j] for j in range(3))) in blues
                for i in range(2)
            )
            for vs in combinations(range(6), 4)
            for seq in permutations(vs)
        )
        assert res.found == brute


def test_budget_exhaustion_is_reported():
    G = random_colored_complete(3, 9, Fraction(1, 2), seed=2)
    res = find_tight_cycle(G, 9, RED, budget=5)
    assert res.status == "budget-exhausted"
    assert res.nodes >= 5


def test_path_length_k_is_single_edge():
    G = random_colored_complete(3, 5, Fraction(1), seed=1)
    assert find_tight_path(G, 3, RED).found
    assert find_tight_path(G, 3, BLUE).status == "absent"


def test_link_verdict_serialises():
    base = complete(3, 9)
    blue_edges = {(0, 1, 2), (3, 4, 5)}
    colors = tuple(BLUE if e in blue_edges else RED for e in base.edges)
    G = ColoredHypergraph(base, colors)
    Q, i = closed_walk_for_tests(G, (0, 1, 2), (3, 4, 5), 13)
    obj = closed_walk_red_link(G, Q, i).to_obj()
    assert obj["verdict"] == "holds"
    assert len(obj["witness"]["positions"]) == 2
