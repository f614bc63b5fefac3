import pytest

from tightcycles.constructions import (
    contains_mono_copy,
    extremal_coloring,
    parity_coloring,
    ramsey_search,
    verify_extremal,
)
from tightcycles.errors import BudgetExhausted, InvalidInput
from tightcycles.hypergraph import RED, random_colored_complete
from tightcycles.mu import orbit_count_burnside
from fractions import Fraction


def test_extremal_parameters():
    inst = extremal_coloring(3, 2, 0)
    assert (inst.d, inst.N, len(inst.X), len(inst.Y)) == (3, 6, 1, 5)
    inst = extremal_coloring(3, 2, 1)
    assert (inst.d, inst.N, len(inst.X), len(inst.Y)) == (1, 10, 5, 5)
    inst = extremal_coloring(4, 2, 0)
    assert (inst.d, inst.N, len(inst.X), len(inst.Y)) == (4, 8, 1, 7)


def test_extremal_rejects_bad_parameters():
    with pytest.raises(InvalidInput):
        extremal_coloring(2, 2, 0)
    with pytest.raises(InvalidInput):
        extremal_coloring(3, 2, 3)
    with pytest.raises(InvalidInput):
        extremal_coloring(3, 0, 0)


def test_parity_rule_holds_edge_by_edge():
    for (k, n, i) in ((3, 2, 0), (3, 2, 1), (4, 2, 0)):
        inst = extremal_coloring(k, n, i)
        xs = set(inst.X)
        for e, c in zip(inst.coloring.base.edges, inst.coloring.colors):
            assert (len(xs & set(e)) % 2 == 0) == (c == RED)


def test_extremal_instances_have_no_forbidden_cycle():
    rep = verify_extremal(extremal_coloring(3, 2, 0))
    assert rep.mono_cycle is None and rep.parity_ok and rep.red_component_parity_ok
    rep = verify_extremal(extremal_coloring(3, 2, 1))
    assert rep.mono_cycle is None and rep.parity_ok and rep.red_component_parity_ok


def test_mono_copy_found_on_all_red():
    G = random_colored_complete(3, 6, Fraction(1), seed=0)
    witness, _ = contains_mono_copy(G, "cycle", 6)
    assert witness is not None and witness.color == RED
    # revalidate the witness windows
    reds = set(G.red_edges)
    w = witness.vertices
    for i in range(6):
        assert tuple(sorted(w[(i + j) % 6] for j in range(3))) in reds


def test_mono_copy_single_edge_paths():
    G = random_colored_complete(3, 5, Fraction(2, 3), seed=8)
    witness, _ = contains_mono_copy(G, "path", 3)
    assert (witness is not None) == (len(G.base.edges) > 0)


def test_mono_copy_budget_is_an_error():
    G = random_colored_complete(3, 9, Fraction(1, 2), seed=1)
    with pytest.raises(BudgetExhausted):
        contains_mono_copy(G, "cycle", 9, budget=3)


def test_ramsey_workers_agree():
    seq = ramsey_search("path", 3, 4, 5, workers=1)
    par = ramsey_search("path", 3, 4, 5, workers=2)
    assert seq.value == par.value == 4
    assert seq.witness_below == par.witness_below


def test_ramsey_path3_and_path4():
    r3 = ramsey_search("path", 3, 3, 6)
    assert r3.value == 3 and r3.bounds == (3, 3)
    r4 = ramsey_search("path", 3, 4, 6)
    assert r4.value == 4 and r4.bounds == (4, 4)


def test_ramsey_witnesses_revalidate():
    for m in (3, 4):
        res = ramsey_search("path", 3, m, 6)
        w = res.witness_below
        assert w.n == res.value - 1
        if w.base.edges:
            witness, _ = contains_mono_copy(w, "path", m)
            assert witness is None


def test_ramsey_cycle6_partial_with_lower_bound():
    res = ramsey_search("cycle", 3, 6, 8)
    assert res.value is None
    assert res.bounds[0] == 7 and res.bounds[1] is None
    assert "capped" in res.method
    # the recorded witness at N=6 really is cycle-free
    witness, _ = contains_mono_copy(res.witness_below, "cycle", 6)
    assert witness is None


def test_ramsey_canonical_enumeration_counts():
    # the N=4 resolution step for single-edge patterns must examine at
    # most the Burnside class count after the parity probes
    res = ramsey_search("path", 3, 4, 4)
    parity_probes_n3 = 4  # x_size in 0..3
    parity_probes_n4 = 5
    classes_n3 = orbit_count_burnside(3, 3)
    classes_n4 = orbit_count_burnside(3, 4)
    assert res.colorings_examined <= (
        parity_probes_n3 + classes_n3 + parity_probes_n4 + classes_n4
    )


def test_path_probe_on_parity_instance():
    # frozen from the exhaustive searcher: neither colour class of the
    # (3,2,0) instance carries a tight path on 6 vertices
    from tightcycles.structure import find_tight_path

    inst = extremal_coloring(3, 2, 0)
    assert find_tight_path(inst.coloring, 6, RED).status == "absent"
    assert find_tight_path(inst.coloring, 6, "B").status == "absent"


def test_parity_coloring_red_component_intersection_sizes():
    inst = extremal_coloring(3, 3, 0)
    from tightcycles.structure import mono_components

    red_idx, _ = mono_components(inst.coloring)
    xs = set(inst.X)
    for comp in red_idx.components:
        sizes = {len(xs & set(e)) for e in comp}
        assert len(sizes) == 1
