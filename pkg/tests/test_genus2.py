"""The genus-2 fixture: integrity of the seven strata, edge groups,
face arrows, and triviality of the automorphism search."""

import pytest

from tropmoduli.genus2 import (
    WeightedGraph,
    aut_m2,
    bridge_loop_swap_violation,
    build_m2_complex,
    contract_weighted_edge,
    edge_action_group,
    m2_cells,
    weighted_graph_isomorphisms,
)

from functools import lru_cache


@lru_cache(maxsize=1)
def m2():
    return build_m2_complex()


def cell(name):
    cx = m2()
    return cx.cells[cx.cell_index(name)]


# ---------------------------------------------------------------------------
# weighted graphs


def test_genus_two_everywhere():
    for c in m2().cells:
        assert c.graph.genus == 2


def test_stability_everywhere():
    for c in m2().cells:
        assert c.graph.is_stable()


def test_unstable_example():
    # a weight-0 vertex of valence 2 is not allowed
    g = WeightedGraph((0, 1), ((0, 1), (0, 1)))
    assert g.genus == 2 and not g.is_stable()


def test_valence_counts_loops_twice():
    assert cell("figure_eight").graph.valence(0) == 4
    assert cell("lollipop").graph.valence(0) == 3


def test_rejects_disconnected():
    with pytest.raises(ValueError):
        WeightedGraph((1, 1), ())


def test_f_vector():
    assert m2().f_vector() == [1, 2, 2, 2]


# ---------------------------------------------------------------------------
# edge groups


def test_theta_edge_group_is_symmetric_on_three_edges():
    group = cell("theta").edge_group
    assert group.order() == 6
    assert group.elements() == {
        (0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)
    }


def test_dumbbell_edge_group_swaps_loops_fixes_bridge():
    group = cell("dumbbell").edge_group
    assert group.order() == 2
    assert group.elements() == {(0, 1, 2), (2, 1, 0)}


def test_figure_eight_edge_group():
    assert cell("figure_eight").edge_group.order() == 2


def test_remaining_edge_groups_trivial():
    for name in ("lollipop", "loop_w1", "bridge_w1_w1", "point_w2"):
        assert cell(name).edge_group.order() == 1


def test_isomorphism_respects_weights():
    g = WeightedGraph((0, 1), ((0, 0), (0, 1)))
    h = WeightedGraph((1, 0), ((1, 1), (0, 1)))
    assert next(weighted_graph_isomorphisms(g, h), None) is not None
    k = WeightedGraph((0, 0), ((0, 0), (0, 1)))
    assert next(weighted_graph_isomorphisms(g, k), None) is None


# ---------------------------------------------------------------------------
# contraction and face arrows


def test_contract_loop_adds_weight():
    g = cell("figure_eight").graph
    c = contract_weighted_edge(g, 0)
    assert c.weights == (1,) and len(c.edges) == 1


def test_contract_bridge_merges_weights():
    g = cell("bridge_w1_w1").graph
    c = contract_weighted_edge(g, 0)
    assert c.weights == (2,) and c.edges == ()


def test_contract_rejects_bad_index():
    with pytest.raises(ValueError):
        contract_weighted_edge(cell("theta").graph, 5)


def test_specialization_arrows_complete():
    assert m2().specializations() == {
        "theta": {"figure_eight"},
        "dumbbell": {"figure_eight", "lollipop"},
        "figure_eight": {"loop_w1"},
        "lollipop": {"loop_w1", "bridge_w1_w1"},
        "loop_w1": {"point_w2"},
        "bridge_w1_w1": {"point_w2"},
        "point_w2": set(),
    }


def test_face_arrows_commute_with_edge_groups():
    # contracting edge g(e) lands in the same face as contracting e, for
    # every edge-group element g of the source
    cx = m2()
    for i, c in enumerate(cx.cells):
        for g in c.edge_group.elements():
            for e in range(c.dimension):
                assert cx.arrows[i][e][0] == cx.arrows[i][g[e]][0]


# ---------------------------------------------------------------------------
# the automorphism search


def test_aut_is_trivial():
    result = aut_m2(m2())
    assert result.group.order() == 1
    assert result.classes == 1
    # the surviving strict candidates are exactly the per-cell edge-group
    # choices around the identity
    expected = 1
    for c in m2().cells:
        expected *= c.edge_group.order()
    assert result.valid == expected


def test_identity_candidate_is_accepted():
    from tropmoduli.genus2 import _check_candidate

    cx = m2()
    cell_map = tuple(range(len(cx.cells)))
    edge_maps = tuple(tuple(range(c.dimension)) for c in cx.cells)
    assert _check_candidate(cx, cell_map, edge_maps) is None


def test_bridge_loop_swap_rejected_with_witness():
    w = bridge_loop_swap_violation(m2())
    assert w.cell == "dumbbell"
    assert {w.face, w.image_face} == {"figure_eight", "lollipop"}
    text = w.describe()
    assert "figure_eight" in text and "lollipop" in text
