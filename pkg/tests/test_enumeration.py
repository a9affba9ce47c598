"""Stratum enumeration: frozen counts, the independent clique-level
cross-check, expansion/contraction duality, and envelope behavior."""

import itertools

import pytest

from tropmoduli import (
    EnvelopeError,
    apply_marking_permutation,
    contract,
    count_maximal,
    enumerate_strata,
    expansions,
    single_vertex_tree,
    two_vertex_tree,
)
from tropmoduli.enumeration import all_splits, enumerate_by_compatibility

from shared import catalog

# dimension 0..n-3 counts; n=4 and the n=5 line are forced by the ray
# count 2^(n-1)-n-1 and the double factorial, the rest cross-checked by
# the clique enumerator below and by hand via leg-distribution counting
F_VECTORS = {
    3: [1],
    4: [1, 3],
    5: [1, 10, 15],
    6: [1, 25, 105, 105],
    7: [1, 56, 490, 1260, 945],
}


@pytest.mark.parametrize("n,expected", sorted(F_VECTORS.items()))
def test_f_vectors(n, expected):
    assert catalog(n).f_vector() == expected


def test_catalogs_match_compatibility_enumeration():
    # the BFS over one-edge expansions against the direct enumeration of
    # pairwise-compatible split sets
    for n in (4, 5, 6):
        assert dict(enumerate_by_compatibility(n)) == dict(catalog(n).by_dimension)


def test_ray_counts():
    for n in range(4, 9):
        count = 2 ** (n - 1) - n - 1
        assert len(all_splits(n)) == count
        if n <= 7:
            assert len(catalog(n).by_dimension[1]) == count


def test_rejects_small_n():
    with pytest.raises(ValueError):
        enumerate_strata(2)


def test_rejects_beyond_envelope():
    with pytest.raises(EnvelopeError):
        enumerate_strata(9)


def test_count_maximal_values():
    assert [count_maximal(n) for n in range(3, 9)] == [1, 3, 15, 105, 945, 10395]


def test_count_maximal_matches_catalog():
    for n in range(3, 8):
        cat = catalog(n)
        assert len(cat.by_dimension[cat.max_dimension]) == count_maximal(n)


def test_no_duplicates_and_all_stable():
    for n in (4, 5, 6):
        for dim, forms in catalog(n).by_dimension.items():
            assert len(set(forms)) == len(forms)
            for form in forms:
                t = form.to_tree()
                assert t.is_stable and len(t.edges) == dim


def test_maximal_strata_are_trivalent():
    for n in (4, 5, 6, 7):
        cat = catalog(n)
        for form in cat.by_dimension[cat.max_dimension]:
            t = form.to_tree()
            assert all(
                t.valence(v) + t.leg_count(v) == 3 for v in range(t.num_vertices)
            )


def test_dimension_zero_is_unique():
    for n in (3, 4, 5, 6, 7):
        assert len(catalog(n).by_dimension[0]) == 1


# ---------------------------------------------------------------------------
# expansions


def test_trivalent_tree_has_no_expansions():
    form = catalog(5).by_dimension[2][0]
    assert expansions(form.to_tree()) == []


def test_expansions_of_point_n4():
    children = expansions(single_vertex_tree(4))
    forms = {child.canonical_form for child, _ in children}
    assert forms == {
        two_vertex_tree(4, side).canonical_form for side in ([2, 3], [2, 4], [3, 4])
    }


def test_expansions_of_point_n5():
    # oracle: subsets of {1..5} of size 2 or 3, modulo complementation
    subsets = [
        frozenset(c)
        for r in (2, 3)
        for c in itertools.combinations(range(1, 6), r)
    ]
    full = frozenset(range(1, 6))
    distinct = {frozenset((s, full - s)) for s in subsets}
    children = expansions(single_vertex_tree(5))
    assert len(children) == len(distinct) == 10


def test_expansions_are_pairwise_nonisomorphic():
    for n in (5, 6):
        for form in catalog(n).all_forms():
            children = expansions(form.to_tree())
            forms = [c.canonical_form for c, _ in children]
            assert len(set(forms)) == len(forms)


def test_contracting_new_edge_recovers_parent():
    for n in (5, 6):
        for form in catalog(n).all_forms():
            t = form.to_tree()
            for child, new_edge in expansions(t):
                assert child.is_stable
                back = contract(child, [new_edge]).tree
                assert back.canonical_form == form


def test_every_stratum_is_an_expansion_of_each_contraction():
    for n in (5, 6):
        cat = catalog(n)
        for dim in range(1, cat.max_dimension + 1):
            for form in cat.by_dimension[dim]:
                t = form.to_tree()
                for e in range(len(t.edges)):
                    parent = contract(t, [e]).tree
                    children = {
                        c.canonical_form for c, _ in expansions(parent)
                    }
                    assert form in children


def test_catalog_closed_under_marking_action():
    n = 5
    cat = catalog(n)
    for sigma in itertools.permutations(range(1, n + 1)):
        for dim, forms in cat.by_dimension.items():
            images = {
                apply_marking_permutation(sigma, f.to_tree()).canonical_form
                for f in forms
            }
            assert images == set(forms)
