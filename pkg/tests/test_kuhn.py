import itertools
import math
from fractions import Fraction

import pytest

from torus_fsr.geom import simplex_volume
from torus_fsr.kuhn import (
    MAX_P,
    KuhnSimplex,
    antipodal_involution,
    apply_vertex_map,
    boundary_simplices,
    corner_swap,
    expected_count,
    kuhn_triangulation,
    star_isomorphism,
    subface_incidence,
    vertex_star,
)

PS = range(1, MAX_P + 1)


def _interior_facet_counts(p):
    counts = {}
    for ks in kuhn_triangulation(p):
        for drop in range(p + 1):
            face = ks.vertex_set - {ks.chain[drop]}
            counts[face] = counts.get(face, 0) + 1
    return counts


def _on_cube_boundary(face):
    p = len(next(iter(face)))
    return any(len({v[a] for v in face}) == 1 for a in range(p))


@pytest.mark.parametrize("p,count", [(1, 1), (2, 2), (3, 6)])
def test_small_counts(p, count):
    assert len(kuhn_triangulation(p)) == count


def test_p3_volumes_are_one_sixth():
    vols = [simplex_volume(ks.simplex()) for ks in kuhn_triangulation(3)]
    assert vols == [Fraction(1, 6)] * 6


def test_zero_rejected_and_cap_enforced():
    with pytest.raises(ValueError):
        kuhn_triangulation(0)
    with pytest.raises(ValueError):
        kuhn_triangulation(MAX_P + 1)


def test_from_sigma_rejects_non_permutation():
    with pytest.raises(ValueError):
        KuhnSimplex.from_sigma((1, 1))


def test_chain_is_increasing_from_origin_to_ones():
    for ks in kuhn_triangulation(4):
        assert ks.chain[0] == (0,) * 4 and ks.chain[-1] == (1,) * 4
        assert all(a < b for a, b in zip(ks.chain, ks.chain[1:]))


@pytest.mark.parametrize("p", PS)
def test_count_volume_and_interior_faces(p):
    simplices = kuhn_triangulation(p)
    assert len(simplices) == expected_count(p) == math.factorial(p)
    assert sum(simplex_volume(ks.simplex()) for ks in simplices) == 1
    for face, c in _interior_facet_counts(p).items():
        assert c == (1 if _on_cube_boundary(face) else 2)


def test_antipodal_p1_swaps_endpoints():
    assert antipodal_involution(1) == {(0,): (1,), (1,): (0,)}


def test_antipodal_p2_example():
    anti = antipodal_involution(2)
    image = apply_vertex_map(anti, [(0, 0), (1, 0), (1, 1)])
    assert image == frozenset({(0, 0), (0, 1), (1, 1)})
    assert image == KuhnSimplex.from_sigma((2, 1)).vertex_set


@pytest.mark.parametrize("p", PS)
def test_antipodal_is_a_triangulation_automorphism(p):
    anti = antipodal_involution(p)
    assert all(anti[anti[v]] == v for v in anti)
    sets = {ks.vertex_set for ks in kuhn_triangulation(p)}
    assert {apply_vertex_map(anti, s) for s in sets} == sets


@pytest.mark.parametrize("p", PS)
def test_antipodal_exchanges_the_stars(p):
    anti = antipodal_involution(p)
    s = set(vertex_star(p, "origin").all_simplices)
    s_star = set(vertex_star(p, "ones").all_simplices)
    assert {apply_vertex_map(anti, f) for f in s} == s_star


@pytest.mark.parametrize("p", range(1, 6))
def test_corner_swap_fixes_subsimplices_without_corners(p):
    swap = corner_swap(p)
    corners = {(0,) * p, (1,) * p}
    sets = {ks.vertex_set for ks in kuhn_triangulation(p)}
    assert {apply_vertex_map(swap, s) for s in sets} == sets
    for s in sets:
        for r in range(1, len(s)):
            for sub in itertools.combinations(sorted(s), r):
                if not corners & set(sub):
                    assert apply_vertex_map(swap, sub) == frozenset(sub)


def test_antipodal_moves_some_corner_free_subsimplex():
    # the antipodal map is not the identity away from the corners
    anti = antipodal_involution(2)
    assert apply_vertex_map(anti, [(1, 0)]) == frozenset({(0, 1)})


@pytest.mark.parametrize("p,count", [(1, 1), (2, 2), (3, 6)])
def test_star_examples(p, count):
    star = vertex_star(p)
    assert len(star.all_simplices) == count
    assert len(star.facets) == p


def test_p1_star_is_the_corner():
    assert vertex_star(1).all_simplices == [frozenset({(0,)})]
    assert vertex_star(1, "ones").all_simplices == [frozenset({(1,)})]


def test_bad_corner_rejected():
    with pytest.raises(ValueError):
        vertex_star(2, (0, 1))


@pytest.mark.parametrize("p", PS)
def test_star_structure(p):
    for corner in ("origin", "ones"):
        star = vertex_star(p, corner)
        assert len(star.facets) == p
        assert all(len(g) == math.factorial(p - 1) for g in star.simplices)
        for (axis, value), group in zip(star.facets, star.simplices):
            assert all(v[axis] == value for f in group for v in f)


@pytest.mark.parametrize("p", PS)
def test_stars_cover_boundary_with_disjoint_interiors(p):
    s = vertex_star(p, "origin").all_simplices
    s_star = vertex_star(p, "ones").all_simplices
    assert len(set(s)) == len(s) and len(set(s_star)) == len(s_star)
    assert not set(s) & set(s_star)
    assert set(s) | set(s_star) == set(boundary_simplices(p))
    # the boundary has 2p facets each carrying (p-1)! simplices
    assert len(boundary_simplices(p)) == 2 * p * math.factorial(p - 1)


def test_star_isomorphism_p1():
    assert star_isomorphism(1) == {frozenset({(0,)}): frozenset({(1,)})}


@pytest.mark.parametrize("p", PS)
def test_star_isomorphism_preserves_incidence(p):
    m = star_isomorphism(p)
    src = subface_incidence(m.keys())
    dst = subface_incidence(m.values())
    anti = antipodal_involution(p)
    assert {apply_vertex_map(anti, f): c for f, c in src.items()} == dst


def test_star_isomorphism_p2_shared_vertex():
    m = star_isomorphism(2)
    (a, b) = list(m)
    assert len(a & b) == 1 and len(m[a] & m[b]) == 1
