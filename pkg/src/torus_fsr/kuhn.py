"""Kuhn triangulation of the p-cube, its involutions and vertex stars.

Cube vertices are 0/1 integer tuples.  A Kuhn simplex for the permutation
``sigma`` is the chain ``0, e_s1, e_s1 + e_s2, ..., (1, ..., 1)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .geom import Simplex, affine_simplex

MAX_P = 7

Vertex = tuple  # tuple[int, ...] of 0/1


def _check_p(p: int, allow_large: bool) -> None:
    if p < 1:
        raise ValueError("p must be >= 1 (the 0-cube is a point)")
    if p > MAX_P and not allow_large:
        raise ValueError(f"p = {p} exceeds the default cap {MAX_P}; pass allow_large=True")


@dataclass(frozen=True, order=True)
class KuhnSimplex:
    sigma: tuple  # 1-based permutation of 1..p
    chain: tuple

    @classmethod
    def from_sigma(cls, sigma) -> "KuhnSimplex":
        sigma = tuple(sigma)
        p = len(sigma)
        if sorted(sigma) != list(range(1, p + 1)):
            raise ValueError(f"{sigma} is not a permutation of 1..{p}")
        v = [0] * p
        chain = [tuple(v)]
        for s in sigma:
            v[s - 1] = 1
            chain.append(tuple(v))
        return cls(sigma, tuple(chain))

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.chain)

    def simplex(self) -> Simplex:
        return affine_simplex(self.chain)

    def boundary_faces(self) -> list[tuple]:
        """(p-1)-faces lying in the cube boundary: drop the first or last vertex."""
        return [self.chain[1:], self.chain[:-1]]


def kuhn_triangulation(p: int, allow_large: bool = False) -> list[KuhnSimplex]:
    _check_p(p, allow_large)
    return [KuhnSimplex.from_sigma(s) for s in itertools.permutations(range(1, p + 1))]


def antipodal_involution(p: int) -> dict:
    """``v -> (1, ..., 1) - v`` on the vertices of ``I^p``."""
    _check_p(p, allow_large=True)
    return {v: tuple(1 - x for x in v) for v in itertools.product((0, 1), repeat=p)}


def corner_swap(p: int) -> dict:
    """Exchange the origin and the all-ones vertex, fix every other vertex.

    Every Kuhn simplex contains both corners, so this is a simplicial
    self-map of the triangulation that reverses each simplex's orientation.
    """
    _check_p(p, allow_large=True)
    zero, ones = (0,) * p, (1,) * p
    m = {v: v for v in itertools.product((0, 1), repeat=p)}
    m[zero], m[ones] = ones, zero
    return m


def apply_vertex_map(m: dict, face) -> frozenset:
    return frozenset(m[v] for v in face)


@dataclass(frozen=True)
class VertexStar:
    corner: Vertex
    facets: tuple  # (axis, value) pairs, 0-based axis
    simplices: tuple  # per facet, a tuple of (p-1)-simplices as frozensets

    @property
    def all_simplices(self) -> list:
        return [s for group in self.simplices for s in group]


def boundary_simplices(p: int, allow_large: bool = False) -> list[frozenset]:
    """(p-1)-simplices of the triangulated ``∂I^p``, induced from Kuhn."""
    faces = set()
    for ks in kuhn_triangulation(p, allow_large):
        for f in ks.boundary_faces():
            faces.add(frozenset(f))
    return sorted(faces, key=sorted)


def vertex_star(p: int, corner: str | Vertex = "origin", allow_large: bool = False) -> VertexStar:
    """Closed star of the origin or the all-ones vertex in ``∂I^p``."""
    _check_p(p, allow_large)
    if corner in ("origin", 0):
        c = (0,) * p
    elif corner in ("ones", "all-ones", 1):
        c = (1,) * p
    else:
        c = tuple(corner)
        if c not in ((0,) * p, (1,) * p):
            raise ValueError("corner must be the origin or the all-ones vertex")
    value = c[0]
    facets = tuple((axis, value) for axis in range(p))
    bnd = [f for f in boundary_simplices(p, allow_large) if c in f]
    groups = tuple(
        tuple(f for f in bnd if all(v[axis] == value for v in f)) for axis, _ in facets
    )
    return VertexStar(c, facets, groups)


def star_isomorphism(p: int, allow_large: bool = False) -> dict:
    """Bijection S -> S* induced by the antipodal map, checked on face posets.

    The map comes from a vertex bijection, so it preserves the face relation
    as soon as it is injective on vertices and carries every subface of S to
    a subface of S* with the same number of incident simplices.
    """
    s = vertex_star(p, "origin", allow_large).all_simplices
    s_star = set(vertex_star(p, "ones", allow_large).all_simplices)
    anti = antipodal_involution(p)
    if len(set(anti.values())) != len(anti):
        raise AssertionError("antipodal map is not injective on vertices")
    mapping = {f: apply_vertex_map(anti, f) for f in s}
    if set(mapping.values()) != s_star or len(mapping) != len(s_star):
        raise AssertionError("antipodal map does not carry S onto S*")
    src, dst = subface_incidence(s), subface_incidence(s_star)
    if any(dst.get(apply_vertex_map(anti, f)) != c for f, c in src.items()) or len(src) != len(dst):
        raise AssertionError("face relation not preserved")
    return mapping


def subface_incidence(simplices) -> dict:
    """Number of simplices containing each nonempty proper subface."""
    counts: dict = {}
    for s in simplices:
        verts = sorted(s)
        for r in range(1, len(verts)):
            for sub in itertools.combinations(verts, r):
                key = frozenset(sub)
                counts[key] = counts.get(key, 0) + 1
    return counts


def expected_count(p: int) -> int:
    return math.factorial(p)
