"""Exact-arithmetic simplices, product cells and finite cell complexes.

Every coordinate is a :class:`fractions.Fraction`.  A tile is a
:class:`PLCell`: a polytope combinatorially equal to ``Δ^(p-1) × I^q`` given
by one box fibre per simplex vertex.  The fibre over simplex vertex ``i`` is
the box ``centers[i] + Σ_k u_k * half_widths[i][k] * directions[k]`` with
``u ∈ [-1, 1]^q``; the cell is the convex hull of all fibres.  Unit product
cells, lattice-cube faces and every subtile the subdivision rule produces
all have this shape, so one representation serves the engine and the
lattice oracle alike.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Rational = Fraction
Point = tuple  # tuple[Fraction, ...]

CellId = tuple  # tuple[int, ...]


def point(*coords) -> Point:
    return tuple(Fraction(c) for c in coords)


def _sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def _scale(c, a: Point) -> Point:
    return tuple(c * x for x in a)


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        pv = m[col][col]
        det *= pv
        for r in range(col + 1, n):
            f = m[r][col] / pv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col] / m[r][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Exact solution of the (possibly overdetermined) system ``a x = b``.

    Returns None when the system is inconsistent.  Columns of ``a`` must be
    linearly independent.
    """
    rows = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(a, b)]
    ncols = len(a[0]) if a else 0
    r = 0
    pivots = []
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            raise ValueError("columns are linearly dependent")
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    return [rows[i][-1] for i in range(ncols)]


def _exact_sqrt(x: Fraction) -> Fraction:
    num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if num * num != x.numerator or den * den != x.denominator:
        raise ValueError(f"volume is irrational (sqrt of {x})")
    return Fraction(num, den)


@dataclass(frozen=True)
class Simplex:
    """Ordered vertex list ``[p0, ..., pd]``; realizes the affine map of the
    standard simplex sending the i-th basis corner to ``p_i``."""

    vertices: tuple

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def edge_vectors(self) -> list[Point]:
        p0 = self.vertices[0]
        return [_sub(p, p0) for p in self.vertices[1:]]

    @cached_property
    def gram_determinant(self) -> Fraction:
        e = self.edge_vectors
        if not e:
            return Fraction(1)
        gram = [[sum(a * b for a, b in zip(u, v)) for v in e] for u in e]
        return determinant(gram)

    @property
    def degenerate(self) -> bool:
        return self.gram_determinant == 0

    @property
    def orientation(self) -> int:
        """Sign of the vertex-ordering determinant (full-dimensional only)."""
        if self.dim != self.ambient_dim:
            raise ValueError("orientation needs a full-dimensional simplex")
        d = determinant(self.edge_vectors)
        return (d > 0) - (d < 0)

    def __call__(self, coords: Sequence) -> Point:
        """The affine map ``p0 + Σ x_i (p_i - p0)``."""
        if len(coords) != self.dim:
            raise ValueError("expected %d barycentric coordinates" % self.dim)
        out = self.vertices[0]
        for x, e in zip(coords, self.edge_vectors):
            out = _add(out, _scale(Fraction(x), e))
        return out

    def faces(self, k: int) -> Iterable[tuple]:
        """Vertex subsets of size ``k + 1`` (order preserved)."""
        return itertools.combinations(self.vertices, k + 1)


def affine_simplex(points: Sequence[Sequence]) -> Simplex:
    pts = tuple(tuple(Fraction(c) for c in p) for p in points)
    if not pts:
        raise ValueError("a simplex needs at least one point")
    if len({len(p) for p in pts}) != 1:
        raise ValueError("points do not share an ambient dimension")
    return Simplex(pts)


def simplex_volume(s: Simplex) -> Fraction:
    """Exact d-dimensional volume; degenerate simplices give 0."""
    g = s.gram_determinant
    if g == 0:
        return Fraction(0)
    return _exact_sqrt(g) / math.factorial(s.dim)


def _kuhn_chain(order: Sequence[int], dim: int) -> list[Point]:
    v = [Fraction(0)] * dim
    chain = [tuple(v)]
    for axis in order:
        v[axis] = Fraction(1)
        chain.append(tuple(v))
    return chain


def product_triangulate(a: int, b: int) -> list[Simplex]:
    """Triangulate ``Δ^a × I^b`` in ``R^(a+b)``.

    ``Δ^a`` is the Kuhn simplex ``1 >= x_1 >= ... >= x_a >= 0``; the product is
    cut into the Kuhn simplices of ``I^(a+b)`` whose permutation visits the
    first ``a`` axes in increasing order, ``(a+b)!/a!`` of them.
    """
    if a < 0 or b < 0:
        raise ValueError("dimensions must be nonnegative")
    d = a + b
    if d == 0:
        return [Simplex(((),))]
    out = []
    for perm in itertools.permutations(range(d)):
        simplex_axes = [ax for ax in perm if ax < a]
        if simplex_axes == sorted(simplex_axes):
            out.append(Simplex(tuple(_kuhn_chain(perm, d))))
    return out


@dataclass(frozen=True, order=True)
class TileType:
    """``Δ^(p-1) × I^q`` with ``p + q = n``."""

    n: int
    p: int
    q: int

    def __post_init__(self):
        if not (1 <= self.p <= self.n) or self.p + self.q != self.n:
            raise ValueError(f"invalid tile type n={self.n} p={self.p} q={self.q}")

    @property
    def dim(self) -> int:
        return self.n - 1

    @property
    def nominal_volume(self) -> Fraction:
        return Fraction(1, math.factorial(self.p - 1))

    @property
    def letter(self) -> str:
        return "ABCDEFGHIJKLMNOPQRSTUVWXYZ"[self.p - 1]

    def __str__(self) -> str:
        return f"{self.p},{self.q}"


# A face of a product cell: (simplex vertex indices, per-axis state in {-1, 0, +1}),
# 0 meaning the axis is free.
FaceKey = tuple


@dataclass(frozen=True)
class PLCell:
    id: CellId
    type_label: TileType
    centers: tuple  # p points, anchor first
    directions: tuple  # q vectors
    half_widths: tuple  # p rows of q positive rationals

    def __post_init__(self):
        p, q = self.type_label.p, self.type_label.q
        if len(self.centers) != p or len(self.directions) != q:
            raise ValueError("frame does not match tile type %s" % self.type_label)
        if len(self.half_widths) != p or any(len(r) != q for r in self.half_widths):
            raise ValueError("half_widths must be a p x q table")

    @property
    def p(self) -> int:
        return self.type_label.p

    @property
    def q(self) -> int:
        return self.type_label.q

    @property
    def dim(self) -> int:
        return self.p - 1 + self.q

    @property
    def ambient_dim(self) -> int:
        return len(self.centers[0])

    def corner(self, i: int, signs: Sequence[int]) -> Point:
        pt = self.centers[i]
        for k, s in enumerate(signs):
            pt = _add(pt, _scale(s * self.half_widths[i][k], self.directions[k]))
        return pt

    @property
    def anchor(self) -> Point:
        """The anchor vertex: the all-minus corner of the anchor fibre."""
        return self.corner(0, (-1,) * self.q)

    @cached_property
    def degenerate(self) -> bool:
        if any(w <= 0 for row in self.half_widths for w in row):
            return True
        rows = [_sub(c, self.centers[0]) for c in self.centers[1:]]
        rows += list(self.directions)
        return rank(rows) < self.dim

    def face_vertices(self, face: FaceKey) -> list[Point]:
        simplex_idx, axes = face
        free = [k for k, s in enumerate(axes) if s == 0]
        out = []
        for i in simplex_idx:
            for choice in itertools.product((-1, 1), repeat=len(free)):
                signs = list(axes)
                for k, s in zip(free, choice):
                    signs[k] = s
                out.append(self.corner(i, signs))
        return out

    @staticmethod
    def face_dim(face: FaceKey) -> int:
        simplex_idx, axes = face
        return len(simplex_idx) - 1 + sum(1 for s in axes if s == 0)

    @staticmethod
    def face_facets(face: FaceKey) -> list[FaceKey]:
        simplex_idx, axes = face
        out = []
        if len(simplex_idx) >= 2:
            for i in simplex_idx:
                out.append((tuple(j for j in simplex_idx if j != i), axes))
        for k, s in enumerate(axes):
            if s == 0:
                for sign in (-1, 1):
                    out.append((simplex_idx, axes[:k] + (sign,) + axes[k + 1:]))
        return out

    @property
    def whole(self) -> FaceKey:
        return (tuple(range(self.p)), (0,) * self.q)

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted(set(self.face_vertices(self.whole))))

    @cached_property
    def facets(self) -> dict:
        """Facet key -> frozenset of its vertices."""
        if self.dim == 0:
            return {}
        return {f: frozenset(self.face_vertices(f)) for f in self.face_facets(self.whole)}

    def face_simplices(self, face: FaceKey, _memo: dict | None = None) -> list[tuple]:
        """Pulling triangulation of a face with respect to the lexicographic
        order of exact coordinates.  The order is global, so two cells sharing
        a face induce the same triangulation on it."""
        memo = {} if _memo is None else _memo
        if face in memo:
            return memo[face]
        verts = self.face_vertices(face)
        if len(verts) == self.face_dim(face) + 1:
            res = [tuple(sorted(verts))]
        else:
            v = min(verts)
            res = []
            for g in self.face_facets(face):
                if v not in self.face_vertices(g):
                    res.extend((v,) + t for t in self.face_simplices(g, memo))
        memo[face] = res
        return res

    @cached_property
    def simplices(self) -> tuple:
        return tuple(Simplex(vs) for vs in self.face_simplices(self.whole))

    def face_volume(self, face: FaceKey) -> Fraction:
        return sum(
            (simplex_volume(Simplex(vs)) for vs in self.face_simplices(face)), Fraction(0)
        )

    @cached_property
    def volume(self) -> Fraction:
        return sum((simplex_volume(s) for s in self.simplices), Fraction(0))

    def local_coords(self, pt: Sequence) -> tuple[list[Fraction], list[Fraction]] | None:
        """Barycentric weights over the simplex part and box offsets.

        Returns None when ``pt`` is off the cell's affine hull.
        """
        pt = tuple(Fraction(c) for c in pt)
        v0 = self.centers[0]
        cols = [_sub(c, v0) for c in self.centers[1:]] + list(self.directions)
        if not cols:
            return ([Fraction(1)], []) if pt == v0 else None
        a = [[col[r] for col in cols] for r in range(self.ambient_dim)]
        sol = solve(a, _sub(pt, v0))
        if sol is None:
            return None
        mu_rest = sol[: self.p - 1]
        mu = [1 - sum(mu_rest, Fraction(0))] + mu_rest
        return mu, sol[self.p - 1:]

    def contains(self, pt: Sequence) -> bool:
        lc = self.local_coords(pt)
        if lc is None:
            return False
        mu, t = lc
        if any(m < 0 for m in mu):
            return False
        for k, tk in enumerate(t):
            w = sum((m * self.half_widths[i][k] for i, m in enumerate(mu)), Fraction(0))
            if abs(tk) > w:
                return False
        return True

    def facet_of(self, facet: FaceKey, pt: Sequence) -> bool:
        """Whether ``pt`` lies on the given facet (assumes ``pt`` in cell)."""
        lc = self.local_coords(pt)
        if lc is None:
            return False
        mu, t = lc
        simplex_idx, axes = facet
        missing = set(range(self.p)) - set(simplex_idx)
        if any(mu[i] != 0 for i in missing):
            return False
        for k, s in enumerate(axes):
            if s:
                w = sum((m * self.half_widths[i][k] for i, m in enumerate(mu)), Fraction(0))
                if t[k] != s * w:
                    return False
        return True


def unit_cell(cell_id: CellId, tile: TileType) -> PLCell:
    """``Δ^(p-1) × I^q`` in ``R^(n-1)`` as Kuhn simplex cross unit cube."""
    a, b = tile.p - 1, tile.q
    half = Fraction(1, 2)
    chain = _kuhn_chain(range(a), a)
    centers = tuple(c + (half,) * b for c in chain)
    directions = tuple(
        tuple(Fraction(int(j == a + k)) for j in range(a + b)) for k in range(b)
    )
    widths = tuple((half,) * b for _ in range(tile.p))
    return PLCell(cell_id, tile, centers, directions, widths)


class DegenerateCellError(ValueError):
    pass


@dataclass(frozen=True)
class Complex:
    """A finite set of glued tiles; gluing is recovered from shared facets."""

    ambient_dim: int
    cells: tuple
    k: int = 0  # generation step, informational
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        cells = tuple(sorted(self.cells, key=lambda c: c.id))
        object.__setattr__(self, "cells", cells)
        ids = [c.id for c in cells]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate cell ids")
        for c in cells:
            if c.ambient_dim != self.ambient_dim:
                raise ValueError(f"cell {c.id} lives in the wrong ambient dimension")
            if c.degenerate:
                raise DegenerateCellError(f"cell {c.id} is degenerate")
        object.__setattr__(self, "_index", {c.id: c for c in cells})

    def __len__(self) -> int:
        return len(self.cells)

    def cell(self, cell_id: CellId) -> PLCell:
        return self._index[cell_id]

    @property
    def dim(self) -> int:
        return self.cells[0].dim if self.cells else -1

    @cached_property
    def vertex_pool(self) -> tuple:
        """Deduplicated vertices in lexicographic coordinate order."""
        return tuple(sorted({v for c in self.cells for v in c.vertices}))

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertex_pool)}

    @cached_property
    def facet_incidence(self) -> dict:
        """Facet vertex set -> list of ids of the cells having it as a facet."""
        inc: dict = {}
        for c in self.cells:
            for verts in c.facets.values():
                inc.setdefault(verts, []).append(c.id)
        return inc

    @cached_property
    def adjacency(self) -> dict:
        """(id, id) with id1 < id2 -> number of shared facets."""
        adj: dict = {}
        for ids in self.facet_incidence.values():
            for a, b in itertools.combinations(sorted(ids), 2):
                adj[(a, b)] = adj.get((a, b), 0) + 1
        return adj

    def unmatched_facets(self) -> list:
        return [f for f, ids in self.facet_incidence.items() if len(ids) != 2]

    @property
    def is_closed(self) -> bool:
        return not self.unmatched_facets()

    def count_vector(self, n: int) -> list[int]:
        counts = [0] * n
        for c in self.cells:
            counts[c.p - 1] += 1
        return counts

    @cached_property
    def volume(self) -> Fraction:
        return sum((c.volume for c in self.cells), Fraction(0))


def euler_characteristic(c: Complex | Iterable[Simplex]) -> int:
    """Alternating count of distinct simplices over all face lattices.

    Accepts a :class:`Complex` or a bare iterable of simplices.
    """
    if isinstance(c, Complex):
        tops = [s for cell in c.cells for s in cell.simplices]
    else:
        tops = list(c)
    seen: set = set()
    for s in tops:
        verts = s.vertices
        for k in range(len(verts)):
            for face in itertools.combinations(verts, k + 1):
                seen.add(frozenset(face))
    return sum((-1) ** (len(f) - 1) for f in seen)


class SearchBudgetExceeded(RuntimeError):
    """The isomorphism search ran past its wall-clock budget."""


def _labeled_graph(c: Complex) -> tuple[list, dict, dict]:
    nodes = [cell.id for cell in c.cells]
    labels = {cell.id: (cell.p, cell.q) for cell in c.cells}
    adj: dict = {u: {} for u in nodes}
    for (a, b), mult in c.adjacency.items():
        adj[a][b] = mult
        adj[b][a] = mult
    return nodes, labels, adj


def _refine(colors1: dict, colors2: dict, adj1: dict, adj2: dict) -> tuple[dict, dict]:
    """Joint colour refinement of two graphs until the partition is stable."""
    while True:
        table: dict = {}

        def step(colors, adj):
            out = {}
            for u, c in colors.items():
                sig = (c, tuple(sorted((colors[v], m) for v, m in adj[u].items())))
                out[u] = table.setdefault(sig, len(table))
            return out

        new1 = step(colors1, adj1)
        new2 = step(colors2, adj2)
        if len(set(new1.values())) == len(set(colors1.values())):
            return new1, new2
        colors1, colors2 = new1, new2


def _histogram(colors: dict) -> dict:
    h: dict = {}
    for c in colors.values():
        h[c] = h.get(c, 0) + 1
    return h


def labeled_isomorphic(c1: Complex, c2: Complex, budget_seconds: float | None = None) -> dict | None:
    """Type- and adjacency-preserving bijection of cells, or None.

    Exhaustive individualization/refinement search.  Raises
    :class:`SearchBudgetExceeded` when ``budget_seconds`` runs out.
    """
    import time

    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    if len(c1) != len(c2) or c1.dim != c2.dim:
        return None
    _, lab1, adj1 = _labeled_graph(c1)
    _, lab2, adj2 = _labeled_graph(c2)
    seed: dict = {}
    col1 = {u: seed.setdefault(l, len(seed)) for u, l in lab1.items()}
    col2 = {u: seed.setdefault(l, len(seed)) for u, l in lab2.items()}

    def search(col1, col2):
        if deadline is not None and time.monotonic() > deadline:
            raise SearchBudgetExceeded("isomorphism search budget exhausted")
        col1, col2 = _refine(col1, col2, adj1, adj2)
        if _histogram(col1) != _histogram(col2):
            return None
        classes: dict = {}
        for u, c in col1.items():
            classes.setdefault(c, []).append(u)
        open_classes = [v for v in classes.values() if len(v) > 1]
        if not open_classes:
            inv2 = {c: u for u, c in col2.items()}
            mapping = {u: inv2[c] for u, c in col1.items()}
            for u, nbrs in adj1.items():
                img = adj2[mapping[u]]
                if len(img) != len(nbrs) or any(img.get(mapping[v]) != m for v, m in nbrs.items()):
                    return None
            return mapping
        target = min(open_classes, key=lambda v: (len(v), min(v)))
        u = min(target)
        color = col1[u]
        fresh = max(max(col1.values()), max(col2.values())) + 1
        for cand in sorted(v for v, c in col2.items() if c == color):
            n1 = dict(col1)
            n2 = dict(col2)
            n1[u] = fresh
            n2[cand] = fresh
            found = search(n1, n2)
            if found is not None:
                return found
        return None

    return search(col1, col2)
