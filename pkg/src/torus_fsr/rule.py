"""The subdivision rule for the n-torus.

Tile types are ``Δ^(p-1) × I^q`` for ``p = 1..n``, ``q = n - p``.  A tile of
type ``(p, q)`` splits into one inner tile of the same type and ``2q`` flank
tiles of type ``(p+1, q-1)``, one per facet of its cube factor.

Geometrically, with ``s_k = (W_k - |t_k|) / W_anchor,k`` the normalized
distance of a point from the cube facets along axis ``k`` (``t`` the box
offset, ``W`` the fibre half-width at the point), the flank on facet
``(k, ±)`` is the region where ``s_k`` is the smallest and lies below the
anchor weight; everything else is the inner tile.  On the unit cell this is
exactly the cone-sector carve-out ``Σx + 2(1 - z) <= 1`` with the cone apex
at the cube centre.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .geom import Complex, PLCell, Point, TileType, _add, _scale, unit_cell

__all__ = [
    "TileType",
    "Template",
    "SubdivisionRule",
    "SubdivisionError",
    "tile_realization",
    "homotopy_ft",
    "subdivide_cell",
    "build_template",
    "subdivide",
    "iterate",
    "transition_matrix",
    "initial_sphere",
    "count_vector",
]

HALF = Fraction(1, 2)


class SubdivisionError(ValueError):
    pass


def tile_realization(t: TileType, cell_id=(0,)) -> PLCell:
    """The model cell ``Δ^(p-1) × I^q`` in ``R^(n-1)``, anchored at the origin."""
    return unit_cell(cell_id, t)


def homotopy_ft(p: int, q: int, t, pt) -> Point:
    """Drag the anchor corner of the top simplex down the cone axis.

    ``pt = (x_1..x_{p-1}, y_1..y_{q-1}, z)`` must lie in
    ``Δ^(p-1) × I^(q-1) × I``.  Only ``z`` moves:
    ``z -> z (1 + (Σx - 1) t / 2)``.
    """
    if q < 1 or p < 1:
        raise ValueError("the homotopy needs p >= 1 and q >= 1")
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    pt = tuple(Fraction(c) for c in pt)
    if len(pt) != p + q - 1:
        raise ValueError("point has wrong dimension")
    x, y, z = pt[: p - 1], pt[p - 1: p + q - 2], pt[-1]
    sx = sum(x, Fraction(0))
    if any(v < 0 for v in x) or sx > 1 or any(not 0 <= v <= 1 for v in y) or not 0 <= z <= 1:
        raise ValueError(f"{pt} is outside Δ^{p - 1} × I^{q - 1} × I")
    return x + y + (z * (1 + (sx - 1) * t / 2),)


def subdivide_cell(cell: PLCell) -> list[PLCell]:
    """Inner tile first, then flanks ordered by (axis, sign -, +).

    The inner tile keeps the simplex vertices but halves the anchor fibre;
    its vertex order rotates so the next vertex becomes the anchor.  Each
    flank is the simplex face on its cube facet joined with the halved
    anchor fibre's midpoint on that side, anchored at the old anchor.
    """
    p, q = cell.p, cell.q
    if q == 0:
        return [replace(cell, id=cell.id + (0,))]
    V, D, W = cell.centers, cell.directions, cell.half_widths
    n = cell.type_label.n
    half_anchor = tuple(w / 2 for w in W[0])
    inner = PLCell(
        cell.id + (0,),
        cell.type_label,
        tuple(V[1:]) + (V[0],),
        D,
        tuple(W[1:]) + (half_anchor,),
    )
    out = [inner]
    flank_type = TileType(n, p + 1, q - 1)
    idx = 1
    for k in range(q):
        keep = [m for m in range(q) if m != k]
        for s in (-1, 1):
            centers = tuple(_add(V[i], _scale(s * W[i][k], D[k])) for i in range(p))
            centers += (_add(V[0], _scale(s * half_anchor[k], D[k])),)
            widths = tuple(tuple(W[i][m] for m in keep) for i in range(p))
            widths += (tuple(half_anchor[m] for m in keep),)
            out.append(
                PLCell(cell.id + (idx,), flank_type, centers, tuple(D[m] for m in keep), widths)
            )
            idx += 1
    return out


@dataclass(frozen=True)
class Template:
    parent: PLCell
    inner: PLCell
    flanks: tuple
    boundary_trace: dict = field(compare=False)

    @property
    def subtiles(self) -> tuple:
        return (self.inner,) + tuple(self.flanks)

    def trace_vertices(self, key) -> list:
        subs = self.subtiles
        return [subs[i].facets[fk] for i, fk in self.boundary_trace[key]]

    @property
    def is_identity(self) -> bool:
        return not self.flanks and self.inner.centers == self.parent.centers


def _trace(parent: PLCell, subtiles) -> dict:
    """Parent facet key -> [(subtile index, subtile facet key)] lying in it."""
    trace = {}
    for key in parent.facets:
        pieces = []
        for i, sub in enumerate(subtiles):
            for sub_key, verts in sub.facets.items():
                if all(parent.facet_of(key, v) for v in verts):
                    pieces.append((i, sub_key))
        trace[key] = pieces
    return trace


def make_template(parent: PLCell, subtiles) -> Template:
    subtiles = list(subtiles)
    return Template(parent, subtiles[0], tuple(subtiles[1:]), _trace(parent, subtiles))


def build_template(n: int, p: int) -> Template:
    if not 1 <= p <= n:
        raise ValueError(f"invalid (n, p) = ({n}, {p})")
    parent = tile_realization(TileType(n, p, n - p))
    return make_template(parent, subdivide_cell(parent))


@dataclass(frozen=True)
class SubdivisionRule:
    n: int
    templates: tuple

    @classmethod
    def for_torus(cls, n: int) -> "SubdivisionRule":
        if n < 1:
            raise ValueError("n must be positive")
        return cls(n, tuple(build_template(n, p) for p in range(1, n + 1)))

    def template(self, p: int) -> Template:
        return self.templates[p - 1]


def subdivide(c: Complex, r: SubdivisionRule | None = None, check: bool = True) -> Complex:
    """Replace every cell by its subtiles.

    With ``check`` on, a closed input must give a closed output; a facet
    seen by only one subtile means neighbouring cells cut their common face
    differently.
    """
    for cell in c.cells:
        if r is not None and cell.type_label.n != r.n:
            raise SubdivisionError(f"cell {cell.id} has no tile type in this rule")
    cells = [sub for cell in c.cells for sub in subdivide_cell(cell)]
    out = Complex(c.ambient_dim, tuple(cells), k=c.k + 1)
    if check and c.is_closed and not out.is_closed:
        bad = out.unmatched_facets()[0]
        raise SubdivisionError(f"boundary traces of adjacent cells disagree near {sorted(bad)[0]}")
    return out


def iterate(c: Complex, r: SubdivisionRule | None, k: int, check: bool = True) -> Complex:
    if k < 0:
        raise ValueError("k must be nonnegative")
    for _ in range(k):
        c = subdivide(c, r, check=check)
    return c


def transition_matrix(n: int) -> np.ndarray:
    """Column p -> counts of each type produced by one tile of type p."""
    if n < 1:
        raise ValueError("n must be positive")
    m = np.zeros((n, n), dtype=object)
    for p in range(1, n + 1):
        m[p - 1, p - 1] = 1
        if p < n:
            m[p, p - 1] = 2 * (n - p)
    return m


def count_vector(c: Complex, n: int) -> list[int]:
    return c.count_vector(n)


def predicted_counts(n: int, k: int, initial=None) -> list[int]:
    """``M^k`` applied to the initial sphere's counts ``(2n, 0, ..., 0)``."""
    v = np.array(initial if initial is not None else [2 * n] + [0] * (n - 1), dtype=object)
    m = transition_matrix(n)
    for _ in range(k):
        v = m.dot(v)
    return [int(x) for x in v]


def initial_sphere(n: int) -> Complex:
    """``∂[0,1]^n`` as ``2n`` cells of type ``(1, n-1)``, ordered by (axis, sign)."""
    if n < 1:
        raise ValueError("n must be positive")
    tile = TileType(n, 1, n - 1)
    cells = []
    for axis in range(n):
        for side in (0, 1):
            center = tuple(Fraction(side) if j == axis else HALF for j in range(n))
            dirs = tuple(
                tuple(Fraction(int(j == m)) for j in range(n)) for m in range(n) if m != axis
            )
            cells.append(PLCell((2 * axis + side,), tile, (center,), dirs, ((HALF,) * (n - 1),)))
    return Complex(n, tuple(cells), k=0)


def nominal_volume(p: int) -> Fraction:
    return Fraction(1, math.factorial(p - 1))
