"""Word-metric balls in Z^n and the typed tiling of their boundary spheres.

This module is the independent oracle: it never touches the subdivision
templates.  Cube ``v`` is ``v + [-1/2, 1/2]^n``.  For a boundary cube of
rank ``p`` (``p`` nonzero coordinates) the local frame flips every support
axis so that coordinate 0 is the inner side and 1 the outer side.  The
exposed faces then split as

* outward support faces: each cut into the ``(p-1)!`` Kuhn simplices of the
  facet (chains from the facet's inner corner to the outer corner), times the
  zero-axis cube, giving tiles of type ``(p, q)``;
* zero-axis faces: the ``p!`` Kuhn simplices of the support cube (chains
  from inner to outer corner) times the remaining zero-axis cube, giving
  tiles of type ``(p+1, q-1)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .geom import Complex, PLCell, TileType
from .rule import initial_sphere

HALF = Fraction(1, 2)

LatticePoint = tuple  # tuple[int, ...]


def norm(v: LatticePoint) -> int:
    return sum(abs(x) for x in v)


def rank(v: LatticePoint) -> tuple[int, int]:
    p = sum(1 for x in v if x != 0)
    return p, len(v) - p


@dataclass(frozen=True)
class LatticeBall:
    n: int
    k: int
    members: frozenset

    def __contains__(self, v) -> bool:
        return norm(v) <= self.k

    def __len__(self) -> int:
        return len(self.members)

    def shell(self) -> list:
        """Members at distance exactly k, in lexicographic order."""
        return sorted(v for v in self.members if norm(v) == self.k)


@dataclass(frozen=True, order=True)
class ExposedFace:
    cube: LatticePoint
    axis: int  # 0-based
    sign: int


def _compositions(n: int, k: int):
    """All integer vectors of length n with L1 norm <= k."""
    if n == 0:
        yield ()
        return
    for x in range(-k, k + 1):
        for rest in _compositions(n - 1, k - abs(x)):
            yield (x,) + rest


def ball(n: int, k: int) -> LatticeBall:
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return LatticeBall(n, k, frozenset(_compositions(n, k)))


def exposed_faces(n: int, k: int) -> list[ExposedFace]:
    """Brute force: every cube side whose outward neighbour is outside the ball."""
    b = ball(n, k)
    out = []
    for v in sorted(b.members):
        for axis in range(n):
            for sign in (-1, 1):
                w = v[:axis] + (v[axis] + sign,) + v[axis + 1:]
                if w not in b:
                    out.append(ExposedFace(v, axis, sign))
    return out


def _cube_cells(v: LatticePoint, cube_index: int) -> list[PLCell]:
    n = len(v)
    support = [i for i in range(n) if v[i] != 0]
    zeros = [i for i in range(n) if v[i] == 0]
    p, q = len(support), len(zeros)
    sgn = {i: (1 if v[i] > 0 else -1) for i in support}

    def place(local: dict) -> tuple:
        # local: axis -> coordinate in [0, 1] of the cube frame
        out = []
        for i in range(n):
            ell = local.get(i, HALF)
            if i in sgn:
                out.append(Fraction(v[i]) + sgn[i] * (ell - HALF))
            else:
                out.append(Fraction(v[i]) + ell - HALF)
        return tuple(out)

    def unit(i):
        return tuple(Fraction(int(j == i)) for j in range(n))

    def chain(start: dict, order) -> list[dict]:
        cur = dict(start)
        pts = [dict(cur)]
        for ax in order:
            cur[ax] = Fraction(1)
            pts.append(dict(cur))
        return pts

    cells = []
    idx = 0
    outward = TileType(n, p, q)
    for i in support:
        rest = [a for a in support if a != i]
        base = {a: Fraction(0) for a in support}
        base[i] = Fraction(1)
        for order in itertools.permutations(rest):
            centers = tuple(place(c) for c in chain(base, order))
            dirs = tuple(unit(j) for j in zeros)
            widths = tuple((HALF,) * q for _ in centers)
            cells.append(PLCell((cube_index, idx), outward, centers, dirs, widths))
            idx += 1
    if q:
        side_type = TileType(n, p + 1, q - 1)
        for j in zeros:
            others = [m for m in zeros if m != j]
            for side in (0, 1):
                base = {a: Fraction(0) for a in support}
                base[j] = Fraction(side)
                for order in itertools.permutations(support):
                    centers = tuple(place(c) for c in chain(base, order))
                    dirs = tuple(unit(m) for m in others)
                    widths = tuple((HALF,) * (q - 1) for _ in centers)
                    cells.append(PLCell((cube_index, idx), side_type, centers, dirs, widths))
                    idx += 1
    return cells


def refine_exposed(n: int, k: int) -> Complex:
    """Typed tiling of ``S(k) = ∂B(k)``; ``k = 0`` is the plain cube boundary."""
    if k == 0:
        return initial_sphere(n)
    if k < 0:
        raise ValueError("k must be nonnegative")
    b = ball(n, k)
    faces = exposed_faces(n, k)
    assert all(norm(f.cube) == k for f in faces), "interior cube with an exposed face"
    cells = []
    for index, v in enumerate(b.shell()):
        cells.extend(_cube_cells(v, index))
    return Complex(n, tuple(cells), k=k)


def owning_cube(c: Complex, cell_id) -> LatticePoint:
    """The boundary cube a refined tile came from."""
    k = c.k
    return ball(len(c.cells[0].centers[0]), k).shell()[cell_id[0]]
