"""Cross-checks binding the subdivision engine to the lattice oracle.

Each check returns a :class:`CheckReport`; failures are reported with a
witness, never raised.
"""
from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import cover, rule
from .geom import (
    Complex,
    SearchBudgetExceeded,
    Simplex,
    euler_characteristic,
    labeled_isomorphic,
    rank,
    simplex_volume,
)

log = logging.getLogger(__name__)

PASS, FAIL, SKIP = "pass", "fail", "skipped"


@dataclass
class CheckReport:
    name: str
    params: dict
    status: str
    witness: object = None
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError("a failed check needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def line(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        msg = f"[{self.status.upper():7}] {self.name} {params} ({self.seconds:.2f}s)"
        if self.status != PASS and self.witness is not None:
            msg += f" witness: {self.witness}"
        return msg


def _timed(name, params, fn) -> CheckReport:
    t0 = time.perf_counter()
    status, witness, details = fn()
    return CheckReport(name, params, status, witness, time.perf_counter() - t0, details)


def _template_problems(t: rule.Template) -> tuple[object, dict]:
    parent = t.parent
    n, p, q = parent.type_label.n, parent.p, parent.q
    subtiles = t.subtiles
    details = {"volumes": [str(s.volume) for s in subtiles]}
    if len(subtiles) != 1 + 2 * q:
        return f"{len(subtiles)} subtiles, expected {1 + 2 * q}", details
    if t.inner.type_label != parent.type_label:
        return f"inner tile has type {t.inner.type_label}", details
    if q and any(f.type_label != rule.TileType(n, p + 1, q - 1) for f in t.flanks):
        return "flank with wrong type", details
    if q == 0 and not t.is_identity:
        return "q = 0 template is not the identity", details
    total = sum((s.volume for s in subtiles), Fraction(0))
    if total != parent.volume or total != rule.nominal_volume(p):
        return f"volume sum {total} != {rule.nominal_volume(p)}", details
    for s in subtiles:
        for simplex in s.simplices:
            for v in simplex.vertices:
                if not parent.contains(v):
                    return f"subtile {s.id} vertex {v} outside parent", details
    carve = _carve_out_problem(t)
    if carve:
        return carve, details
    # subtile facets pair up inside the parent; the rest tile its boundary
    seen: dict = {}
    for s in subtiles:
        for verts in s.facets.values():
            seen[verts] = seen.get(verts, 0) + 1
    traced = {vs for key in t.boundary_trace for vs in t.trace_vertices(key)}
    for verts, mult in seen.items():
        if mult != (1 if verts in traced else 2):
            return f"subtile facet {sorted(verts)} used {mult} times", details
    for key, pieces in t.boundary_trace.items():
        whole = parent.face_simplices(key)
        drop = _projection_axis(whole[0])
        area = sum(
            (_projected_volume(sub, drop) for i, fk in pieces for sub in subtiles[i].face_simplices(fk)),
            Fraction(0),
        )
        if area != sum((_projected_volume(sub, drop) for sub in whole), Fraction(0)):
            return f"boundary trace of facet {key} does not cover it", details
    # opposite cube facets must be cut alike under translation
    for k in range(q):
        lo = t.trace_vertices((parent.whole[0], _axis_state(q, k, -1)))
        hi = t.trace_vertices((parent.whole[0], _axis_state(q, k, 1)))
        shift = tuple(2 * parent.half_widths[0][k] * d for d in parent.directions[k])
        moved = sorted(sorted(tuple(a + b for a, b in zip(v, shift)) for v in vs) for vs in lo)
        if moved != sorted(sorted(vs) for vs in hi):
            return f"opposite facets of axis {k} are cut differently", details
    return None, details


def _carve_out_problem(t: rule.Template) -> str | None:
    """Each flank, read in its cone-sector coordinates (x, y', z), must have
    exactly the vertices of the region that f_1 leaves uncovered: the C
    vertices at z = 1 plus the f_1 images of the anchor ones."""
    parent = t.parent
    p, q = parent.p, parent.q
    for idx, flank in enumerate(t.flanks):
        k, side = divmod(idx, 2)
        sign = 1 if side else -1
        got = set()
        for v in flank.vertices:
            mu, off = parent.local_coords(v)
            w = parent.half_widths[0]
            z = sign * off[k] / w[k]
            rest = tuple((off[m] / (z * w[m]) + 1) / 2 for m in range(q) if m != k)
            got.add(tuple(mu[1:]) + rest + (z,))
        expected = set()
        xs = [(Fraction(0),) * (p - 1)] + [
            tuple(Fraction(int(i == j)) for j in range(p - 1)) for i in range(p - 1)
        ]
        for x in xs:
            for y in itertools.product((Fraction(0), Fraction(1)), repeat=q - 1):
                top = x + y + (Fraction(1),)
                expected.add(top)
                if not any(x):
                    expected.add(rule.homotopy_ft(p, q, 1, top))
        if got != expected:
            return f"flank {flank.id} is not the f_1 carve-out of its sector"
    return None


def _projection_axis(vertices) -> int:
    """A coordinate whose deletion keeps the simplex full rank."""
    base = vertices[0]
    edges = [[a - b for a, b in zip(v, base)] for v in vertices[1:]]
    for axis in range(len(base)):
        if rank([e[:axis] + e[axis + 1:] for e in edges]) == len(edges):
            return axis
    raise ValueError("degenerate facet")


def _projected_volume(vertices, drop: int) -> Fraction:
    """Volume of the simplex after deleting one coordinate; pieces of one
    hyperplane all scale by the same factor, so sums stay comparable."""
    return simplex_volume(Simplex(tuple(v[:drop] + v[drop + 1:] for v in vertices)))


def _axis_state(q, k, s):
    return tuple(s if m == k else 0 for m in range(q))


def check_template(n: int, p: int, template: rule.Template | None = None) -> CheckReport:
    def run():
        t = template if template is not None else rule.build_template(n, p)
        witness, details = _template_problems(t)
        return (FAIL if witness else PASS), witness, details

    return _timed("template", {"n": n, "p": p}, run)


def _engine(n, k) -> Complex:
    return rule.iterate(rule.initial_sphere(n), None, k)


def check_counts(n: int, k: int, engine: Complex | None = None) -> CheckReport:
    def run():
        e = engine if engine is not None else _engine(n, k)
        o = cover.refine_exposed(n, k)
        ce, co, cm = e.count_vector(n), o.count_vector(n), rule.predicted_counts(n, k)
        details = {"engine": ce, "oracle": co, "matrix": cm}
        if not ce == co == cm:
            return FAIL, details, details
        return PASS, None, details

    return _timed("counts", {"n": n, "k": k}, run)


def check_isomorphism(n: int, k: int, budget_seconds: float = 60.0) -> CheckReport:
    def run():
        e, o = _engine(n, k), cover.refine_exposed(n, k)
        try:
            mapping = labeled_isomorphic(e, o, budget_seconds=budget_seconds)
        except SearchBudgetExceeded:
            return SKIP, f"budget of {budget_seconds}s exhausted", {}
        if mapping is None:
            return FAIL, "no labeled isomorphism", {}
        return PASS, None, {"mapping": mapping, "tiles": len(e)}

    return _timed("isomorphism", {"n": n, "k": k}, run)


def check_euler(n: int, k: int, engine: Complex | None = None) -> CheckReport:
    def run():
        expected = 1 + (-1) ** (n - 1)
        e = engine if engine is not None else _engine(n, k)
        o = cover.refine_exposed(n, k)
        details = {"expected": expected}
        for label, c in (("engine", e), ("oracle", o)):
            chi = euler_characteristic(c)
            details[label] = chi
            if chi != expected:
                return FAIL, f"{label} chi = {chi}", details
            bad = c.unmatched_facets()
            if bad:
                return FAIL, f"{label} facet {sorted(bad[0])} not shared by 2 tiles", details
        return PASS, None, details

    return _timed("euler", {"n": n, "k": k}, run)


ALL_CHECKS = ("template", "counts", "euler", "iso")


def run_suite(
    max_n: int,
    max_k: int,
    checks=ALL_CHECKS,
    budget_seconds: float = 60.0,
) -> list[CheckReport]:
    """All checks over ``1 <= n <= max_n``, ``0 <= k <= max_k``.

    Euler checks stop at n = 4 and isomorphism checks at 400 tiles; larger
    instances are reported as skipped.
    """
    reports = []
    for n in range(1, max_n + 1):
        if "template" in checks:
            for p in range(1, n + 1):
                reports.append(check_template(n, p))
        engine = rule.initial_sphere(n)
        for k in range(0, max_k + 1):
            if k:
                engine = rule.subdivide(engine)
            if "counts" in checks:
                reports.append(check_counts(n, k, engine))
            if "euler" in checks:
                if n <= 4:
                    reports.append(check_euler(n, k, engine))
                else:
                    reports.append(CheckReport("euler", {"n": n, "k": k}, SKIP, "n > 4"))
            if "iso" in checks:
                if len(engine) <= 400:
                    reports.append(check_isomorphism(n, k, budget_seconds))
                else:
                    reports.append(
                        CheckReport("isomorphism", {"n": n, "k": k}, SKIP, f"{len(engine)} tiles > 400")
                    )
        for r in reports:
            log.debug(r.line())
    return reports


def suite_passed(reports) -> bool:
    return all(r.status != FAIL for r in reports)
