"""ComplexDocument JSON, OFF and DOT writers.

JSON keeps every rational as a ``"numerator/denominator"`` string; OFF
prints exact decimal expansions (every coordinate here is dyadic).
"""
from __future__ import annotations

import json
from fractions import Fraction

from .geom import Complex, PLCell, TileType

FORMAT_VERSION = "1"


class UnsupportedFormat(ValueError):
    pass


def rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


def id_str(cell_id) -> str:
    return ".".join(str(i) for i in cell_id)


def parse_id(s: str) -> tuple:
    return tuple(int(part) for part in s.split("."))


def _vec(v) -> list:
    return [rat(x) for x in v]


def to_document(c: Complex) -> dict:
    index = c.vertex_index
    n = c.cells[0].type_label.n if c.cells else c.ambient_dim
    tiles = []
    for cell in c.cells:
        tiles.append(
            {
                "id": id_str(cell.id),
                "type": {"p": cell.p, "q": cell.q},
                "anchor": index[cell.anchor],
                "simplices": [[index[v] for v in s.vertices] for s in cell.simplices],
                "frame": {
                    "centers": [_vec(v) for v in cell.centers],
                    "directions": [_vec(d) for d in cell.directions],
                    "half_widths": [_vec(row) for row in cell.half_widths],
                },
            }
        )
    adjacency = [[id_str(a), id_str(b), m] for (a, b), m in sorted(c.adjacency.items())]
    return {
        "format_version": FORMAT_VERSION,
        "n": n,
        "k": c.k,
        "ambient_dim": c.ambient_dim,
        "vertices": [_vec(v) for v in c.vertex_pool],
        "tiles": tiles,
        "adjacency": adjacency,
    }


def dumps(c: Complex) -> str:
    return json.dumps(to_document(c), indent=1) + "\n"


def from_document(doc: dict) -> Complex:
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported document version {doc.get('format_version')!r}")
    n = doc["n"]
    nverts = len(doc["vertices"])
    cells = []
    for t in doc["tiles"]:
        if not 0 <= t["anchor"] < nverts:
            raise ValueError(f"tile {t['id']}: anchor index out of range")
        if any(not 0 <= i < nverts for s in t["simplices"] for i in s):
            raise ValueError(f"tile {t['id']}: simplex index out of range")
        frame = t["frame"]
        cells.append(
            PLCell(
                parse_id(t["id"]),
                TileType(n, t["type"]["p"], t["type"]["q"]),
                tuple(tuple(parse_rat(x) for x in v) for v in frame["centers"]),
                tuple(tuple(parse_rat(x) for x in v) for v in frame["directions"]),
                tuple(tuple(parse_rat(x) for x in row) for row in frame["half_widths"]),
            )
        )
    return Complex(doc["ambient_dim"], tuple(cells), k=doc.get("k", 0))


def loads(text: str) -> Complex:
    return from_document(json.loads(text))


def decimal_str(x: Fraction) -> str:
    """Exact decimal expansion; the denominator must only have factors 2 and 5."""
    den, twos, fives = x.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    digits = max(twos, fives)
    scaled = x.numerator * (10**digits) // x.denominator
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}".rstrip("0").rstrip(".")


def to_off(c: Complex) -> str:
    """Each tile's simplices become OFF faces; points are padded to 3D."""
    if c.ambient_dim > 3 or c.dim > 2:
        raise UnsupportedFormat("OFF export needs tiles of dimension <= 2 in at most 3 dimensions")
    index = c.vertex_index
    faces = [[index[v] for v in s.vertices] for cell in c.cells for s in cell.simplices]
    lines = ["OFF", f"{len(c.vertex_pool)} {len(faces)} 0"]
    for v in c.vertex_pool:
        coords = [decimal_str(x) for x in v] + ["0"] * (3 - len(v))
        lines.append(" ".join(coords))
    for f in faces:
        lines.append(" ".join([str(len(f))] + [str(i) for i in f]))
    return "\n".join(lines) + "\n"


def to_dot(c: Complex) -> str:
    lines = ["graph tiles {"]
    for cell in c.cells:
        lines.append(f'  "{id_str(cell.id)}" [type="{cell.p},{cell.q}", label="{cell.type_label.letter}"];')
    for (a, b), m in sorted(c.adjacency.items()):
        attr = f" [multiplicity={m}]" if m != 1 else ""
        lines.append(f'  "{id_str(a)}" -- "{id_str(b)}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"


WRITERS = {"json": dumps, "off": to_off, "dot": to_dot}


def render(c: Complex, fmt: str) -> str:
    try:
        writer = WRITERS[fmt]
    except KeyError:
        raise UnsupportedFormat(f"unknown format {fmt!r}") from None
    return writer(c)
