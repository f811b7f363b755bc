"""Line-oriented input format and key/value report output.

Grammar (``#`` starts a comment, blank lines are ignored)::

    file      := block*
    block     := group | morphism | tower | sequence | family | chain
    group     := "group" NAME  "gens" INT  ["rels" row*]  "end"
    morphism  := "morphism" NAME ":" GROUP "->" GROUP  "matrix" row*  "end"
    tower     := "tower" NAME  ( "pattern" ("mult" INT | "factorial" | "const" GROUP)
                               | "stages" GROUP+  ["maps" MORPHISM*] )  "end"
    sequence  := "sequence" NAME  "maps" MORPHISM MORPHISM  "end"
    family    := "family" NAME  "groups" GROUP+  "end"
    chain     := "chain" NAME  "subgroups" MORPHISM+  "end"
    row       := INT+

Each ``rels`` row is one relator (a column of the relation matrix written
as a row).  Each ``matrix`` row is a row of the morphism matrix, which has
one column per source generator.  Wherever a group name is expected a
literal such as ``Z``, ``0``, ``Z/4``, ``Z^2`` or ``Z/2+Z/4+Z`` is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .fpab import ZERO, FpGroup, Morphism, abelian, make_group
from .tower import Tower, const_tower, factorial_tower, finite_tower, mult_tower
from .zlinalg import IntMatrix


class InputError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Document:
    groups: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    towers: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    chains: dict = field(default_factory=dict)
    order: list = field(default_factory=list)  # (kind, name) in file order

    def group(self, name: str, line: int | None = None) -> FpGroup:
        if name in self.groups:
            return self.groups[name]
        try:
            return group_literal(name)
        except InputError:
            raise InputError(f"unknown group {name!r}", line) from None

    def morphism(self, name: str, line: int | None = None) -> Morphism:
        if name not in self.morphisms:
            raise InputError(f"unknown morphism {name!r}", line)
        return self.morphisms[name]

    def lookup(self, table: str, name: str, line: int | None = None):
        t = getattr(self, table)
        if name not in t:
            raise InputError(f"unknown {table[:-1]} {name!r}", line)
        return t[name]


def group_literal(text: str) -> FpGroup:
    """``Z``, ``0``, ``Z/n``, ``Z^k`` and ``+``-sums of those."""
    torsion, rank = [], 0
    for part in text.replace(" ", "").split("+"):
        if part == "0":
            continue
        if part == "Z":
            rank += 1
        elif part.startswith("Z^") and part[2:].isdigit():
            rank += int(part[2:])
        elif part.startswith("Z/") and part[2:].isdigit() and int(part[2:]) > 0:
            if int(part[2:]) > 1:
                torsion.append(int(part[2:]))
        else:
            raise InputError(f"not a group literal: {text!r}")
    if not torsion and not rank:
        return ZERO
    return abelian(torsion, rank)


def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InputError("expected integers", line) from None


def parse(text: str) -> Document:
    doc = Document()
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body.split()))
    i = 0
    while i < len(lines):
        no, tok = lines[i]
        kind = tok[0]
        j = i + 1
        while j < len(lines) and lines[j][1] != ["end"]:
            j += 1
        if j == len(lines):
            raise InputError(f"block {kind!r} has no 'end'", no)
        body = lines[i + 1:j]
        if kind == "group":
            _parse_group(doc, no, tok, body)
        elif kind == "morphism":
            _parse_morphism(doc, no, tok, body)
        elif kind == "tower":
            _parse_tower(doc, no, tok, body)
        elif kind == "sequence":
            _parse_named_list(doc, no, tok, body, "maps", "sequences", 2)
        elif kind == "family":
            _parse_named_list(doc, no, tok, body, "groups", "families", None)
        elif kind == "chain":
            _parse_named_list(doc, no, tok, body, "subgroups", "chains", None)
        else:
            raise InputError(f"unknown block {kind!r}", no)
        i = j + 1
    return doc


def _name(tok: list[str], no: int) -> str:
    if len(tok) < 2:
        raise InputError(f"{tok[0]} needs a name", no)
    return tok[1]


def _parse_group(doc: Document, no: int, tok: list[str], body) -> None:
    name = _name(tok, no)
    ngens, rows, mode = None, [], None
    for ln, t in body:
        if t[0] == "gens":
            if len(t) != 2:
                raise InputError("gens takes one integer", ln)
            ngens = _ints(t[1:], ln)[0]
        elif t == ["rels"]:
            mode = "rels"
        elif mode == "rels":
            rows.append((ln, _ints(t, ln)))
        else:
            raise InputError(f"unexpected {t[0]!r} in group block", ln)
    if ngens is None:
        raise InputError("group block needs 'gens'", no)
    for ln, r in rows:
        if len(r) != ngens:
            raise InputError(f"relator has {len(r)} entries, expected {ngens}", ln)
    rels = IntMatrix.from_columns([r for _, r in rows], ngens)
    doc.groups[name] = make_group(rels, ngens)
    doc.order.append(("group", name))


def _parse_morphism(doc: Document, no: int, tok: list[str], body) -> None:
    if len(tok) != 6 or tok[2] != ":" or tok[4] != "->":
        raise InputError("expected 'morphism NAME : SRC -> DST'", no)
    name = tok[1]
    src, dst = doc.group(tok[3], no), doc.group(tok[5], no)
    if not body or body[0][1] != ["matrix"]:
        raise InputError("morphism block needs 'matrix'", no)
    rows = []
    for ln, t in body[1:]:
        r = _ints(t, ln)
        if len(r) != src.ngens:
            raise InputError(f"row has {len(r)} entries, expected {src.ngens}", ln)
        rows.append(r)
    if not rows and src.ngens == 0:
        rows = [[] for _ in range(dst.ngens)]  # maps out of a zero-generator group have empty rows
    if len(rows) != dst.ngens:
        raise InputError(f"matrix has {len(rows)} rows, expected {dst.ngens}", no)
    try:
        doc.morphisms[name] = Morphism(src, dst, IntMatrix.from_rows(rows, src.ngens))
    except ValueError as e:
        raise InputError(str(e), no) from None
    doc.order.append(("morphism", name))


def _parse_tower(doc: Document, no: int, tok: list[str], body) -> None:
    name = _name(tok, no)
    if not body:
        raise InputError("empty tower block", no)
    ln, t = body[0]
    if t[0] == "pattern":
        if t[1:2] == ["mult"] and len(t) == 3:
            c = _ints(t[2:], ln)[0]
            if c == 0:
                raise InputError("multiplier must be nonzero", ln)
            tower = mult_tower(c)
        elif t[1:] == ["factorial"]:
            tower = factorial_tower()
        elif t[1:2] == ["const"] and len(t) == 3:
            tower = const_tower(doc.group(t[2], ln))
        else:
            raise InputError("unknown pattern", ln)
    elif t[0] == "stages":
        stages = [doc.group(g, ln) for g in t[1:]]
        maps = []
        for ln2, t2 in body[1:]:
            if t2[0] != "maps":
                raise InputError(f"unexpected {t2[0]!r} in tower block", ln2)
            maps.extend(doc.morphism(m, ln2) for m in t2[1:])
        try:
            tower = finite_tower(stages, maps)
        except ValueError as e:
            raise InputError(str(e), ln) from None
    else:
        raise InputError("tower needs 'pattern' or 'stages'", ln)
    doc.towers[name] = tower
    doc.order.append(("tower", name))


def _parse_named_list(doc: Document, no: int, tok, body, key: str, table: str, arity) -> None:
    name = _name(tok, no)
    items = []
    for ln, t in body:
        if t[0] != key:
            raise InputError(f"expected {key!r}", ln)
        if key == "groups":
            items.extend(doc.group(g, ln) for g in t[1:])
        else:
            items.extend(doc.morphism(m, ln) for m in t[1:])
    if arity is not None and len(items) != arity:
        raise InputError(f"{tok[0]} needs exactly {arity} entries", no)
    if not items and key != "groups":
        raise InputError(f"{tok[0]} is empty", no)
    getattr(doc, table)[name] = items
    doc.order.append((tok[0], name))


# --------------------------------------------------------------------------
# reports


def format_invariants(g: FpGroup) -> str:
    r, tors = g.invariants()
    return f"{r}, [{','.join(str(d) for d in tors)}]"


def matrix_lines(m: IntMatrix) -> list[str]:
    if m.rows == 0 or m.cols == 0:
        return [f"  ({m.rows}x{m.cols})"]
    return ["  " + " ".join(str(x) for x in m.row(i)) for i in range(m.rows)]


class Report:
    """Ordered key/value lines; matrices follow their key as indented rows."""

    def __init__(self):
        self.lines: list[str] = []

    def add(self, key: str, value: Any) -> None:
        if isinstance(value, Morphism):
            self.lines.append(f"{key}: {value.src.describe()} -> {value.dst.describe()}")
            self.lines.extend(matrix_lines(value.mat))
        elif isinstance(value, IntMatrix):
            self.lines.append(f"{key}:")
            self.lines.extend(matrix_lines(value))
        elif isinstance(value, FpGroup):
            self.lines.append(f"{key}: {value.describe()}")
        elif isinstance(value, Tower):
            self.lines.append(f"{key}: {value.describe()}")
        elif isinstance(value, dict):
            for k in value:
                self.add(f"{key}.{k}", value[k])
        elif isinstance(value, (list, tuple)) and any(isinstance(v, (Morphism, IntMatrix, dict, list, tuple)) for v in value):
            for n, v in enumerate(value):
                self.add(f"{key}.{n}", v)
        elif isinstance(value, (list, tuple)):
            self.lines.append(f"{key}: [{', '.join(_scalar(v) for v in value)}]")
        else:
            self.lines.append(f"{key}: {_scalar(value)}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, FpGroup):
        return v.describe()
    if v is None:
        return "none"
    return str(v)
