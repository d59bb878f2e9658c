"""Parse .ring and .mod specification files; emit and reload tables.

Ring files are `key = value` statements separated by `;` or newlines:

    p = 32003;  vars = x0, x1, x2, x3;
    ideal = x0^2 + x1^2 + x2^2 + x3^2, x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2

`p` is a prime or the token `rational`.  Module files declare generator
twists (the j in A(-j)) and one `rel = ...` line per relation, whose
entries are coordinates against the generators; the twist of each relation
is inferred from the degrees of its nonzero entries:

    twists = 0
    rel = x0;  rel = x1;  rel = x2;  rel = x3

Polynomial grammar: integer coefficients, `+ - * ^`, parentheses,
whitespace-insensitive, every variable of weight 1.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import dataclass, field

from .errors import DegreeMismatchError, InhomogeneousError, SpecSyntaxError
from .polys import Polynomial


@dataclass(frozen=True)
class RingSpec:
    prime: object  # int or the string "rational"
    variables: tuple
    ideal_generators: tuple  # of Polynomial
    source: str = ""

    def canonical_text(self) -> str:
        gens = ", ".join(g.render(list(self.variables)) for g in self.ideal_generators)
        return f"p={self.prime}; vars={','.join(self.variables)}; ideal={gens}"

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ModuleSpec:
    generator_twists: tuple
    relation_rows: tuple  # one tuple of Polynomial per relation
    relation_twists: tuple


# ---------------------------------------------------------------------------
# tokenizing / statement splitting with line+column tracking


class _Cursor:
    def __init__(self, text: str, line: int, col: int):
        self.text = text
        self.pos = 0
        self.line = line
        self.col = col

    def loc(self, offset=0):
        line, col = self.line, self.col
        for ch in self.text[: self.pos + offset]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        return line, col

    def error(self, msg, offset=0):
        line, col = self.loc(offset)
        return SpecSyntaxError(msg, line, col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_INT_RE = re.compile(r"[0-9]+")


def _parse_poly(cur: _Cursor, names: list[str]) -> Polynomial:
    nvars = len(names)
    index = {n: i for i, n in enumerate(names)}

    def parse_expr():
        sign = 1
        ch = cur.peek()
        if ch in "+-":
            cur.take()
            sign = -1 if ch == "-" else 1
        acc = parse_term().scale(sign)
        while True:
            ch = cur.peek()
            if ch == "+":
                cur.take()
                acc = acc + parse_term()
            elif ch == "-":
                cur.take()
                acc = acc - parse_term()
            else:
                return acc

    def parse_term():
        acc = parse_factor()
        while cur.peek() == "*":
            cur.take()
            acc = acc * parse_factor()
        return acc

    def parse_factor():
        base = parse_base()
        if cur.peek() == "^":
            cur.take()
            cur.skip_ws()
            m = _INT_RE.match(cur.text, cur.pos)
            if not m:
                raise cur.error("expected a non-negative integer exponent")
            cur.pos = m.end()
            e = int(m.group())
            out = Polynomial.constant(nvars, 1)
            for _ in range(e):
                out = out * base
            return out
        return base

    def parse_base():
        ch = cur.peek()
        if ch == "(":
            cur.take()
            inner = parse_expr()
            if cur.peek() != ")":
                raise cur.error("expected ')'")
            cur.take()
            return inner
        cur.skip_ws()
        m = _INT_RE.match(cur.text, cur.pos)
        if m:
            cur.pos = m.end()
            return Polynomial.constant(nvars, int(m.group()))
        m = _NAME_RE.match(cur.text, cur.pos)
        if m:
            name = m.group()
            if name not in index:
                raise cur.error(f"unknown variable '{name}'")
            cur.pos = m.end()
            return Polynomial.variable(index[name], nvars)
        raise cur.error("expected a number, variable, or '('")

    poly = parse_expr()
    cur.skip_ws()
    if cur.pos < len(cur.text):
        raise cur.error(f"unexpected character '{cur.text[cur.pos]}'")
    return poly


def parse_polynomial(text: str, names, line=1, col=1) -> Polynomial:
    return _parse_poly(_Cursor(text, line, col), list(names))


def _statements(text: str):
    """Yield (key, value, line, col) for `key = value` statements.

    Statements are separated by ';' or newlines; '#' starts a comment.
    A statement may span lines only via explicit ';' splitting, so the
    value is everything up to the next separator.
    """
    line = 1
    col = 1
    buf = []
    start = None
    for ch in text + "\n":
        if ch in ";\n":
            stmt = "".join(buf)
            if stmt.strip():
                yield stmt, start
            buf = []
            start = None
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
            continue
        if start is None and not ch.isspace():
            start = (line, col)
        buf.append(ch)
        col += 1


def _split_statement(stmt: str, loc):
    if "#" in stmt:
        stmt = stmt[: stmt.index("#")]
    if not stmt.strip():
        return None
    if "=" not in stmt:
        raise SpecSyntaxError("expected 'key = value'", loc[0], loc[1])
    key, value = stmt.split("=", 1)
    eqpos = stmt.index("=")
    return key.strip(), value, (loc[0], loc[1] + eqpos + 1)


def _split_commas(value: str):
    """Split on top-level commas, keeping offsets for error reporting."""
    parts = []
    depth = 0
    buf = []
    off = 0
    for i, ch in enumerate(value):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(("".join(buf), off))
            buf = []
            off = i + 1
        else:
            buf.append(ch)
    parts.append(("".join(buf), off))
    return parts


def parse_ring_spec(text: str) -> RingSpec:
    prime = None
    variables = None
    ideal_raw = None
    for stmt, loc in _statements(text):
        split = _split_statement(stmt, loc)
        if split is None:
            continue
        key, value, vloc = split
        if key == "p":
            tok = value.strip()
            if tok == "rational":
                prime = "rational"
            else:
                try:
                    prime = int(tok)
                except ValueError:
                    raise SpecSyntaxError(
                        f"p must be a prime or 'rational', got '{tok}'", *vloc
                    )
        elif key == "vars":
            names = [v.strip() for v in value.split(",")]
            if any(not _NAME_RE.fullmatch(n) for n in names):
                raise SpecSyntaxError("invalid variable name", *vloc)
            if len(set(names)) != len(names):
                raise SpecSyntaxError("duplicate variable name", *vloc)
            variables = tuple(names)
        elif key == "ideal":
            ideal_raw = (value, vloc)
        else:
            raise SpecSyntaxError(f"unknown key '{key}'", loc[0], loc[1])
    if prime is None:
        raise SpecSyntaxError("missing 'p = ...' statement", 1, 1)
    if variables is None:
        raise SpecSyntaxError("missing 'vars = ...' statement", 1, 1)
    gens = []
    if ideal_raw is not None and ideal_raw[0].strip():
        value, vloc = ideal_raw
        for expr, off in _split_commas(value):
            if not expr.strip():
                raise SpecSyntaxError("empty ideal generator", *vloc)
            g = parse_polynomial(expr, variables, vloc[0], vloc[1] + off)
            if g.is_zero():
                raise SpecSyntaxError("zero ideal generator", *vloc)
            if not g.is_homogeneous():
                raise InhomogeneousError(
                    f"ideal generator '{expr.strip()}' is not homogeneous"
                )
            gens.append(g)
    return RingSpec(prime, variables, tuple(gens), source=text)


def parse_module_spec(text: str, ring_spec: RingSpec) -> ModuleSpec:
    twists = None
    rel_rows = []
    names = ring_spec.variables
    for stmt, loc in _statements(text):
        split = _split_statement(stmt, loc)
        if split is None:
            continue
        key, value, vloc = split
        if key == "twists":
            try:
                twists = tuple(int(v.strip()) for v in value.split(","))
            except ValueError:
                raise SpecSyntaxError("twists must be integers", *vloc)
        elif key == "rel":
            entries = []
            for expr, off in _split_commas(value):
                p = parse_polynomial(expr, names, vloc[0], vloc[1] + off)
                if not p.is_homogeneous():
                    raise InhomogeneousError(
                        f"relation entry '{expr.strip()}' is not homogeneous"
                    )
                entries.append(p)
            rel_rows.append((entries, vloc))
        else:
            raise SpecSyntaxError(f"unknown key '{key}'", loc[0], loc[1])
    if twists is None:
        raise SpecSyntaxError("missing 'twists = ...' statement", 1, 1)

    rows = []
    rel_twists = []
    for ridx, (entries, vloc) in enumerate(rel_rows):
        if len(entries) != len(twists):
            raise SpecSyntaxError(
                f"relation {ridx} has {len(entries)} entries, "
                f"expected {len(twists)}",
                *vloc,
            )
        # the relation twist is forced by any nonzero entry
        rel_twist = None
        for gidx, p in enumerate(entries):
            if p.is_zero():
                continue
            t = p.degree() + twists[gidx]
            if rel_twist is None:
                rel_twist = t
            elif t != rel_twist:
                raise DegreeMismatchError(
                    gidx, ridx, rel_twist - twists[gidx], p.degree()
                )
        if rel_twist is None:
            raise SpecSyntaxError(f"relation {ridx} is identically zero", *vloc)
        rows.append(tuple(entries))
        rel_twists.append(rel_twist)
    return ModuleSpec(twists, tuple(rows), tuple(rel_twists))


# ---------------------------------------------------------------------------
# table documents


@dataclass
class TableDocument:
    kind: str  # betti | cohomology | report
    row_range: tuple | None  # (min, max) of the first index
    col_range: tuple | None
    cells: dict = field(default_factory=dict)  # (i, j) -> int
    metadata: dict = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, TableDocument)
            and self.kind == other.kind
            and self.row_range == other.row_range
            and self.col_range == other.col_range
            and self.cells == other.cells
        )


def _betti_text(doc: TableDocument) -> str:
    # Macaulay2-style diagonal layout: column = i, row = j - i;
    # "." is a computed zero, blank means not computed.
    if not doc.cells:
        return "(empty table)"
    imin = min(i for i, _ in doc.cells)
    imax = max(i for i, _ in doc.cells)
    dmin = min(j - i for i, j in doc.cells)
    dmax = max(j - i for i, j in doc.cells)
    cols = list(range(imin, imax + 1))
    width = max(
        [len(str(v)) for v in doc.cells.values()] + [len(str(c)) for c in cols]
    ) + 2
    lead = max(len(f"{d}:") for d in range(dmin, dmax + 1)) + 1
    lines = [" " * lead + "".join(f"{c:>{width}}" for c in cols)]
    for d in range(dmin, dmax + 1):
        row = [f"{d}:".rjust(lead)]
        for i in cols:
            v = doc.cells.get((i, i + d))
            if v is None:
                row.append(" " * width)
            else:
                row.append(f"{'.' if v == 0 else v:>{width}}")
        lines.append("".join(row).rstrip())
    return "\n".join(lines)


def _grid_text(doc: TableDocument) -> str:
    if not doc.cells:
        return "(empty table)"
    rows = sorted({i for i, _ in doc.cells})
    cols = sorted({j for _, j in doc.cells})
    width = max(
        [len(str(v)) for v in doc.cells.values()] + [len(str(c)) for c in cols]
    ) + 2
    lead = max(len(f"{r}:") for r in rows) + 1
    lines = [" " * lead + "".join(f"{c:>{width}}" for c in cols)]
    for r in rows:
        row = [f"{r}:".rjust(lead)]
        for c in cols:
            v = doc.cells.get((r, c))
            row.append(" " * width if v is None else f"{v:>{width}}")
        lines.append("".join(row).rstrip())
    return "\n".join(lines)


def emit_table(doc: TableDocument, fmt: str = "text") -> str:
    if fmt == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["i", "j", "value"])
        for (i, j), v in sorted(doc.cells.items()):
            w.writerow([i, j, v])
        return out.getvalue().rstrip("\n")
    if fmt == "json":
        payload = {
            "kind": doc.kind,
            "row_range": list(doc.row_range) if doc.row_range else None,
            "col_range": list(doc.col_range) if doc.col_range else None,
            "cells": [[i, j, v] for (i, j), v in sorted(doc.cells.items())],
            "metadata": doc.metadata,
        }
        return json.dumps(payload, indent=2, sort_keys=True)
    if fmt == "text":
        if doc.kind == "betti":
            return _betti_text(doc)
        return _grid_text(doc)
    raise ValueError(f"unknown table format '{fmt}'")


def load_table_csv(text: str, kind="betti") -> TableDocument:
    rows = list(csv.reader(io.StringIO(text)))
    cells = {}
    for row in rows[1:]:
        if not row:
            continue
        i, j, v = (int(x) for x in row)
        cells[(i, j)] = v
    rr = (min(i for i, _ in cells), max(i for i, _ in cells)) if cells else None
    cr = (min(j for _, j in cells), max(j for _, j in cells)) if cells else None
    return TableDocument(kind, rr, cr, cells)


def load_table_json(text: str) -> TableDocument:
    payload = json.loads(text)
    cells = {(i, j): v for i, j, v in payload["cells"]}
    return TableDocument(
        payload["kind"],
        tuple(payload["row_range"]) if payload["row_range"] else None,
        tuple(payload["col_range"]) if payload["col_range"] else None,
        cells,
        payload.get("metadata", {}),
    )
