"""Parsing and emission: graph6, plain edge lists, structure JSON documents.

Edge-list format: a "n m" header line then m lines "u v".  Structure JSON:
{"signature": [{"name":..., "arity":...}, ...], "n": ..., "tables":
{name: [[...], ...]}}.  graph6 follows the standard <= 62-vertex encoding
(long forms are out of scope at desk sizes).
"""

from __future__ import annotations

import json

from .core import FiniteGraph, RelationalStructure, Signature
from .errors import HomlabError


class ParseError(HomlabError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column else "")
        super().__init__(message + where)
        self.line = line
        self.column = column


# --- graph6 ----------------------------------------------------------------


def parse_graph6(text):
    data = text.strip()
    if data.startswith(">>graph6<<"):
        data = data[len(">>graph6<<") :]
    if not data:
        raise ParseError("empty graph6 string")
    n = ord(data[0]) - 63
    if not (0 <= n <= 62):
        raise ParseError("only graph6 strings with n <= 62 are supported")
    body = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise ParseError(f"graph6 body should have {need} characters, got {len(body)}")
    bits = []
    for ch in body:
        val = ord(ch) - 63
        if not (0 <= val < 64):
            raise ParseError(f"bad graph6 character {ch!r}")
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    rows = [0] * n
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            idx += 1
    return FiniteGraph(n, tuple(rows))


def emit_graph6(g: FiniteGraph):
    if g.n > 62:
        raise ParseError("only graphs with n <= 62 can be emitted as graph6")
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.adjacent(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


# --- edge lists --------------------------------------------------------------


def parse_edge_list(text):
    lines = [ln for ln in text.splitlines()]
    rows = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(lines)]
    rows = [(i, ln) for i, ln in rows if ln]
    if not rows:
        raise ParseError("empty edge list")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError("header must be 'n m'", line=lineno)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError("header must be two integers", line=lineno) from None
    if len(rows) - 1 != m:
        raise ParseError(f"expected {m} edge lines, found {len(rows) - 1}")
    edges = []
    for lineno, ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError("edge line must be 'u v'", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("edge endpoints must be integers", line=lineno) from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParseError(f"illegal edge ({u}, {v})", line=lineno)
        edges.append((u, v))
    return FiniteGraph.from_edges(n, edges)


def emit_edge_list(g: FiniteGraph):
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


# --- structure JSON ----------------------------------------------------------


def parse_structure_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), line=exc.lineno, column=exc.colno) from None
    try:
        sig = Signature(
            tuple((r["name"], int(r["arity"])) for r in doc["signature"])
        )
        n = int(doc["n"])
        tables = {
            name: [tuple(t) for t in rows]
            for name, rows in doc.get("tables", {}).items()
        }
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed structure document: {exc}") from None
    return RelationalStructure.make(sig, n, tables)


def emit_structure_json(s: RelationalStructure):
    doc = {
        "signature": [
            {"name": name, "arity": arity} for name, arity in s.signature.relations
        ],
        "n": s.n,
        "tables": {
            name: sorted(list(t) for t in table) for name, table in s.tables
        },
    }
    return json.dumps(doc, sort_keys=True)


def load_graph(path_or_text, fmt=None):
    """Parse a graph from text, guessing the format when not given."""
    text = path_or_text
    if fmt == "g6":
        return parse_graph6(text)
    if fmt == "edges":
        return parse_edge_list(text)
    stripped = text.strip()
    if "\n" in stripped or (stripped and stripped.split()[0].isdigit()):
        return parse_edge_list(text)
    return parse_graph6(text)
