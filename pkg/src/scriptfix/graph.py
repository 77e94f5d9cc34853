"""Partial-order script graphs.

A script is a labeled DAG: nodes are event steps, an edge (a, b) means step a
must happen before step b. Scripts are immutable; every operation that changes
one returns a new object. Text form is a small subset of DOT (see parse_dot).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class ScriptError(ValueError):
    """Base class for script-graph failures."""


class DotParseError(ScriptError):
    """Syntax or structural error in DOT input, with a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class CycleError(ScriptError):
    """The edge set admits no topological order."""


class DuplicateNodeError(ScriptError):
    pass


class DanglingEdgeError(ScriptError):
    pass


class NoSuchNodeError(ScriptError):
    pass


class AmbiguousLabelError(ScriptError):
    pass


def normalize_label(text: str) -> str:
    """Lowercase and collapse whitespace; the form used for label matching."""
    return " ".join(text.lower().split())


def normalize_ws(text: str) -> str:
    return " ".join(text.split())


class Occurrence(Enum):
    """How a NodeRef resolves when several nodes share its label."""

    UNIQUE = "unique"
    LAST = "last_in_topological_order"


@dataclass(frozen=True)
class Node:
    id: str
    label: str


@dataclass(frozen=True)
class NodeRef:
    """A reference to a node by label text.

    Matching is by normalized label. With Occurrence.LAST (the default),
    duplicated labels resolve to the last occurrence in topological order,
    so references into scripts with a redundant step pick the later copy.
    """

    label: str
    occurrence: Occurrence = Occurrence.LAST


@dataclass(frozen=True)
class Script:
    """An immutable script graph.

    nodes keeps declaration order (it breaks ties in linearize); edges is a
    set of (from_id, to_id) pairs. The constructor validates everything:
    unique ids, clean labels, edge endpoints, no self edges, acyclicity.
    """

    goal: str = ""
    nodes: tuple[Node, ...] = ()
    edges: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        seen: set[str] = set()
        for node in self.nodes:
            if node.id in seen:
                raise DuplicateNodeError(f"duplicate node id {node.id!r}")
            seen.add(node.id)
            if node.label != node.label.strip() or not node.label:
                raise ScriptError(f"node {node.id!r} label must be non-empty and trimmed")
            if "\n" in node.label or "\r" in node.label:
                raise ScriptError(f"node {node.id!r} label must be a single line")
        for a, b in self.edges:
            if a not in seen or b not in seen:
                raise DanglingEdgeError(f"edge ({a!r}, {b!r}) references an unknown node")
            if a == b:
                raise ScriptError(f"self edge on node {a!r}")
        _topological_ids(self)  # raises CycleError on cycles

    # Small accessors used throughout the package; all O(n) on purpose,
    # scripts here are a handful of steps.

    def node_by_id(self, node_id: str) -> Node:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise NoSuchNodeError(f"no node with id {node_id!r}")

    def predecessors(self, node_id: str) -> set[str]:
        return {a for a, b in self.edges if b == node_id}

    def successors(self, node_id: str) -> set[str]:
        return {b for a, b in self.edges if a == node_id}

    def has_path(self, src: str, dst: str) -> bool:
        """True if dst is reachable from src along edges (src != dst)."""
        frontier = [src]
        seen = set()
        while frontier:
            cur = frontier.pop()
            for nxt in self.successors(cur):
                if nxt == dst:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return False

    def with_goal(self, goal: str) -> "Script":
        return Script(goal=goal, nodes=self.nodes, edges=self.edges)


def chain(goal: str, labels: list[str] | tuple[str, ...]) -> Script:
    """Build a totally ordered script from a step list."""
    nodes = tuple(Node(f"n{i + 1}", label) for i, label in enumerate(labels))
    edges = {(nodes[i].id, nodes[i + 1].id) for i in range(len(nodes) - 1)}
    return Script(goal=goal, nodes=nodes, edges=frozenset(edges))


def _topological_ids(s: Script) -> list[str]:
    """Kahn's algorithm; ties go to declaration order."""
    order_index = {node.id: i for i, node in enumerate(s.nodes)}
    indegree = {node.id: 0 for node in s.nodes}
    for _, b in s.edges:
        indegree[b] += 1
    out: list[str] = []
    ready = sorted((nid for nid, d in indegree.items() if d == 0), key=order_index.get)
    while ready:
        nid = ready.pop(0)
        out.append(nid)
        for nxt in sorted(s.successors(nid), key=order_index.get):
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                # insert keeping declaration order among ready nodes
                ready.append(nxt)
                ready.sort(key=order_index.get)
    if len(out) != len(s.nodes):
        stuck = [n.label for n in s.nodes if n.id not in set(out)]
        raise CycleError(f"cycle through: {', '.join(stuck[:4])}")
    return out


def linearize(s: Script) -> list[str]:
    """Labels in topological order, declaration order breaking ties."""
    return [s.node_by_id(nid).label for nid in _topological_ids(s)]


def numbered_steps(s: Script) -> list[str]:
    return [f"{i + 1}. {label}" for i, label in enumerate(linearize(s))]


def resolve_node(s: Script, ref: NodeRef) -> Node:
    """Resolve a label reference to a node.

    Raises NoSuchNodeError if nothing matches; with Occurrence.UNIQUE a
    duplicated label raises AmbiguousLabelError, otherwise the last match in
    topological order wins (the tie rule is total, so this never fails on
    duplicates).
    """
    want = normalize_label(ref.label)
    matches = [nid for nid in _topological_ids(s) if normalize_label(s.node_by_id(nid).label) == want]
    if not matches:
        raise NoSuchNodeError(f"no node labeled {ref.label!r}")
    if len(matches) > 1 and ref.occurrence is Occurrence.UNIQUE:
        raise AmbiguousLabelError(f"label {ref.label!r} matches {len(matches)} nodes")
    return s.node_by_id(matches[-1])


def canonical_equal(a: Script, b: Script) -> bool:
    """Structural equality over labels, ignoring node ids and declaration order.

    True when the (normalized) label multisets, the edge sets over labels, and
    the whitespace-normalized goals all agree. Duplicated labels make the
    label->node mapping ambiguous, so either side having one raises
    AmbiguousLabelError.
    """
    la = [normalize_label(n.label) for n in a.nodes]
    lb = [normalize_label(n.label) for n in b.nodes]
    if len(set(la)) != len(la) or len(set(lb)) != len(lb):
        raise AmbiguousLabelError("canonical_equal needs unique labels on both sides")
    if sorted(la) != sorted(lb):
        return False
    if normalize_ws(a.goal) != normalize_ws(b.goal):
        return False
    amap = {n.id: normalize_label(n.label) for n in a.nodes}
    bmap = {n.id: normalize_label(n.label) for n in b.nodes}
    ea = {(amap[x], amap[y]) for x, y in a.edges}
    eb = {(bmap[x], bmap[y]) for x, y in b.edges}
    return ea == eb


# --- DOT subset -------------------------------------------------------------
#
# Grammar:  'digraph' [name] '{' (node_stmt | edge_stmt)* '}'
#   node_stmt = id ['[' 'label' '=' id ']']
#   edge_stmt = id ('->' id)+
# ids are bare ([A-Za-z0-9_.]+) or double-quoted with \" and \\ escapes;
# ';' separators optional; '//' and '/* */' comments; UTF-8 throughout.
# The optional graph name carries the goal text. Attributes other than
# label are rejected rather than skipped: anything else in the input is
# almost certainly a mistake we would silently eat.

_BARE = re.compile(r"[A-Za-z0-9_.]+")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "id" | "str" | "punct" | "eof"
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                advance(1)
            continue
        if text.startswith("/*", i):
            start_line, start_col = line, col
            advance(2)
            while i < n and not text.startswith("*/", i):
                advance(1)
            if i >= n:
                raise DotParseError("unterminated comment", start_line, start_col)
            advance(2)
            continue
        if ch == '"':
            start_line, start_col = line, col
            advance(1)
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\\" and i + 1 < n and text[i + 1] in '"\\':
                    buf.append(text[i + 1])
                    advance(2)
                else:
                    buf.append(text[i])
                    advance(1)
            if i >= n:
                raise DotParseError("unterminated quoted id", start_line, start_col)
            advance(1)
            toks.append(_Tok("str", "".join(buf), start_line, start_col))
            continue
        if text.startswith("->", i):
            toks.append(_Tok("punct", "->", line, col))
            advance(2)
            continue
        if ch in "{}[]=;":
            toks.append(_Tok("punct", ch, line, col))
            advance(1)
            continue
        m = _BARE.match(text, i)
        if m:
            toks.append(_Tok("id", m.group(0), line, col))
            advance(len(m.group(0)))
            continue
        raise DotParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


class _DotParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise DotParseError(message, tok.line, tok.col)

    def expect_punct(self, value: str) -> _Tok:
        tok = self.next()
        if tok.kind != "punct" or tok.value != value:
            self.fail(f"expected {value!r}, found {tok.value!r}" if tok.kind != "eof" else f"expected {value!r}, found end of input", tok)
        return tok

    def ident(self) -> _Tok:
        tok = self.next()
        if tok.kind not in ("id", "str"):
            self.fail(f"expected a node id, found {tok.value!r}" if tok.kind != "eof" else "expected a node id, found end of input", tok)
        return tok

    def parse(self) -> Script:
        head = self.next()
        if head.kind != "id" or head.value.lower() != "digraph":
            self.fail("input must start with 'digraph'", head)
        goal = ""
        if self.peek().kind in ("id", "str"):
            goal = self.next().value
        self.expect_punct("{")

        order: list[str] = []
        labels: dict[str, str] = {}
        explicit: set[str] = set()
        stated: set[str] = set()  # ids that appeared as a node statement
        edge_only: dict[str, _Tok] = {}
        edges: list[tuple[str, str]] = []
        edge_set: set[tuple[str, str]] = set()

        def declare(tok: _Tok, label: str | None = None):
            nid = tok.value
            if nid not in labels:
                order.append(nid)
                labels[nid] = label if label is not None else nid
            if label is not None:
                if nid in explicit:
                    self.fail(f"duplicate node id {nid!r}", tok)
                # a bare mention may precede its labeled declaration
                labels[nid] = label
                explicit.add(nid)

        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value == "}":
                break
            if tok.kind == "eof":
                self.fail("expected '}' before end of input", tok)
            first = self.ident()
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.value == "[":
                self.next()
                attr = self.next()
                if attr.kind != "id" or attr.value != "label":
                    self.fail(f"unsupported attribute {attr.value!r} (only label)", attr)
                self.expect_punct("=")
                val = self.ident()
                self.expect_punct("]")
                declare(first, val.value)
                stated.add(first.value)
            elif nxt.kind == "punct" and nxt.value == "->":
                declare(first)
                edge_only.setdefault(first.value, first)
                prev = first
                while self.peek().kind == "punct" and self.peek().value == "->":
                    self.next()
                    cur = self.ident()
                    declare(cur)
                    edge_only.setdefault(cur.value, cur)
                    if prev.value == cur.value:
                        self.fail(f"self edge on {cur.value!r}", cur)
                    pair = (prev.value, cur.value)
                    if pair not in edge_set:
                        edge_set.add(pair)
                        edges.append(pair)
                    prev = cur
            else:
                declare(first)
                stated.add(first.value)
            if self.peek().kind == "punct" and self.peek().value == ";":
                self.next()

        self.expect_punct("}")
        tail = self.next()
        if tail.kind != "eof":
            self.fail(f"unexpected trailing input {tail.value!r}", tail)

        # With explicit label attributes in play, a typo'd edge endpoint would
        # silently become a fresh node; insist such ids appear as statements.
        if explicit:
            for nid, tok in edge_only.items():
                if nid not in stated:
                    raise DotParseError(f"edge references undeclared node {nid!r}", tok.line, tok.col)

        nodes = tuple(Node(nid, labels[nid].strip()) for nid in order)
        try:
            return Script(goal=goal, nodes=nodes, edges=frozenset(edges))
        except CycleError as exc:
            raise CycleError(f"script is cyclic: {exc}") from exc


def parse_dot(text: str) -> Script:
    """Parse the DOT subset into a Script.

    Accepts quoted or bare ids, optional [label="..."] attributes, edge
    chains a -> b -> c, optional semicolons, // and /* */ comments, and an
    optional graph name which becomes the goal. Errors carry line/column.
    """
    return _DotParser(text).parse()


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def serialize_dot(s: Script) -> str:
    """Deterministic canonical DOT.

    Every node is emitted in declaration order, then edges sorted by
    declaration index, so parse(serialize(s)) preserves tie-break order.
    Nodes are written as their quoted label; when labels collide the
    id [label="..."] form keeps the two apart.
    """
    name = f' "{_escape(s.goal)}"' if s.goal else ""
    if not s.nodes:
        return f"digraph{name} {{ }}"
    idx = {node.id: i for i, node in enumerate(s.nodes)}
    raw_labels = [n.label for n in s.nodes]
    unique = len(set(raw_labels)) == len(raw_labels)
    lines = [f"digraph{name} {{"]
    if unique:
        ref = {n.id: f'"{_escape(n.label)}"' for n in s.nodes}
        for node in s.nodes:
            lines.append(f"  {ref[node.id]}")
    else:
        ref = {n.id: f'"{_escape(n.id)}"' for n in s.nodes}
        for node in s.nodes:
            lines.append(f'  {ref[node.id]} [label="{_escape(node.label)}"]')
    for a, b in sorted(s.edges, key=lambda e: (idx[e[0]], idx[e[1]])):
        lines.append(f"  {ref[a]} -> {ref[b]}")
    lines.append("}")
    return "\n".join(lines)
