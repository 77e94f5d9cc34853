"""The edit command language.

Commands follow the template `<EDIT TYPE> over [ARG] at <LOCATION>`; concretely
one of:

    insert node '<ARG>' before '<LOC>'
    insert node '<ARG>' after '<LOC>'
    remove node '<LOC>'
    reorder edge between '< <A> , <B> >'
    add partial order between '< <A> , <B> >'
    remove partial order between '< <A> , <B> >'
    noop

The parser is forgiving about surface variation (keyword case, unicode angle
brackets and quote styles, spacing); serialization is canonical: ASCII
brackets, straight quotes, single spaces. Pair locations are joined with
" , " on the way out and split on a comma on the way in, so labels holding
" , " are not round-trip safe inside a pair (plain commas in single-location
edits are fine).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .graph import NodeRef, normalize_label


class EditParseError(ValueError):
    """Unparseable edit text; keeps the offending span for error messages."""

    def __init__(self, message: str, text: str):
        snippet = " ".join(text.split())
        if len(snippet) > 80:
            snippet = snippet[:77] + "..."
        super().__init__(f"{message}: {snippet!r}")
        self.text = text


class EditKind(Enum):
    """Edit types; values double as the type phrase used by decompose()."""

    INSERT_BEFORE = "insert node before"
    INSERT_AFTER = "insert node after"
    REMOVE_NODE = "remove node"
    REORDER_EDGE = "reorder edge"
    ADD_PARTIAL_ORDER = "add partial order"
    REMOVE_PARTIAL_ORDER = "remove partial order"
    NOOP = "noop"


_PAIR_KINDS = (EditKind.REORDER_EDGE, EditKind.ADD_PARTIAL_ORDER, EditKind.REMOVE_PARTIAL_ORDER)
_INSERT_KINDS = (EditKind.INSERT_BEFORE, EditKind.INSERT_AFTER)


def _check_label(text: str, what: str) -> None:
    if not text or text != text.strip():
        raise ValueError(f"{what} must be non-empty and trimmed: {text!r}")
    if "\n" in text or "\r" in text:
        raise ValueError(f"{what} must be a single line: {text!r}")


@dataclass(frozen=True)
class EditCommand:
    """One graph edit. arg only for inserts; locs has 0, 1 or 2 entries."""

    kind: EditKind
    arg: str | None = None
    locs: tuple[NodeRef, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "locs", tuple(self.locs))
        if self.kind in _INSERT_KINDS:
            if self.arg is None:
                raise ValueError(f"{self.kind.value} needs an arg label")
            _check_label(self.arg, "arg label")
            if len(self.locs) != 1:
                raise ValueError(f"{self.kind.value} takes exactly one location")
        elif self.kind is EditKind.REMOVE_NODE:
            if self.arg is not None or len(self.locs) != 1:
                raise ValueError("remove node takes one location and no arg")
        elif self.kind in _PAIR_KINDS:
            if self.arg is not None or len(self.locs) != 2:
                raise ValueError(f"{self.kind.value} takes an ordered pair of locations")
            a, b = self.locs
            if normalize_label(a.label) == normalize_label(b.label):
                raise ValueError(f"{self.kind.value} needs two distinct locations")
        else:  # NOOP
            if self.arg is not None or self.locs:
                raise ValueError("noop takes no arg and no locations")
        for ref in self.locs:
            _check_label(ref.label, "location label")


def noop() -> EditCommand:
    return EditCommand(EditKind.NOOP)


def insert_before(arg: str, loc: str) -> EditCommand:
    return EditCommand(EditKind.INSERT_BEFORE, arg=arg, locs=(NodeRef(loc),))


def insert_after(arg: str, loc: str) -> EditCommand:
    return EditCommand(EditKind.INSERT_AFTER, arg=arg, locs=(NodeRef(loc),))


def remove_node(loc: str) -> EditCommand:
    return EditCommand(EditKind.REMOVE_NODE, locs=(NodeRef(loc),))


def reorder_edge(a: str, b: str) -> EditCommand:
    return EditCommand(EditKind.REORDER_EDGE, locs=(NodeRef(a), NodeRef(b)))


def add_partial_order(a: str, b: str) -> EditCommand:
    return EditCommand(EditKind.ADD_PARTIAL_ORDER, locs=(NodeRef(a), NodeRef(b)))


def remove_partial_order(a: str, b: str) -> EditCommand:
    return EditCommand(EditKind.REMOVE_PARTIAL_ORDER, locs=(NodeRef(a), NodeRef(b)))


# Accepted quote styles (LaTeX-ish `...' included) and angle brackets.
_QUOTES = str.maketrans({"‘": "'", "’": "'", "`": "'", "´": "'"})
_BRACKETS = str.maketrans({"⟨": "<", "⟩": ">", "〈": "<", "〉": ">", "〈": "<", "〉": ">"})

_INSERT_RE = re.compile(r"^\s*insert\s+node\s+'(?P<arg>.*)'\s+(?P<dir>before|after)\s+'(?P<loc>.*)'\s*$", re.IGNORECASE | re.DOTALL)
_REMOVE_RE = re.compile(r"^\s*remove\s+node\s+'(?P<loc>.*)'\s*$", re.IGNORECASE | re.DOTALL)
_PAIR_RE = re.compile(
    r"^\s*(?P<kind>reorder\s+edge|add\s+partial\s+order|remove\s+partial\s+order)\s+between\s+'?\s*<(?P<pair>.*)>\s*'?\s*$",
    re.IGNORECASE | re.DOTALL,
)
_NOOP_RE = re.compile(r"^\s*noop\s*\.?\s*$", re.IGNORECASE)


def _split_pair(pair: str, original: str) -> tuple[str, str]:
    # canonical form uses " , "; printed edits sometimes drop the left space
    for sep in (" , ", ","):
        parts = pair.split(sep)
        if len(parts) == 2:
            return parts[0].strip(), parts[1].strip()
    raise EditParseError("location pair must contain exactly one comma", original)


def parse_edit(text: str) -> EditCommand:
    """Parse an edit string, tolerating unicode quotes/brackets and case."""
    if not isinstance(text, str):
        raise EditParseError("edit must be text", repr(text))
    norm = text.translate(_QUOTES).translate(_BRACKETS)
    if _NOOP_RE.match(norm):
        return noop()
    m = _INSERT_RE.match(norm)
    if m:
        arg, loc = m.group("arg").strip(), m.group("loc").strip()
        kind = EditKind.INSERT_BEFORE if m.group("dir").lower() == "before" else EditKind.INSERT_AFTER
        try:
            return EditCommand(kind, arg=arg, locs=(NodeRef(loc),))
        except ValueError as exc:
            raise EditParseError(str(exc), text) from exc
    m = _REMOVE_RE.match(norm)
    if m:
        try:
            return remove_node(m.group("loc").strip())
        except ValueError as exc:
            raise EditParseError(str(exc), text) from exc
    m = _PAIR_RE.match(norm)
    if m:
        a, b = _split_pair(m.group("pair"), text)
        kind_text = " ".join(m.group("kind").lower().split())
        kind = {
            "reorder edge": EditKind.REORDER_EDGE,
            "add partial order": EditKind.ADD_PARTIAL_ORDER,
            "remove partial order": EditKind.REMOVE_PARTIAL_ORDER,
        }[kind_text]
        try:
            return EditCommand(kind, locs=(NodeRef(a), NodeRef(b)))
        except ValueError as exc:
            raise EditParseError(str(exc), text) from exc
    raise EditParseError("not a recognized edit command", text)


def serialize_edit(e: EditCommand) -> str:
    """Canonical surface form: ASCII brackets, straight quotes, single spaces."""
    if e.kind is EditKind.NOOP:
        return "noop"
    if e.kind is EditKind.INSERT_BEFORE:
        return f"insert node '{e.arg}' before '{e.locs[0].label}'"
    if e.kind is EditKind.INSERT_AFTER:
        return f"insert node '{e.arg}' after '{e.locs[0].label}'"
    if e.kind is EditKind.REMOVE_NODE:
        return f"remove node '{e.locs[0].label}'"
    a, b = e.locs
    return f"{e.kind.value} between '< {a.label} , {b.label} >'"


def canonical_edit_text(text: str) -> str:
    """Normalize edit text for comparison: reserialize when parseable, else
    lowercase/collapse with quote and bracket variants folded to ASCII."""
    try:
        surface = serialize_edit(parse_edit(text))
    except EditParseError:
        surface = text.translate(_QUOTES).translate(_BRACKETS)
    return " ".join(surface.lower().split())


@dataclass(frozen=True)
class EditComponents:
    """decompose() output: the three scored facets of an edit."""

    type_text: str
    arg_text: str | None
    loc_text: str


def decompose(e: EditCommand) -> EditComponents:
    """Split an edit into (type, arg, location) texts, normalized for scoring.

    Direction is folded into the type ("insert node before" vs "insert node
    after"); pair locations render as "a , b". Lossless for inserts:
    recombine(decompose(e)) reproduces the canonical string of a
    normalized-label edit.
    """
    if e.kind is EditKind.NOOP:
        return EditComponents("noop", None, "")
    arg = normalize_label(e.arg) if e.arg is not None else None
    if len(e.locs) == 2:
        loc = f"{normalize_label(e.locs[0].label)} , {normalize_label(e.locs[1].label)}"
    else:
        loc = normalize_label(e.locs[0].label)
    return EditComponents(e.kind.value, arg, loc)


def recombine(c: EditComponents) -> str:
    """Rebuild the canonical edit string from components."""
    if c.type_text == "noop":
        return "noop"
    if c.type_text in ("insert node before", "insert node after"):
        direction = c.type_text.split()[-1]
        return f"insert node '{c.arg_text}' {direction} '{c.loc_text}'"
    if c.type_text == "remove node":
        return f"remove node '{c.loc_text}'"
    return f"{c.type_text} between '< {c.loc_text} >'"
