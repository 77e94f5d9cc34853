"""Applying edits to scripts, and recovering edits from script pairs.

apply_edit is the single place edit semantics live; diff and the correctors
all defer to it, so there is exactly one notion of what each command does.
"""

from __future__ import annotations

from collections import Counter

from .edits import (
    EditCommand,
    EditKind,
    add_partial_order,
    insert_after,
    insert_before,
    noop,
    remove_node,
    remove_partial_order,
    reorder_edge,
)
from .graph import (
    AmbiguousLabelError,
    CycleError,
    Node,
    NoSuchNodeError,
    Script,
    _topological_ids,
    canonical_equal,
    normalize_label,
    normalize_ws,
    resolve_node,
)


class EditApplicationError(ValueError):
    """An edit cannot be applied to this script."""


class UnresolvableLocationError(EditApplicationError):
    pass


class PreconditionError(EditApplicationError):
    pass


class CyclicResultError(EditApplicationError):
    pass


class NotSingleEditError(ValueError):
    """diff() found the scripts more than one edit apart."""


class GraphTooLargeError(ValueError):
    pass


def _fresh_id(s: Script) -> str:
    taken = {n.id for n in s.nodes}
    k = len(s.nodes) + 1
    while f"n{k}" in taken:
        k += 1
    return f"n{k}"


def _resolve(s: Script, e: EditCommand) -> list[Node]:
    try:
        return [resolve_node(s, ref) for ref in e.locs]
    except NoSuchNodeError as exc:
        raise UnresolvableLocationError(str(exc)) from exc


def _insert_decl(nodes: tuple[Node, ...], new: Node, anchor_id: str, after: bool) -> tuple[Node, ...]:
    out = []
    for node in nodes:
        if node.id == anchor_id and not after:
            out.append(new)
        out.append(node)
        if node.id == anchor_id and after:
            out.append(new)
    return tuple(out)


def apply_edit(s: Script, e: EditCommand) -> Script:
    """Apply one edit, returning a new script (s untouched).

    Semantics:
      insert before L: edges (p -> L) become (p -> new); add (new -> L)
      insert after L:  edges (L -> t) become (new -> t); add (L -> new)
      remove L:        splice every (pred, succ) pair around L, drop L
      reorder (A, B):  swap the two labels; structure unchanged
      add partial order (A, B):    needs edge A->B; drop it, connect A's
                                   predecessors to B and A to B's successors
      remove partial order (A, B): needs no path between A and B; add A->B,
                                   drop shared-predecessor edges into B and
                                   A's edges into shared successors
      noop:            identity

    Inserts require the new label to be absent. The result is re-validated;
    a cyclic outcome raises CyclicResultError.
    """
    if e.kind is EditKind.NOOP:
        return s

    targets = _resolve(s, e)

    try:
        if e.kind in (EditKind.INSERT_BEFORE, EditKind.INSERT_AFTER):
            assert e.arg is not None
            present = {normalize_label(n.label) for n in s.nodes}
            if normalize_label(e.arg) in present:
                raise PreconditionError(f"label {e.arg!r} already present")
            anchor = targets[0]
            new = Node(_fresh_id(s), e.arg.strip())
            if e.kind is EditKind.INSERT_BEFORE:
                edges = {(a, b) for a, b in s.edges if b != anchor.id}
                edges |= {(a, new.id) for a, b in s.edges if b == anchor.id}
                edges.add((new.id, anchor.id))
                nodes = _insert_decl(s.nodes, new, anchor.id, after=False)
            else:
                edges = {(a, b) for a, b in s.edges if a != anchor.id}
                edges |= {(new.id, b) for a, b in s.edges if a == anchor.id}
                edges.add((anchor.id, new.id))
                nodes = _insert_decl(s.nodes, new, anchor.id, after=True)
            return Script(goal=s.goal, nodes=nodes, edges=frozenset(edges))

        if e.kind is EditKind.REMOVE_NODE:
            gone = targets[0]
            preds = s.predecessors(gone.id)
            succs = s.successors(gone.id)
            edges = {(a, b) for a, b in s.edges if a != gone.id and b != gone.id}
            edges |= {(p, t) for p in preds for t in succs}
            nodes = tuple(n for n in s.nodes if n.id != gone.id)
            return Script(goal=s.goal, nodes=nodes, edges=frozenset(edges))

        if e.kind is EditKind.REORDER_EDGE:
            a, b = targets
            if a.id == b.id:
                raise PreconditionError("reorder needs two distinct nodes")
            nodes = tuple(
                Node(n.id, b.label) if n.id == a.id else Node(n.id, a.label) if n.id == b.id else n
                for n in s.nodes
            )
            return Script(goal=s.goal, nodes=nodes, edges=s.edges)

        if e.kind is EditKind.ADD_PARTIAL_ORDER:
            a, b = targets
            if (a.id, b.id) not in s.edges:
                raise PreconditionError(f"no edge {a.label!r} -> {b.label!r} to relax")
            edges = set(s.edges)
            edges.discard((a.id, b.id))
            edges |= {(p, b.id) for p in s.predecessors(a.id)}
            edges |= {(a.id, t) for t in s.successors(b.id)}
            return Script(goal=s.goal, nodes=s.nodes, edges=frozenset(edges))

        if e.kind is EditKind.REMOVE_PARTIAL_ORDER:
            a, b = targets
            if a.id == b.id:
                raise PreconditionError("partial order pair must be distinct nodes")
            if s.has_path(a.id, b.id) or s.has_path(b.id, a.id):
                raise PreconditionError(f"{a.label!r} and {b.label!r} are already ordered")
            shared_preds = s.predecessors(a.id) & s.predecessors(b.id)
            shared_succs = s.successors(a.id) & s.successors(b.id)
            edges = set(s.edges)
            edges.add((a.id, b.id))
            edges -= {(p, b.id) for p in shared_preds}
            edges -= {(a.id, t) for t in shared_succs}
            return Script(goal=s.goal, nodes=s.nodes, edges=frozenset(edges))
    except CycleError as exc:
        raise CyclicResultError(f"edit would create a cycle: {exc}") from exc

    raise EditApplicationError(f"unhandled edit kind {e.kind!r}")


def scripts_equivalent(a: Script, b: Script) -> bool:
    """canonical_equal, with a positional fallback when labels repeat.

    Scripts carrying a duplicated label (a redundant step) cannot be compared
    through the label->node mapping, so fall back to comparing linearized
    label sequences and edges over linearize positions.
    """
    try:
        return canonical_equal(a, b)
    except AmbiguousLabelError:
        if normalize_ws(a.goal) != normalize_ws(b.goal):
            return False
        ta, tb = _topological_ids(a), _topological_ids(b)
        la = [normalize_label(a.node_by_id(i).label) for i in ta]
        lb = [normalize_label(b.node_by_id(i).label) for i in tb]
        if la != lb:
            return False
        pa = {nid: i for i, nid in enumerate(ta)}
        pb = {nid: i for i, nid in enumerate(tb)}
        return {(pa[x], pa[y]) for x, y in a.edges} == {(pb[x], pb[y]) for x, y in b.edges}


def _label_counts(s: Script) -> Counter:
    return Counter(normalize_label(n.label) for n in s.nodes)


def _topo_nodes(s: Script) -> list[Node]:
    return [s.node_by_id(nid) for nid in _topological_ids(s)]


def _try(s: Script, e: EditCommand, y: Script) -> bool:
    try:
        return scripts_equivalent(apply_edit(s, e), y)
    except EditApplicationError:
        return False


def diff(x: Script, y: Script) -> EditCommand:
    """Find the single edit taking x to y.

    Detection order fixes the answer when several readings exist: a new label
    means an insert (before-form preferred, anchors tried in topological
    order), a missing label means remove, a transposed label pair means
    reorder, and otherwise the partial-order commands are tried. Raises
    NotSingleEditError when no single command explains the change.
    """
    if scripts_equivalent(x, y):
        return noop()

    cx, cy = _label_counts(x), _label_counts(y)
    added = cy - cx
    removed = cx - cy

    if sum(added.values()) == 1 and not removed:
        (new_norm,) = added
        arg = next(n.label for n in y.nodes if normalize_label(n.label) == new_norm)
        for build in (insert_before, insert_after):
            for anchor in _topo_nodes(x):
                e = build(arg, anchor.label)
                if _try(x, e, y):
                    return e
        raise NotSingleEditError(f"label {arg!r} appears but no single insert explains the change")

    if sum(removed.values()) == 1 and not added:
        (gone_norm,) = removed
        label = next(n.label for n in _topo_nodes(x) if normalize_label(n.label) == gone_norm)
        e = remove_node(label)
        if _try(x, e, y):
            return e
        raise NotSingleEditError(f"label {label!r} disappears but removal does not yield the target")

    if not added and not removed:
        topo = _topo_nodes(x)
        for i in range(len(topo)):
            for j in range(i + 1, len(topo)):
                a, b = topo[i], topo[j]
                if normalize_label(a.label) == normalize_label(b.label):
                    continue
                e = reorder_edge(a.label, b.label)
                if _try(x, e, y):
                    return e
        pos = {nid: i for i, nid in enumerate(_topological_ids(x))}
        for a_id, b_id in sorted(x.edges, key=lambda p: (pos[p[0]], pos[p[1]])):
            a, b = x.node_by_id(a_id), x.node_by_id(b_id)
            if normalize_label(a.label) == normalize_label(b.label):
                continue
            e = add_partial_order(a.label, b.label)
            if _try(x, e, y):
                return e
        for a in topo:
            for b in topo:
                if a.id == b.id or normalize_label(a.label) == normalize_label(b.label):
                    continue
                if x.has_path(a.id, b.id) or x.has_path(b.id, a.id):
                    continue
                e = remove_partial_order(a.label, b.label)
                if _try(x, e, y):
                    return e

    raise NotSingleEditError("scripts are not a single edit apart")


def enumerate_edits(s: Script, *, max_nodes: int = 12, insert_arg: str | None = None) -> list[EditCommand]:
    """Every edit command applicable to s, by brute force.

    Covers all removals, label-pair reorders, partial-order commands whose
    preconditions hold, and (when insert_arg is given or the default
    placeholder is absent from s) inserts of a placeholder label at every
    anchor. Bounded to max_nodes nodes; the candidate count is quadratic.
    """
    if len(s.nodes) > max_nodes:
        raise GraphTooLargeError(f"{len(s.nodes)} nodes exceeds the bound of {max_nodes}")
    topo = _topo_nodes(s)
    out: list[EditCommand] = []

    for node in topo:
        out.append(remove_node(node.label))

    for i in range(len(topo)):
        for j in range(i + 1, len(topo)):
            if normalize_label(topo[i].label) != normalize_label(topo[j].label):
                out.append(reorder_edge(topo[i].label, topo[j].label))

    pos = {nid: i for i, nid in enumerate(_topological_ids(s))}
    for a_id, b_id in sorted(s.edges, key=lambda p: (pos[p[0]], pos[p[1]])):
        a, b = s.node_by_id(a_id), s.node_by_id(b_id)
        if normalize_label(a.label) != normalize_label(b.label):
            out.append(add_partial_order(a.label, b.label))

    for a in topo:
        for b in topo:
            if a.id == b.id or normalize_label(a.label) == normalize_label(b.label):
                continue
            if s.has_path(a.id, b.id) or s.has_path(b.id, a.id):
                continue
            out.append(remove_partial_order(a.label, b.label))

    arg = insert_arg if insert_arg is not None else "do the new step"
    if normalize_label(arg) not in {normalize_label(n.label) for n in s.nodes}:
        for node in topo:
            out.append(insert_before(arg, node.label))
        for node in topo:
            out.append(insert_after(arg, node.label))

    return out
