"""Shared fixtures: worked-example data and seeded random generators.

The worked examples are small script/feedback/edit rows used across the
suite; tests freeze their expected scores as plain data. Random scripts and
edits come from plain `random.Random` so every run is reproducible from the
seed alone.
"""

from __future__ import annotations

import contextlib
import random
import threading

import pytest

from scriptfix.edits import EditCommand
from scriptfix.engine import enumerate_edits
from scriptfix.graph import Script, chain

# --- worked examples ---------------------------------------------------------

BLANKET_STEPS = [
    "get out of car",
    "stop in front of car",
    "turn body toward back of car",
    "walk to back of car",
    "take blanket out of car",
    "walk to desired location",
    "throw blanket down",
]
BLANKET_FB = "a person needs to open the door before they take an object out"
BLANKET_GOLD = "insert node 'open the back door of the car' before 'take blanket out of car'"
BLANKET_PRED = "insert node 'open car door' before 'take blanket out of car'"

XBOX_STEPS = [
    "buy a video game",
    "talk to the cashier",
    "make the transaction",
    "get the receipt",
    "load video game into the car",
    "get into the car",
    "take xbox home",
]
XBOX_FB = "after a person makes a transaction, they then head to their car"
XBOX_GOLD = "insert node 'walk to the car' after 'get the receipt'"
XBOX_PRED = "insert node 'get into the car' after 'make the transaction'"

CARDS_STEPS = [
    "make a bunch of cards",
    "grab a pen",
    "grab some paper",
    "pick up a pen",
    "place the paper on the table",
    "pick up the pen",
    "write names on the cards",
]
CARDS_FB = "good plans shouldn't include redundant steps"
CARDS_GOLD = "remove node 'pick up the pen'"
CARDS_PRED = "remove node 'pick up the pen'"

LEAVE_HOME_STEPS = [
    "leave home and get in car",
    "remem. destination address",
    "look around for the car",
    "walk towards the car",
    "open the car door",
    "sit down in the car",
    "put on the seatbelt",
]
LEAVE_HOME_FB = "you wouldn't look for something you're already with"
LEAVE_HOME_GOLD = "reorder edge between '< leave home and get in car , look around for the car >'"
LEAVE_HOME_PRED = "remove node 'look around for the car'"

# (gold, pred, expected em, em_type, em_loc) for the four rows above
SCORED_ROWS = [
    (BLANKET_GOLD, BLANKET_PRED, 0, 1, 1),
    (XBOX_GOLD, XBOX_PRED, 0, 1, 0),
    (CARDS_GOLD, CARDS_PRED, 1, 1, 1),
    (LEAVE_HOME_GOLD, LEAVE_HOME_PRED, 0, 0, 0),
]

# apply/diff rows: (input chain, edit string, expected linearization)
YOGA_STEPS = [
    "set alarm for early morning",
    "get out of bed",
    "prepare for yoga",
    "go to the bathroom",
    "do yoga",
    "do yoga in the morning",
]
YOGA_EDIT = "insert node 'wake up and turn off alarm' before 'get out of bed'"
YOGA_AFTER = [
    "set alarm for early morning",
    "wake up and turn off alarm",
    "get out of bed",
    "prepare for yoga",
    "go to the bathroom",
    "do yoga",
    "do yoga in the morning",
]

STATION_STEPS = [
    "put on shoes",
    "open the door",
    "drive to the train station",
    "get into the car",
    "reach the train station",
]
STATION_FB = "You must get into a vehicle, before driving to any place."
STATION_EDIT = "reorder edge between '< drive to the train station , get into the car >'"
STATION_AFTER = [
    "put on shoes",
    "open the door",
    "get into the car",
    "drive to the train station",
    "reach the train station",
]

BUTTERFLY_STEPS = [
    "pick up the butterfly",
    "put the butterfly in container",
    "look for a butterfly",
    "take the butterfly home",
]
BUTTERFLY_FB = "You don't need to look for a butterfly if it's already in a container."
BUTTERFLY_EDIT = "remove node 'look for a butterfly'"
BUTTERFLY_AFTER = [
    "pick up the butterfly",
    "put the butterfly in container",
    "take the butterfly home",
]

APPLY_ROWS = [
    (YOGA_STEPS, YOGA_EDIT, YOGA_AFTER),
    (STATION_STEPS, STATION_EDIT, STATION_AFTER),
    (BUTTERFLY_STEPS, BUTTERFLY_EDIT, BUTTERFLY_AFTER),
]

ZOO_GOAL = "see an alligator"
ZOO_STEPS = ["find the keys", "drive to the zoo", "get in car", "park the car", "walk to the enclosure"]
ZOO_FB = "Get in a car before driving"


@pytest.fixture
def blanket_script() -> Script:
    return chain("", BLANKET_STEPS)


@pytest.fixture
def cards_script() -> Script:
    return chain("", CARDS_STEPS)


@pytest.fixture
def zoo_script() -> Script:
    return chain(ZOO_GOAL, ZOO_STEPS)


# --- random generators --------------------------------------------------------

_VERBS = [
    "pack", "lift", "carry", "tape", "label", "load", "sort", "wrap",
    "stack", "move", "clean", "check", "open", "close", "fill", "empty",
    "count", "scan", "weigh", "seal",
]
_NOUNS = [
    "box", "crate", "truck", "shelf", "pallet", "bag", "ledger", "form",
    "drawer", "bin", "parcel", "rack", "door", "list", "tag", "cart",
    "tool", "lid", "slip", "frame",
]


def rand_labels(rng: random.Random, n: int) -> list[str]:
    pool = [f"{v} the {o}" for v in _VERBS for o in _NOUNS]
    return rng.sample(pool, n)


def rand_script(rng: random.Random, max_nodes: int = 20, min_nodes: int = 2) -> Script:
    """Random DAG: declaration order doubles as a valid topological order."""
    n = rng.randint(min_nodes, max_nodes)
    labels = rand_labels(rng, n)
    p = rng.choice([0.15, 0.3, 0.5])
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    goal = rng.choice(["", "finish the job", "tidy the warehouse", "ship an order"])
    from scriptfix.graph import Node

    nodes = tuple(Node(f"n{i}", lab) for i, lab in enumerate(labels))
    return Script(goal=goal, nodes=nodes, edges=frozenset((f"n{i}", f"n{j}") for i, j in edges))


def rand_chain(rng: random.Random, max_nodes: int = 10, min_nodes: int = 3) -> Script:
    n = rng.randint(min_nodes, max_nodes)
    return chain("", rand_labels(rng, n))


def rand_applicable_edit(rng: random.Random, script: Script) -> EditCommand:
    """Uniform draw over every applicable non-noop edit of the script."""
    arg = rng.choice(_VERBS) + " the spare " + rng.choice(_NOUNS)
    options = enumerate_edits(script, max_nodes=len(script.nodes) + 1, insert_arg=arg)
    if not options:
        raise AssertionError("generator produced a script with no applicable edits")
    return rng.choice(options)


def rand_edit_command(rng: random.Random) -> EditCommand:
    """Random well-formed command (no script attached), for DSL round-trips."""
    from scriptfix.edits import add_partial_order, insert_after, insert_before, noop, remove_node, remove_partial_order, reorder_edge

    a, b = rand_labels(rng, 2)
    arg = rng.choice(_VERBS) + " the " + rng.choice(_NOUNS) + " twice"
    make = rng.choice([
        lambda: noop(),
        lambda: insert_before(arg, a),
        lambda: insert_after(arg, a),
        lambda: remove_node(a),
        lambda: reorder_edge(a, b),
        lambda: add_partial_order(a, b),
        lambda: remove_partial_order(a, b),
    ])
    return make()


@contextlib.contextmanager
def serve_json(handlers):
    """Spin a throwaway local HTTP server for client tests.

    handlers: {path: fn(request_dict) -> (status, response_dict)}. Yields the
    base URL; the server dies with the context.
    """
    import json
    from http.server import BaseHTTPRequestHandler, HTTPServer

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length) or b"{}")
            fn = handlers.get(self.path)
            if fn is None:
                self.send_response(404)
                self.end_headers()
                return
            status, payload = fn(body)
            data = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    server = HTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_port}"
    finally:
        server.shutdown()
        thread.join(timeout=5)


def structurally_identical(a: Script, b: Script) -> bool:
    """Exact structural identity: declaration order, raw labels, goal, edges."""
    if a.goal != b.goal:
        return False
    if [n.label for n in a.nodes] != [n.label for n in b.nodes]:
        return False
    pos_a = {n.id: i for i, n in enumerate(a.nodes)}
    pos_b = {n.id: i for i, n in enumerate(b.nodes)}
    ea = {(pos_a[u], pos_a[v]) for u, v in a.edges}
    eb = {(pos_b[u], pos_b[v]) for u, v in b.edges}
    return ea == eb
