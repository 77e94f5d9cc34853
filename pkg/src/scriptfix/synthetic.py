"""A small bundled corpus of synthetic repair episodes.

Fifty tuples: ten everyday activities, one tuple per error type each. The
corpus is built deterministically (gold edits come from diff, so they are
consistent by construction) and is sized for demos, calibration runs, and the
controlled-reuse experiment. Different tuples of one activity use different
step subsets on purpose: the embedder is order-insensitive, so distinct label
bags are what keep their memory keys apart.
"""

from __future__ import annotations

import random

from .dataset import ErrorType, EvalTuple, PerturbationTable, Split, build_iset
from .edits import add_partial_order
from .engine import apply_edit, diff
from .graph import Script, chain

# (goal, seven steps, one off-topic step)
_ACTIVITIES: list[tuple[str, list[str], str]] = [
    (
        "plant a tree",
        [
            "pick a spot in the yard",
            "dig a hole with the shovel",
            "set the sapling in the hole",
            "fill the soil back in",
            "water the ground deeply",
            "spread mulch around the base",
            "stake the trunk upright",
        ],
        "sing to the neighbors",
    ),
    (
        "bake a loaf of bread",
        [
            "measure the flour",
            "mix the dough",
            "knead the dough on the counter",
            "let the dough rise",
            "shape the loaf",
            "bake the loaf in the oven",
            "cool the bread on a rack",
        ],
        "watch a cooking show",
    ),
    (
        "wash the car",
        [
            "park the car in the driveway",
            "gather a bucket and sponge",
            "spray the body with the hose",
            "scrub the panels with soap",
            "rinse away the suds",
            "dry the paint with a towel",
            "wax the hood until it shines",
        ],
        "order a pizza",
    ),
    (
        "mail a letter",
        [
            "write the letter by hand",
            "fold the page neatly",
            "seal the envelope",
            "stick a stamp on the corner",
            "copy the address onto the front",
            "walk to the mailbox",
            "drop it through the slot",
        ],
        "alphabetize the bookshelf",
    ),
    (
        "paint the fence",
        [
            "buy a can of paint",
            "scrape off the old flakes",
            "tape the rails",
            "stir the paint well",
            "brush on the first coat",
            "wait until the surface dries",
            "add a second coat",
        ],
        "practice the trumpet",
    ),
    (
        "brew a pot of coffee",
        [
            "fill the kettle at the sink",
            "heat the water until it boils",
            "grind the beans coarsely",
            "put the grounds in the press",
            "pour the water over the grounds",
            "let it steep for four minutes",
            "press the plunger down slowly",
        ],
        "reorganize the pantry",
    ),
    (
        "go fishing at the lake",
        [
            "pack the tackle box",
            "dig up some worms",
            "row out to deep water",
            "bait the hook",
            "cast the line",
            "reel in a fish",
            "put the catch on ice",
        ],
        "whistle at the clouds",
    ),
    (
        "do the laundry",
        [
            "sort the clothes by color",
            "load the washer",
            "add the detergent",
            "run the wash cycle",
            "move the load to the dryer",
            "fold the warm shirts",
            "stack them in the closet",
        ],
        "count the ceiling tiles",
    ),
    (
        "build a birdhouse",
        [
            "sketch a simple design",
            "saw the boards to length",
            "drill the entry hole",
            "nail the walls together",
            "glue on the roof",
            "sand the edges smooth",
            "hang it from a branch",
        ],
        "browse old magazines",
    ),
    (
        "host a dinner party",
        [
            "plan the menu",
            "shop for groceries",
            "chop the vegetables",
            "roast the main dish",
            "set the table",
            "light the candles",
            "greet the guests at the door",
        ],
        "untangle the garden hose",
    ),
]


def _tuple(tid: str, goal: str, x: Script, y: Script, feedback: str, error_type: ErrorType) -> EvalTuple:
    return EvalTuple(
        id=tid,
        goal=goal,
        script_x=x,
        feedbacks=(feedback,),
        gold_edit=diff(x, y),
        script_y=y,
        error_type=error_type,
        split=Split.TEST,
    )


def bundled_corpus() -> list[EvalTuple]:
    """The fifty-tuple corpus: 10 activities x 5 error types."""
    out: list[EvalTuple] = []
    for a, (goal, steps, bad) in enumerate(_ACTIVITIES, start=1):
        s = steps

        # missing step: s3 dropped from the first six
        y = chain(goal, s[:6])
        x = chain(goal, s[:2] + s[3:6])
        out.append(_tuple(f"act{a:02d}-missing", goal, x, y, f"{s[2]} before {s[3]}", ErrorType.MISSING_STEP))

        # wrong order: s4 and s5 transposed
        y = chain(goal, s[:6])
        x = chain(goal, s[:3] + [s[4], s[3]] + s[5:6])
        out.append(_tuple(f"act{a:02d}-order", goal, x, y, f"{s[3]} before {s[4]}", ErrorType.WRONG_ORDER))

        # wrong step: an off-topic step wedged in after s3
        y = chain(goal, s[:6])
        x = chain(goal, s[:3] + [bad] + s[3:6])
        out.append(_tuple(f"act{a:02d}-offtopic", goal, x, y, f"you don't need to {bad}", ErrorType.WRONG_STEP))

        # over-constrained order: s2 and s3 should be unordered
        x = chain(goal, s[:5])
        y = apply_edit(x, add_partial_order(s[1], s[2]))
        out.append(
            _tuple(
                f"act{a:02d}-relax", goal, x, y,
                f"{s[1]} and {s[2]} can happen in either order",
                ErrorType.ADD_PARTIAL_ORDER,
            )
        )

        # under-constrained order: s5 must precede s6
        y = chain(goal, s[1:7])
        x = apply_edit(y, add_partial_order(s[4], s[5]))
        out.append(
            _tuple(
                f"act{a:02d}-tighten", goal, x, y,
                f"the order of {s[4]} and {s[5]} is fixed",
                ErrorType.REMOVE_PARTIAL_ORDER,
            )
        )
    return out


def identity_twins(sources: list[EvalTuple], seed: int = 0) -> list[EvalTuple]:
    """ISET twins under the empty perturbation table: same text, new ids."""
    return build_iset(sources, PerturbationTable(rules=()), seed=seed)


def reuse_stream(seed: int = 0) -> list[EvalTuple]:
    """Sources (shuffled) followed by their identity twins (shuffled).

    Every twin appears after every source, so a stream consumer with a
    growing memory has each twin's source stored by the time it arrives.
    """
    rng = random.Random(seed)
    sources = bundled_corpus()
    twins = identity_twins(sources, seed=seed)
    rng.shuffle(sources)
    rng.shuffle(twins)
    return sources + twins
