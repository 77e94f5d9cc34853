"""Bank feedback once, then watch lookups hit or miss by similarity.

Run: python3 demos/03_memory_reuse.py
"""

import tempfile

from scriptfix import FeedbackMemory, chain, parse_edit

memory = FeedbackMemory()

commute = chain(
    "get to work",
    ["leave the house", "drive downtown", "start the car", "park in the lot"],
)
memory.write(commute, "start the car before driving anywhere", parse_edit(
    "reorder edge between '< drive downtown , start the car >'"
))

probes = {
    "the same script": commute,
    "one step reworded": chain(
        "get to work",
        ["leave the house", "drive downtown", "start the car", "park in the garage"],
    ),
    "a different errand": chain(
        "buy groceries",
        ["write a list", "walk to the store", "fill the basket", "pay at the till"],
    ),
}

for name, probe in probes.items():
    hit = memory.lookup(probe)
    if hit is None:
        print(f"{name:<22} no record above the 0.9 threshold")
    else:
        print(f"{name:<22} record {hit.record.id} at similarity {hit.similarity:.4f}")
        print(f"{'':<22} stored feedback: {hit.record.feedback!r}")

# the store is a JSON-lines file; reload it and lookups behave identically
with tempfile.NamedTemporaryFile(suffix=".jsonl") as f:
    memory.save(f.name)
    reloaded = FeedbackMemory.load(f.name)
    hit = reloaded.lookup(commute)
    print(f"\nreloaded from disk: record {hit.record.id} at similarity {hit.similarity:.4f}")
