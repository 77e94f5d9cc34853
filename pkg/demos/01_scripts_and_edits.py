"""Build a script, break it, and repair it with a one-edit command.

Run: python3 demos/01_scripts_and_edits.py
"""

from scriptfix import apply_edit, chain, diff, linearize, parse_edit, serialize_dot, serialize_edit

flawed = chain(
    "see an alligator",
    ["find the keys", "drive to the zoo", "get in car", "park the car", "walk to the enclosure"],
)

print("The flawed plan, as DOT:")
print(serialize_dot(flawed))
print()

edit = parse_edit("reorder edge between '< drive to the zoo , get in car >'")
repaired = apply_edit(flawed, edit)

print(f"After {serialize_edit(edit)!r}:")
for i, step in enumerate(linearize(repaired), 1):
    print(f"  {i}. {step}")
print()

# diff recovers the command from the before/after pair alone
recovered = diff(flawed, repaired)
print(f"diff(flawed, repaired) = {serialize_edit(recovered)!r}")

# every edit kind in one place
for text in [
    "insert node 'buy a ticket' before 'walk to the enclosure'",
    "insert node 'lock the car' after 'park the car'",
    "remove node 'find the keys'",
    "add partial order between '< drive to the zoo , get in car >'",
]:
    out = apply_edit(flawed, parse_edit(text))
    print(f"{text}\n  -> {' / '.join(linearize(out))}")
