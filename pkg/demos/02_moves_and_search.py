"""The rewrite calculus: list the catalogs, apply moves, replay traces, and
derive one of the primed slide moves from the generating set by search.

Run with:  python3 demos/02_moves_and_search.py
"""

from smg.catalog import catalog_map, move_catalog
from smg.fixtures import fixture
from smg.moves import (FORWARD, REVERSE, SearchBudget, apply_move, find_sites,
                       search_equivalence, verify_sequence)

print("=== Catalogs ===")
unor = move_catalog("unoriented")
core = [m.id for m in unor if not m.derived]
derived = [m.id for m in unor if m.derived]
print(f"{len(core)} core unoriented moves:", " ".join(core))
print(f"{len(derived)} flagged-derived:", " ".join(derived))
print(f"{len(move_catalog('oriented'))} oriented moves:",
      " ".join(m.id for m in move_catalog("oriented")))
print()

cat = catalog_map("unoriented")

print("=== Kink on a circle, and back ===")
circle = fixture("circle")
site = find_sites(circle, cat["O1"], FORWARD)[0]
kinked = apply_move(circle, cat["O1"], site)
print("after one kink:", kinked.counts[0], "crossing")
undo = find_sites(kinked, cat["O1"], REVERSE)[0]
back = apply_move(kinked, cat["O1"], undo)
print("undone, isomorphic to the circle:",
      back.canonical_code() == circle.canonical_code())
print()

print("=== The marker-singular slide and its primed twin ===")
d2 = fixture("d2m5")
print("slide sites on the separating fixture:",
      len(find_sites(d2, cat["O11"], FORWARD)))
primed_site = find_sites(d2, cat["O11p"], FORWARD)[0]
target = apply_move(d2, cat["O11p"], primed_site)
allowed = ["O1", "O2", "O3", "O4", "O4p", "O9", "O9p", "O10", "O11"]
seq = search_equivalence(d2, target, cat, allowed,
                         SearchBudget(max_depth=12, max_states=100_000))
print("primed slide realized by:", [s.move_id for s in seq.steps])
replay = verify_sequence(d2, seq, cat)
print("certificate replays:",
      replay.canonical_code() == target.canonical_code())
