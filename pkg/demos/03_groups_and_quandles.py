"""Invariants: the complement group from the diagram, its abelianization and
finite quotients, and the quandle coloring count of the Fenn-Rolfsen link.

Run with:  python3 demos/03_groups_and_quandles.py
"""

from smg.fixtures import fixture
from smg.groups import (abelianization, groups_up_to_order, hom_count,
                        tietze_simplify, wirtinger_presentation)
from smg.quandles import (FOUR_QUANDLE, check_quandle, coloring_count,
                          dihedral_quandle, small_quandles)

print("=== Complement groups ===")
for name in ("circle", "saddle_sphere", "sing_sphere", "fr"):
    d = fixture(name)
    pres = wirtinger_presentation(d)
    simp = tietze_simplify(pres)
    print(f"{name:14s} {pres.ngens} generators, {len(pres.relators)} relators"
          f"  ->  simplified {simp}")
    print(f"{'':14s} abelianization: {abelianization(pres)}")
print()

print("=== Finite quotients of the Fenn-Rolfsen group ===")
fr = wirtinger_presentation(fixture("fr"))
for gname, g in groups_up_to_order(6):
    print(f"  homs to {gname:6s}: {hom_count(fr, g)}")
print()

print("=== The four-element involutory quandle ===")
print("axioms:", check_quandle(FOUR_QUANDLE.table) or "all hold")
print("involutory:", FOUR_QUANDLE.is_involutory())
for r in FOUR_QUANDLE.table:
    print("   ", " ".join(map(str, r)))
print()

print("=== Coloring counts ===")
print("#Col(unknotted sphere)  =", coloring_count(fixture("circle"), FOUR_QUANDLE))
print("#Col(Fenn-Rolfsen link) =", coloring_count(fixture("fr"), FOUR_QUANDLE))
print()

print("=== The small-quandle census (orders 1..4) ===")
census = {}
for q in small_quandles(4):
    census[q.n] = census.get(q.n, 0) + 1
print("quandles up to isomorphism by order:", census)
q3 = dihedral_quandle(3)
tre = fixture("trefoil")
print("dihedral 3-colorings of the trefoil:", coloring_count(tre, q3),
      "(9 > 3 certifies knotting)")
