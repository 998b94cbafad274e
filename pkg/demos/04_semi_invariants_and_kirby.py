"""The minimality machinery: the two marker/double-point transforms, the
profiles separating the slide pairs, and handle diagrams of exteriors.

Run with:  python3 demos/04_semi_invariants_and_kirby.py
"""

from smg.fixtures import fixture
from smg.groups import abelianization, wirtinger_presentation
from smg.transforms import (export_exterior, kirby_group, profile,
                            semi_transform)

print("=== Semi-invariant transforms on the separating pair ===")
for name in ("d2m5", "d1m5"):
    d = fixture(name)
    for kind in ("M5", "M6"):
        t = semi_transform(d, kind)
        p = profile(t)
        print(f"{name} under f^{kind}: linking {list(p.linking) or '-'},"
              f" trivial profile: {p.is_trivial()}")
    print()

print("The slide move changes the first transform's value and leaves the")
print("second one alone; its partner move does the opposite.")
print()

print("=== Handle diagrams of exteriors ===")
for name in ("circle", "saddle_sphere", "sing_sphere", "fr"):
    d = fixture(name)
    k = export_exterior(d)
    dotted, framed = k.counts()
    print(f"{name:14s} {dotted} dotted circle(s), {framed} 0-framed circle(s)")
print()

print("=== The sphere with one saddle, in full ===")
k = export_exterior(fixture("saddle_sphere"))
print(k.serialize())
pres = kirby_group(k)
print("group read off the handles:", pres)
print("abelianization:", abelianization(pres))
print("matches the diagram-side computation:",
      str(abelianization(pres)) ==
      str(abelianization(wirtinger_presentation(fixture("saddle_sphere")))))
