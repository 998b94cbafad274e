"""Walk through the basic objects: parse a diagram, trace its resolutions,
and decide admissibility.

Run with:  python3 demos/01_diagrams_and_resolutions.py
"""

from smg.diagram import parse_smg, serialize, enumerate_orientations
from smg.fixtures import FR, fixture
from smg.resolution import POSITIVE, NEGATIVE, is_admissible, resolve

print("=== The Fenn-Rolfsen link as a singular marked graph diagram ===")
fr = parse_smg(FR)
print(serialize(fr))
x, m, s = fr.counts
print(f"crossings={x}, markers={m}, double points={s}")
print(f"valid sphere map: {fr.validate().ok}")
print(f"orientations: {len(enumerate_orientations(fr))}")
print()

print("=== Resolutions ===")
for sign in (NEGATIVE, POSITIVE):
    r = resolve(fr, sign)
    print(f"{sign} resolution: {r.component_count()} components, "
          f"{r.diagram.counts[0]} crossings")
print()

print("=== A one-saddle sphere: its two resolutions differ ===")
sphere = fixture("saddle_sphere")
print(serialize(sphere))
print("positive:", resolve(sphere, POSITIVE).component_count(), "circle(s)")
print("negative:", resolve(sphere, NEGATIVE).component_count(), "circle(s)")
print()

print("=== Admissibility ===")
for name in ("circle", "sing_sphere", "fr", "hopf", "trefoil"):
    res = is_admissible(fixture(name))
    line = f"{name:12s} -> {res['verdict'].upper()}"
    neg = res[NEGATIVE]
    if neg.obstruction:
        line += f"  (obstruction: {neg.obstruction})"
    elif res['verdict'] == 'yes':
        line += (f"  (unlinks with {neg.components} / "
                 f"{res[POSITIVE].components} components)")
    print(line)
