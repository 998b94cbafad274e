"""Semi-invariant transforms, split-insensitive profiles, and Kirby export.

``semi_transform`` turns a singular marked diagram into a classical one by
erasing every marker with a fixed smoothing and replacing every double point
by a smoothing-with-clasp; the two flavours differ in which smoothing the
marker takes, and each is blind to exactly one of the two marker-singular
slide moves.  ``profile`` is the computable shadow used to compare the
results: linking data plus a panel of small-quandle coloring rates, both
insensitive to disjoint unknotted circles.  ``export_exterior`` builds the
handle diagram of the complement: dotted negative-resolution components,
one 0-framed circle per band, and a commutator circle per double point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

from .diagram import CROSSING, MARKER, SINGULAR, Diagram, Node, enumerate_orientations
from .groups import Presentation, cyclic_reduce
from .moves import FORWARD, MoveSpec, Pattern, apply_move, find_sites, parse_pattern
from .quandles import QuandleTable, coloring_count, small_quandles
from .resolution import classical_components, crossing_sign, linking_matrix

M5 = "M5"
M6 = "M6"


def _parse_tangles(text: str) -> dict[str, tuple[Pattern, tuple[str, ...]]]:
    out = {}
    name = None
    buf: list[str] = []
    framed: tuple[str, ...] = ()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "tangle":
            name, buf, framed = toks[1], [], ()
        elif toks[0] == "endtangle":
            out[name] = (parse_pattern("\n".join(buf)), framed)
        elif toks[0] == "framed":
            framed = tuple(toks[1:])
        else:
            buf.append(line)
    return out


@lru_cache(maxsize=None)
def _tangles() -> dict[str, tuple[Pattern, tuple[str, ...]]]:
    text = resources.files("smg.data").joinpath("transform_tangles.smg").read_text()
    return _parse_tangles(text)


def _bare_vertex(kind: str) -> Pattern:
    nd = Node("v", kind, 0 if kind != CROSSING else None,
              ("l1", "l2", "l3", "l4"))
    return Pattern((nd,), ("l1", "l2", "l3", "l4"))


@lru_cache(maxsize=None)
def _replacement_move(kind: str, tangle_name: str) -> MoveSpec:
    tangle, _ = _tangles()[tangle_name]
    return MoveSpec(f"replace_{tangle_name}", ((_bare_vertex(kind), tangle),))


def _replace_all(d: Diagram, rules: dict[str, str], track_framed: bool = False):
    """Replace every marker/singular vertex by its tangle; returns the
    classical diagram and, if tracked, the set of framed edge ids."""
    framed_edges: set[str] = set()
    cur = d
    while True:
        target = next((nd for nd in cur.nodes if nd.kind in rules), None)
        if target is None:
            break
        move = _replacement_move(target.kind, rules[target.kind])
        sites = [s for s in find_sites(cur, move, FORWARD)
                 if s.node_image_map["v"][0] == target.id]
        if not sites:
            raise ValueError(f"no replacement site at {target.id}")
        nxt, info = apply_move(cur, move, sites[0], return_info=True)
        if track_framed:
            _, fr = _tangles()[rules[target.kind]]
            framed_edges |= {info["int_eids"][e] for e in fr}
        cur = nxt
    return cur, framed_edges


def semi_transform(d: Diagram, kind: str) -> Diagram:
    """The marker/singular replacement underlying the two semi-invariants."""
    if kind not in (M5, M6):
        raise ValueError(f"kind must be M5 or M6, got {kind!r}")
    rules = {MARKER: "f5_marker", SINGULAR: "f5_singular"} if kind == M5 else \
        {MARKER: "f6_marker", SINGULAR: "f6_singular"}
    out, _ = _replace_all(d, rules)
    out = Diagram(f"{d.name}_{kind.lower()}", out.nodes, out.loops, out.anchors)
    return out


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile:
    """Sorted nonzero |linking| entries plus per-quandle coloring rates.

    The rate for a quandle of order n is the number of colorings summed over
    all orientations, divided by ``(2n)**components``.  Both ingredients are
    blind to disjoint unknotted circles, realizing values taken modulo split
    sums with trivial pieces.
    """

    linking: tuple[int, ...]
    rates: tuple[tuple[str, str], ...]   # (quandle tag, rate as fraction str)

    def is_trivial(self) -> bool:
        return not self.linking and all(r == "1" for _, r in self.rates)


def _rate(count_sum: int, n: int, comps: int) -> str:
    from fractions import Fraction

    return str(Fraction(count_sum, (2 * n) ** comps))


def profile(c: Diagram, panel: Optional[tuple[QuandleTable, ...]] = None) -> Profile:
    """Profile of a classical diagram; deterministic and unchanged by
    disjoint union with crossingless loops."""
    assert c.is_classical()
    panel = panel or small_quandles(4)
    comps = classical_components(c)
    orientations = enumerate_orientations(c)
    od = orientations[0]
    lk = linking_matrix(od)
    linking = tuple(sorted(abs(lk[i][j])
                           for i in range(len(lk)) for j in range(i + 1, len(lk))
                           if lk[i][j]))
    rates = []
    for idx, q in enumerate(panel):
        total = sum(coloring_count(c, q, o) for o in orientations)
        rates.append((f"q{q.n}.{idx}", _rate(total, q.n, len(comps))))
    return Profile(linking, tuple(rates))


# ---------------------------------------------------------------------------
# Kirby diagrams of exteriors


@dataclass(frozen=True)
class KirbyDiagram:
    """Classical diagram with dotted (1-handle) and 0-framed (2-handle)
    components."""

    diagram: Diagram
    framed: tuple[frozenset, ...]
    dotted: tuple[frozenset, ...]

    def counts(self) -> tuple[int, int]:
        return len(self.dotted), len(self.framed)

    def serialize(self) -> str:
        from .diagram import serialize as ser

        body = ser(self.diagram).rstrip().rsplit("\n", 1)[0]
        lines = [body]
        for comp in self.dotted:
            lines.append(f"dot {min(comp)}")
        for comp in self.framed:
            lines.append(f"frame {min(comp)} 0")
        lines.append("end")
        return "\n".join(lines) + "\n"


def export_exterior(d: Diagram) -> KirbyDiagram:
    """Handle diagram of the complement: dot every negative-resolution
    component, add one 0-framed circle per band and a commutator circle per
    double point."""
    rules = {MARKER: "ext_marker", SINGULAR: "ext_singular"}
    out, framed_edges = _replace_all(d, rules, track_framed=True)
    out = Diagram(f"{d.name}_ext", out.nodes, out.loops, out.anchors)
    comps = classical_components(out)
    framed = tuple(c for c in comps if c & framed_edges)
    dotted = tuple(c for c in comps if not (c & framed_edges))
    return KirbyDiagram(out, framed, dotted)


def kirby_group(k: KirbyDiagram) -> Presentation:
    """Generators from dotted circles; one relator per framed component,
    letters collected when the framed strand passes under a dotted one."""
    c = k.diagram
    ors = enumerate_orientations(c)
    if not ors:
        raise ValueError("degenerate embedding: diagram is not orientable")
    od = ors[0]
    comps = classical_components(c)
    comp_of = {}
    for i, comp in enumerate(comps):
        for e in comp:
            comp_of[e] = i
    dotted_index: dict[int, int] = {}
    for gi, comp in enumerate(k.dotted):
        dotted_index[comps.index(comp)] = gi

    relators = []
    for comp in k.framed:
        if all(e in c.loops for e in comp):
            relators.append(())
            continue
        # walk the framed circuit in flow direction
        start = min(e for e in comp if e not in c.loops)
        word: list[int] = []
        cur = start
        exit_dart = od.head_map[cur]
        while True:
            nid, p = exit_dart
            if p in (0, 2):  # we arrive on the under-strand
                over_comp = comp_of[c.node(nid).ports[1]]
                if over_comp in dotted_index:
                    g = dotted_index[over_comp] + 1
                    word.append(crossing_sign(od, nid) * g)
            cur = c.node(nid).ports[(p + 2) % 4]
            a, b = c.edge_ends[cur]
            exit_dart = b if a == (nid, (p + 2) % 4) else a
            if cur == start:
                break
        relators.append(cyclic_reduce(tuple(word)))
    rels = tuple(w for w in relators if w)
    return Presentation(len(k.dotted), rels)
