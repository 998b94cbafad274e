"""Complement-group presentations and their computable shadows.

The group of an immersed surface-link is read off a diagram carrying an
abstract orientation (an orientation of the negative resolution): one
generator per component of the negative resolution, a conjugation relation
at every classical crossing, an equality (possibly inverted) across every
positive marker smoothing, and a commutation relation at every double point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

from .diagram import CROSSING, MARKER, SINGULAR, Diagram
from .resolution import NEGATIVE, POSITIVE, Resolution, resolve, smoothing_pairs

Word = tuple[int, ...]  # letters are +-(generator index + 1)


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple[Word, ...]

    def __str__(self) -> str:
        names = [f"g{i + 1}" for i in range(self.ngens)]

        def show(w: Word) -> str:
            return "".join(
                names[abs(l) - 1] + ("" if l > 0 else "^-1") for l in w) or "1"

        return "⟨ " + ",".join(names) + " | " + ", ".join(show(w) for w in self.relators) + " ⟩"


def free_reduce(w: Word) -> Word:
    out: list[int] = []
    for l in w:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def cyclic_reduce(w: Word) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = free_reduce(w[1:-1])
    return w


# ---------------------------------------------------------------------------
# abstract orientation


@dataclass
class AbstractOrientation:
    """Orientation data pulled back from an oriented negative resolution.

    ``head`` maps each original edge to the endpoint it flows into; loops
    get a direction bit.  ``resolution`` is the underlying negative
    resolution with provenance.
    """

    diagram: Diagram
    resolution: Resolution
    head: dict[str, tuple]
    loop_dir: dict[str, int]
    component_of_edge: dict[str, int]

    def flows_in(self, dart) -> bool:
        nid, p = dart
        e = self.diagram.node(nid).ports[p]
        return self.head[e] == dart


def abstract_orientation(d: Diagram) -> AbstractOrientation:
    """Fix an orientation of the negative resolution and pull it back."""
    res = resolve(d, NEGATIVE)
    c = res.diagram

    # orient each strand circuit of the classical resolution
    head: dict[str, tuple] = {}
    seen: set[str] = set()
    for start in c.edges:
        if start in seen:
            continue
        # leave the start edge through its second endpoint, then follow the
        # strand straight through every crossing
        cur, exit_dart = start, c.edge_ends[start][1]
        while True:
            seen.add(cur)
            head[cur] = exit_dart
            nid, p = exit_dart
            enter = (nid, (p + 2) % 4)
            cur = c.node(nid).ports[(p + 2) % 4]
            a, b = c.edge_ends[cur]
            exit_dart = b if a == enter else a
            if cur == start:
                break

    # pull back along the provenance chains
    orig_head: dict[str, tuple] = {}
    loop_dir: dict[str, int] = {l: 0 for l in d.loops}
    for rid, chain in res.members.items():
        if rid in d.loops:
            continue
        # resolved loops keep the recorded chain direction; resolved edges
        # align with the circuit direction chosen above (the chain end is
        # recorded in original port coordinates, so undo the rotation that
        # resolving a singular vertex may have applied)
        if rid in c.edges:
            nid, p = chain[-1][1]
            rot = res.snode_rot.get(nid, 0)
            forward = head[rid] == (nid, (p + rot) % 4)
        else:
            forward = True
        for eid, h in chain:
            if forward:
                orig_head[eid] = h
            else:
                a, b = d.edge_ends[eid]
                orig_head[eid] = a if h == b else b

    comp_of_edge = {e: res.component_of_original(e) for e in d.edges}
    for l in d.loops:
        comp_of_edge[l] = res.component_of_original(l)
    return AbstractOrientation(d, res, orig_head, loop_dir, comp_of_edge)


# ---------------------------------------------------------------------------
# Wirtinger presentation


def negative_arcs(d: Diagram) -> dict[str, int]:
    """Arc classes of the negative resolution, indexed per edge and loop.

    An arc is a maximal piece of the drawn resolution: it runs through
    over-crossings, marker smoothings and double points unbroken and is cut
    only where it passes under a classical crossing.
    """
    parent: dict[str, str] = {e: e for e in list(d.edges) + list(d.loops)}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for nd in d.nodes:
        if nd.kind == CROSSING:
            union(nd.ports[1], nd.ports[3])
        elif nd.kind == SINGULAR:
            union(nd.ports[0], nd.ports[2])
            union(nd.ports[1], nd.ports[3])
        else:
            for p, q in smoothing_pairs(nd.attr, NEGATIVE):
                union(nd.ports[p], nd.ports[q])
    roots = sorted({find(x) for x in parent})
    index = {r: i for i, r in enumerate(roots)}
    return {x: index[find(x)] for x in parent}


def wirtinger_presentation(d: Diagram,
                           ao: Optional[AbstractOrientation] = None) -> Presentation:
    """One generator per connected component (arc) of the drawn negative
    resolution; a conjugation relation at every classical crossing, an
    (anti-)equality across every positive marker smoothing, and a
    commutation relation at every double point."""
    ao = ao or abstract_orientation(d)
    arc = negative_arcs(d)
    n = len(set(arc.values()))
    rels: list[Word] = []
    for nd in d.nodes:
        ports = nd.ports
        if nd.kind == CROSSING:
            pu = next(p for p in (0, 2) if ao.flows_in((nd.id, p)))
            po = next(p for p in (1, 3) if ao.flows_in((nd.id, p)))
            sign = 1 if po == (pu + 1) % 4 else -1
            a = arc[ports[pu]] + 1             # incoming under-arc
            cgen = arc[ports[(pu + 2) % 4]] + 1    # outgoing under-arc
            y = arc[ports[po]] + 1             # over-arc
            # c = y^-s a y^s
            rels.append(free_reduce((-cgen, -sign * y, a, sign * y)))
        elif nd.kind == MARKER:
            for (p, q) in smoothing_pairs(nd.attr, POSITIVE):
                g1 = arc[ports[p]] + 1
                g2 = arc[ports[q]] + 1
                agree = ao.flows_in((nd.id, p)) != ao.flows_in((nd.id, q))
                if agree:
                    rels.append(free_reduce((-g2, g1)))
                else:
                    rels.append(free_reduce((-g2, -g1)))
        else:  # singular: straight-through identifications are in the arcs
            x = arc[ports[0]] + 1
            y = arc[ports[1]] + 1
            rels.append(free_reduce((x, y, -x, -y)))
    rels = [r for r in (cyclic_reduce(w) for w in rels) if r]
    return Presentation(n, tuple(rels))


# ---------------------------------------------------------------------------
# Tietze simplification


def tietze_simplify(p: Presentation, budget: int = 1000) -> Presentation:
    """Eliminate generators isolated in some relator; reduce relators.

    Presents an isomorphic group; the generator count never grows.
    """
    ngens = p.ngens
    rels = [cyclic_reduce(w) for w in p.relators]
    rels = [w for w in rels if w]
    steps = 0
    changed = True
    while changed and steps < budget:
        changed = False
        steps += 1
        # find a relator in which some generator occurs exactly once
        target = None
        for ri, w in enumerate(rels):
            counts: dict[int, int] = {}
            for l in w:
                counts[abs(l)] = counts.get(abs(l), 0) + 1
            for g, cnt in counts.items():
                if cnt == 1:
                    target = (ri, g)
                    break
            if target:
                break
        if not target:
            break
        ri, g = target
        w = rels[ri]
        i = next(i for i, l in enumerate(w) if abs(l) == g)
        # rotate so the isolated letter is first, then g^e = (rest)^-1
        w = w[i:] + w[:i]
        e = 1 if w[0] > 0 else -1
        rest = w[1:]
        repl = tuple(-l for l in reversed(rest)) if e > 0 else rest
        # g = repl  (when e>0); g^-1 = rest means g = rest reversed-inverted
        sub = repl

        def substitute(word: Word) -> Word:
            out: list[int] = []
            for l in word:
                if abs(l) != g:
                    out.append(l)
                elif l > 0:
                    out.extend(sub)
                else:
                    out.extend(-x for x in reversed(sub))
            return cyclic_reduce(tuple(out))

        new_rels = [substitute(w2) for rj, w2 in enumerate(rels) if rj != ri]
        # renumber generators above g down by one
        def renum(word: Word) -> Word:
            return tuple((abs(l) - 1 if abs(l) > g else abs(l)) * (1 if l > 0 else -1)
                         for l in word)

        rels = [renum(w2) for w2 in new_rels if w2]
        ngens -= 1
        changed = True
    rels = sorted(set(w for w in (cyclic_reduce(w) for w in rels) if w))
    return Presentation(ngens, tuple(rels))


# ---------------------------------------------------------------------------
# abelianization via Smith normal form


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: tuple[int, ...]   # divisibility chain, entries > 1

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def smith_normal_form(mat: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix."""
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    diag = []
    r = c = 0
    while r < rows and c < cols:
        # find a pivot with the smallest nonzero absolute value
        best = None
        for i in range(r, rows):
            for j in range(c, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        m[r], m[i] = m[i], m[r]
        for row in m:
            row[c], row[j] = row[j], row[c]
        again = True
        while again:
            again = False
            for i in range(rows):
                if i != r and m[i][c]:
                    q = m[i][c] // m[r][c]
                    for j in range(cols):
                        m[i][j] -= q * m[r][j]
                    if m[i][c]:
                        m[r], m[i] = m[i], m[r]
                        again = True
            for j in range(cols):
                if j != c and m[r][j]:
                    q = m[r][j] // m[r][c]
                    for i in range(rows):
                        m[i][j] -= q * m[i][c]
                    if m[r][j]:
                        for i in range(rows):
                            m[i][c], m[i][j] = m[i][j], m[i][c]
                        again = True
        # divisibility fix-up: pivot must divide the rest of the block
        piv = abs(m[r][c])
        fixed = False
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                if m[i][j] % piv:
                    for jj in range(cols):
                        m[r][jj] += m[i][jj]
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        diag.append(piv)
        r += 1
        c += 1
    return diag


def abelianization(p: Presentation) -> AbelianGroup:
    mat = [[0] * p.ngens for _ in p.relators]
    for i, w in enumerate(p.relators):
        for l in w:
            mat[i][abs(l) - 1] += 1 if l > 0 else -1
    if not mat:
        return AbelianGroup(p.ngens, ())
    diag = smith_normal_form(mat)
    torsion = tuple(v for v in diag if v > 1)
    rank = p.ngens - len(diag)
    return AbelianGroup(rank, torsion)


# ---------------------------------------------------------------------------
# finite quotients


@dataclass(frozen=True)
class GroupTable:
    """Finite group as a multiplication table over 0..n-1 with identity 0."""

    mult: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.mult)

    @cached_property
    def inv(self) -> tuple[int, ...]:
        out = []
        for x in range(self.n):
            out.append(next(y for y in range(self.n) if self.mult[x][y] == 0))
        return tuple(out)

    def check(self) -> None:
        n = self.n
        for x in range(n):
            if self.mult[0][x] != x or self.mult[x][0] != x:
                raise ValueError("0 is not an identity")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]]:
                        raise ValueError("not associative")
        _ = self.inv


def cyclic_group(n: int) -> GroupTable:
    return GroupTable(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def product_group(g: GroupTable, h: GroupTable) -> GroupTable:
    n, m = g.n, h.n
    mult = [[0] * (n * m) for _ in range(n * m)]
    for a in range(n):
        for b in range(m):
            for c in range(n):
                for e in range(m):
                    mult[a * m + b][c * m + e] = g.mult[a][c] * m + h.mult[b][e]
    return GroupTable(tuple(tuple(r) for r in mult))


def symmetric_group(n: int) -> GroupTable:
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    mult = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return GroupTable(tuple(tuple(r) for r in mult))


def dihedral_group(n: int) -> GroupTable:
    """Order 2n: elements (r, s) = rotation r, flip s."""
    els = [(r, s) for s in (0, 1) for r in range(n)]
    index = {e: i for i, e in enumerate(els)}

    def mul(a, b):
        r1, s1 = a
        r2, s2 = b
        if s1 == 0:
            return ((r1 + r2) % n, s2)
        return ((r1 - r2) % n, 1 - s2)

    mult = [[index[mul(a, b)] for b in els] for a in els]
    return GroupTable(tuple(tuple(r) for r in mult))


def quaternion_group() -> GroupTable:
    # 1, -1, i, -i, j, -j, k, -k encoded via pair tables
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("1", x): x for x in names}
    base.update({(x, "1"): x for x in names})
    rules = {("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
             ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
             ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"}

    def neg(x):
        return x[1:] if x.startswith("-") else "-" + x

    def mul(a, b):
        sa, sb = a.startswith("-"), b.startswith("-")
        ua, ub = a.lstrip("-"), b.lstrip("-")
        if ua == "1":
            r = ub
        elif ub == "1":
            r = ua
        elif ua == ub:
            r = "-1"
        else:
            r = rules[(ua, ub)]
        if sa ^ sb:
            r = neg(r)
        if r == "--1":
            r = "1"
        return r

    index = {x: i for i, x in enumerate(names)}
    mult = [[index[mul(a, b).replace("--", "")] for b in names] for a in names]
    return GroupTable(tuple(tuple(r) for r in mult))


@lru_cache(maxsize=None)
def groups_up_to_order(n: int) -> tuple[tuple[str, GroupTable], ...]:
    """One representative per isomorphism class of order <= n (n <= 8)."""
    out: list[tuple[str, GroupTable]] = []
    for k in range(1, n + 1):
        if k in (1, 2, 3, 5, 7):
            out.append((f"Z{k}", cyclic_group(k)))
        elif k == 4:
            out.append(("Z4", cyclic_group(4)))
            out.append(("Z2xZ2", product_group(cyclic_group(2), cyclic_group(2))))
        elif k == 6:
            out.append(("Z6", cyclic_group(6)))
            out.append(("S3", symmetric_group(3)))
        elif k == 8:
            out.append(("Z8", cyclic_group(8)))
            out.append(("Z2xZ4", product_group(cyclic_group(2), cyclic_group(4))))
            out.append(("Z2^3", product_group(
                cyclic_group(2), product_group(cyclic_group(2), cyclic_group(2)))))
            out.append(("D4", dihedral_group(4)))
            out.append(("Q8", quaternion_group()))
    return tuple(out)


def hom_count(p: Presentation, g: GroupTable) -> int:
    """Number of homomorphisms into the finite group, by backtracking."""
    g.check()
    n = g.n

    def word_value(w: Word, images: list[int]) -> int:
        v = 0
        for l in w:
            x = images[abs(l) - 1]
            if l < 0:
                x = g.inv[x]
            v = g.mult[v][x]
        return v

    by_last: dict[int, list[Word]] = {i: [] for i in range(p.ngens)}
    for w in p.relators:
        if w:
            by_last[max(abs(l) for l in w) - 1].append(w)

    count = 0
    images = [0] * p.ngens

    def backtrack(i: int):
        nonlocal count
        if i == p.ngens:
            count += 1
            return
        for v in range(n):
            images[i] = v
            if all(word_value(w, images) == 0 for w in by_last[i]):
                backtrack(i + 1)

    if p.ngens == 0:
        return 1
    backtrack(0)
    return count
