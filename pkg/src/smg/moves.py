"""Local rewrite engine for diagram moves.

A move is a pair of pattern fragments with numbered boundary legs.  Fragments
are written in the SMG grammar extended with ``leg <k> <edge>`` stubs; leg
numbers give the counterclockwise order of the cut points around the disk the
move is performed in.  Matching embeds a fragment into a host diagram
injectively, preserving rotation, decorations and face structure; application
cuts the matched disk out and sews the other side in along the same legs.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .diagram import (
    CROSSING,
    MARKER,
    SINGULAR,
    Diagram,
    Faces,
    Node,
    OrientedDiagram,
    SMGSyntaxError,
)

HUB = "#"

FORWARD = "forward"
REVERSE = "reverse"


class StaleSiteError(ValueError):
    pass


# ---------------------------------------------------------------------------
# patterns


@dataclass(frozen=True)
class Pattern:
    """A diagram fragment with boundary legs, living in a disk.

    ``heads`` optionally orients each edge: the value is either a node end
    ``(node_id, port)`` or ``("leg", k)``, naming the end the edge flows into.
    """

    nodes: tuple[Node, ...]
    legs: tuple[str, ...]                        # legs[k-1] = edge id of leg k
    heads: tuple[tuple[str, object], ...] = ()

    @cached_property
    def node_map(self) -> dict[str, Node]:
        return {nd.id: nd for nd in self.nodes}

    @property
    def K(self) -> int:
        return len(self.legs)

    @cached_property
    def edge_ends(self) -> dict[str, tuple]:
        """Both ends of every edge; hub ends are ``(HUB, t)``, legs attached
        to the hub in clockwise order so the closed pattern is a sphere map."""
        ends: dict[str, list] = {}
        for nd in self.nodes:
            for p, e in enumerate(nd.ports):
                ends.setdefault(e, []).append((nd.id, p))
        for k, e in enumerate(self.legs, start=1):
            ends.setdefault(e, []).append((HUB, self.K - k))
        bad = [e for e, v in ends.items() if len(v) != 2]
        if bad:
            raise ValueError(f"pattern edge(s) {bad} not used exactly twice")
        return {e: tuple(v) for e, v in ends.items()}

    @cached_property
    def interior_edges(self) -> tuple[str, ...]:
        return tuple(sorted(e for e, ends in self.edge_ends.items()
                            if all(x[0] != HUB for x in ends)))

    @cached_property
    def through_edges(self) -> tuple[str, ...]:
        return tuple(sorted(e for e, ends in self.edge_ends.items()
                            if all(x[0] == HUB for x in ends)))

    def hub_dart_of_leg(self, k: int):
        return (HUB, self.K - k)

    def leg_of_hub_dart(self, dart) -> int:
        return self.K - dart[1]

    def alpha(self, dart):
        nid, p = dart
        e = self.legs[self.K - 1 - p] if nid == HUB else self.node_map[nid].ports[p]
        a, b = self.edge_ends[e]
        return b if a == dart else a

    def phi(self, dart):
        nid, p = self.alpha(dart)
        if nid == HUB:
            return (HUB, (p + 1) % self.K)
        return (nid, (p + 1) % 4)

    @cached_property
    def faces(self) -> tuple[frozenset, ...]:
        all_darts = [(nd.id, p) for nd in self.nodes for p in range(4)]
        all_darts += [(HUB, t) for t in range(self.K)]
        seen, out = set(), []
        for d in all_darts:
            if d in seen:
                continue
            face, cur = [], d
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                cur = self.phi(cur)
            out.append(frozenset(face))
        return tuple(out)

    def check(self) -> None:
        """A fragment plus its boundary hub must be a sphere map."""
        if self.K == 0 and not self.nodes:
            return
        v = len(self.nodes) + (1 if self.K else 0)
        e = len(self.edge_ends)
        f = len(self.faces)
        if v - e + f != 2:
            raise ValueError(f"pattern is not a disk fragment: V-E+F = {v - e + f}")
        for nd in self.nodes:
            if nd.kind in (MARKER, SINGULAR) and nd.attr not in (0, 1):
                raise ValueError(f"pattern node {nd.id}: bad attribute")
            if nd.kind == CROSSING and nd.attr is not None:
                raise ValueError(f"pattern crossing {nd.id} carries an attribute")

    @cached_property
    def node_components(self) -> tuple[frozenset, ...]:
        seen: set[str] = set()
        comps = []
        for nd in self.nodes:
            if nd.id in seen:
                continue
            stack, comp = [nd.id], set()
            while stack:
                cur = stack.pop()
                if cur in comp:
                    continue
                comp.add(cur)
                for p in range(4):
                    m, _ = self.alpha((cur, p))
                    if m != HUB:
                        stack.append(m)
            seen |= comp
            comps.append(frozenset(comp))
        return tuple(sorted(comps, key=min))

    @cached_property
    def head_map(self) -> dict[str, object]:
        return dict(self.heads)

    def boundary_profile(self) -> Optional[tuple[int, ...]]:
        """Per leg, +1 when the strand flows out of the disk there, else -1.
        None for unoriented patterns."""
        if not self.heads:
            return None
        prof = []
        for k, e in enumerate(self.legs, start=1):
            prof.append(+1 if self.head_map.get(e) == ("leg", k) else -1)
        return tuple(prof)


def _rot_node(nd: Node, r: int) -> Node:
    ports = tuple(nd.ports[(p - r) % 4] for p in range(4))
    attr = nd.attr if nd.attr is None else (nd.attr + r) % 2
    return Node(nd.id, nd.kind, attr, ports)


def rotate_pattern(pat: Pattern, r: int) -> Pattern:
    """Rotate every node's ports by ``r``; attributes follow."""
    return Pattern(tuple(_rot_node(nd, r) for nd in pat.nodes), pat.legs, pat.heads)


def parse_pattern(text: str) -> Pattern:
    """Parse one fragment: node lines plus ``leg k e`` and optional
    ``orient e <n.p | leg k>`` lines."""
    nodes: list[Node] = []
    legs: dict[int, str] = {}
    heads: list[tuple[str, object]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kw = toks[0]
        if kw in ("diagram", "end"):
            continue
        if kw == "node":
            kind = toks[2]
            if kind == "X":
                nodes.append(Node(toks[1], "X", None, tuple(toks[3:7])))
            elif kind in ("M", "S"):
                nodes.append(Node(toks[1], kind, int(toks[3]), tuple(toks[4:8])))
            else:
                raise SMGSyntaxError(f"bad node kind {kind!r}", lineno)
        elif kw == "leg":
            legs[int(toks[1])] = toks[2]
        elif kw == "orient":
            e = toks[1]
            if toks[2] == "leg":
                heads.append((e, ("leg", int(toks[3]))))
            else:
                m = re.match(r"^(.+)\.([0-3])$", toks[2])
                if not m:
                    raise SMGSyntaxError("bad orient target", lineno)
                heads.append((e, (m.group(1), int(m.group(2)))))
        else:
            raise SMGSyntaxError(f"unknown pattern keyword {kw!r}", lineno)
    if sorted(legs) != list(range(1, len(legs) + 1)):
        raise SMGSyntaxError("legs must be numbered 1..K", 1)
    pat = Pattern(tuple(nodes), tuple(legs[k] for k in sorted(legs)), tuple(heads))
    pat.check()
    return pat


@dataclass(frozen=True)
class MoveSpec:
    """A local rewrite rule; ``variants`` are interchangeable concrete
    picture pairs (for instance the two chiralities of a kink)."""

    id: str
    variants: tuple[tuple[Pattern, Pattern], ...]
    derived: bool = False
    oriented: bool = False
    deltas: tuple[int, int, int, int] = (0, 0, 0, 0)  # markers, singular, c(L-), c(L+)

    def side(self, variant: int, direction: str) -> Pattern:
        lhs, rhs = self.variants[variant]
        return lhs if direction == FORWARD else rhs

    def other_side(self, variant: int, direction: str) -> Pattern:
        lhs, rhs = self.variants[variant]
        return rhs if direction == FORWARD else lhs


# ---------------------------------------------------------------------------
# matching

LegTarget = tuple  # ("edge", edge_id, end_index) | ("loop", loop_id, slot)


@dataclass(frozen=True)
class Site:
    """An embedding of one side of a move into a host diagram."""

    move_id: str
    variant: int
    direction: str
    node_images: tuple[tuple[str, tuple[str, int]], ...]  # pat node -> (host, rot)
    leg_targets: tuple[LegTarget, ...]

    @cached_property
    def node_image_map(self) -> dict[str, tuple[str, int]]:
        return dict(self.node_images)


def _match_component(d: Diagram, pat: Pattern, comp: frozenset):
    """Yield (node map, interior edge images, leg claims) for one connected
    pattern component.

    A leg-edge consumes one *end* of a host edge, so two leg-edges may share
    a host edge as long as they claim opposite ends; interior edges consume
    the whole host edge.
    """
    root = min(comp)
    rootnd = pat.node_map[root]
    for hostnd in d.nodes:
        if hostnd.kind != rootnd.kind:
            continue
        rots = (0, 2) if rootnd.kind == CROSSING else (0, 1, 2, 3)
        for r0 in rots:
            if rootnd.attr is not None and hostnd.attr != (rootnd.attr + r0) % 2:
                continue
            amap = {root: (hostnd.id, r0)}
            seen_pat: dict[str, str] = {}           # pattern edge -> host edge
            int_img: dict[str, str] = {}            # interior edges only
            claims: dict[str, tuple] = {}           # leg edge -> (host edge, end dart)
            queue = [root]
            ok = True
            while queue and ok:
                cur = queue.pop()
                hid, r = amap[cur]
                hnd = d.node(hid)
                for p in range(4):
                    e = pat.node_map[cur].ports[p]
                    hp = (p + r) % 4
                    he = hnd.ports[hp]
                    if e in seen_pat:
                        if seen_pat[e] != he:
                            ok = False
                            break
                        continue
                    other = pat.alpha((cur, p))
                    if other[0] == HUB:
                        if he in int_img.values():
                            ok = False
                            break
                        if any(c == (he, (hid, hp)) for c in claims.values()):
                            ok = False
                            break
                        seen_pat[e] = he
                        claims[e] = (he, (hid, hp))
                        continue
                    if he in int_img.values() or any(c[0] == he for c in claims.values()):
                        ok = False
                        break
                    m, q = other
                    hends = d.edge_ends[he]
                    if (hid, hp) not in hends:
                        ok = False
                        break
                    hm, hq = hends[1] if hends[0] == (hid, hp) else hends[0]
                    pnd = pat.node_map[m]
                    if m in amap:
                        if amap[m] != (hm, (hq - q) % 4):
                            ok = False
                            break
                        seen_pat[e] = he
                        int_img[e] = he
                        continue
                    if any(hm == v[0] for v in amap.values()):
                        ok = False
                        break
                    hnd2 = d.node(hm)
                    r2 = (hq - q) % 4
                    if hnd2.kind != pnd.kind or (pnd.kind == CROSSING and r2 % 2):
                        ok = False
                        break
                    if pnd.attr is not None and hnd2.attr != (pnd.attr + r2) % 2:
                        ok = False
                        break
                    amap[m] = (hm, r2)
                    seen_pat[e] = he
                    int_img[e] = he
                    queue.append(m)
            if ok and len(amap) == len(comp):
                yield amap, int_img, claims


def _iter_embeddings(d: Diagram, pat: Pattern):
    """All injective combinatorial embeddings before face filtering.

    Yields (node map, {leg k: target}, interior edge image map).
    """
    comp_choices = []
    for comp in pat.node_components:
        found = list(_match_component(d, pat, comp))
        if not found:
            return
        comp_choices.append(found)
    leg_of_edge = {e: k for k, e in enumerate(pat.legs, start=1)}
    for picks in itertools.product(*comp_choices):
        amap: dict[str, tuple[str, int]] = {}
        int_img: dict[str, str] = {}
        claims: dict[str, tuple] = {}
        ok = True
        for am, ii, cl in picks:
            if any(v[0] in {w[0] for w in amap.values()} for v in am.values()):
                ok = False
                break
            if set(ii.values()) & (set(int_img.values()) | {c[0] for c in claims.values()}):
                ok = False
                break
            if any(c[0] in set(int_img.values()) or c in claims.values()
                   for c in cl.values()):
                ok = False
                break
            amap.update(am)
            int_img.update(ii)
            claims.update(cl)
        if not ok:
            continue
        interior_imgs = set(int_img.values())
        targets: dict[int, LegTarget] = {}
        for e, (he, end_dart) in claims.items():
            which = 0 if d.edge_ends[he][0] == end_dart else 1
            targets[leg_of_edge[e]] = ("edge", he, which)
        # through-strands: try host edges (both end orders) and loops
        th = pat.through_edges
        th_opts = []
        for e in th:
            opts = []
            for he in d.edges:
                if he in interior_imgs or any(t[1] == he for t in targets.values()):
                    continue
                opts.append(("edge", he))
            for l in d.loops:
                opts.append(("loop", l))
            th_opts.append([(o, flip) for o in opts for flip in (0, 1)])
        for combo in itertools.product(*th_opts):
            used = [o[1] for o, _ in combo]
            if len(set(used)) != len(used):
                continue
            full = dict(targets)
            for e, ((kind, ident), flip) in zip(th, combo):
                k1, k2 = sorted(pat.leg_of_hub_dart(x) for x in pat.edge_ends[e])
                full[k1] = (kind, ident, flip)
                full[k2] = (kind, ident, 1 - flip)
            yield dict(amap), full, dict(int_img)


def _host_dart_beyond(d: Diagram, pat: Pattern, dart, amap, targets):
    """Host dart corresponding to a pattern dart.

    Node darts map through the embedding; a hub dart maps to the host dart
    just beyond its leg's cut (None when the cut sits on a loop).  For a
    leg-edge the target's end index names the interior side, so "beyond" is
    the other end; for a through-strand it names the exterior side directly.
    """
    nid, p = dart
    if nid != HUB:
        hid, r = amap[nid]
        return (hid, (p + r) % 4)
    k = pat.leg_of_hub_dart(dart)
    t = targets[k]
    if t[0] == "loop":
        return None
    e = pat.legs[k - 1]
    through = all(x[0] == HUB for x in pat.edge_ends[e])
    return d.edge_ends[t[1]][t[2] if through else 1 - t[2]]


def _face_conditions(d: Diagram, faces: Faces, pat: Pattern, amap, targets) -> bool:
    for pf in pat.faces:
        gap = any(x[0] == HUB for x in pf)
        ids = set()
        first_orbit = None
        for dart in pf:
            hd = _host_dart_beyond(d, pat, dart, amap, targets)
            if hd is None:
                ids.add(faces.face_of_loop(targets[pat.leg_of_hub_dart(dart)][1]))
            else:
                ids.add(faces.face_of_dart(hd))
                if first_orbit is None:
                    first_orbit = faces._orbit_of[hd]
        if len(ids) > 1:
            return False
        if not gap:
            # interior face: the host face must be exactly this polygon
            if first_orbit is None or faces.orbit_degree(first_orbit) != len(pf):
                return False
            if not faces.face_is_plain_orbit(first_orbit):
                return False
    return True


def _orientation_ok(od: OrientedDiagram, d: Diagram, pat: Pattern, amap, targets) -> bool:
    if not pat.heads:
        return True
    for e in pat.edge_ends:
        head = pat.head_map.get(e)
        if head is None:
            return False
        hdart = pat.hub_dart_of_leg(head[1]) if head[0] == "leg" else head
        hd = _host_dart_beyond(d, pat, hdart, amap, targets)
        if hdart[0] != HUB:
            host_edge = d.node(hd[0]).ports[hd[1]]
            if od.head_map[host_edge] != hd:
                return False
        else:
            t = targets[pat.leg_of_hub_dart(hdart)]
            if t[0] == "loop":
                continue
            if od.head_map[t[1]] != hd:
                return False
    return True


def find_sites(d, move: MoveSpec, direction: str = FORWARD,
               validated: bool = True) -> list[Site]:
    """Complete, duplicate-free list of embeddings of the chosen side.

    By default, embeddings whose rewrite would break the sphere-map
    invariants are dropped, so every returned site is applicable; searches
    that apply sites immediately anyway can pass ``validated=False`` and
    catch :class:`StaleSiteError` themselves."""
    od = d if isinstance(d, OrientedDiagram) else None
    base = d.base if od is not None else d
    faces = base.faces()
    out, seen = [], set()
    for variant in range(len(move.variants)):
        pat = move.side(variant, direction)
        if move.oriented and od is None:
            raise ValueError(f"move {move.id} requires an oriented diagram")
        for amap, targets, _ in _iter_embeddings(base, pat):
            if not _face_conditions(base, faces, pat, amap, targets):
                continue
            if od is not None and pat.heads and not _orientation_ok(od, base, pat, amap, targets):
                continue
            site = Site(move.id, variant, direction,
                        tuple(sorted(amap.items())),
                        tuple(targets[k] for k in sorted(targets)))
            key = (variant, site.node_images, site.leg_targets)
            if key in seen:
                continue
            seen.add(key)
            if validated:
                try:
                    apply_move(d, move, site)
                except (StaleSiteError, ValueError):
                    continue
            out.append(site)
    return out


# ---------------------------------------------------------------------------
# application


def _fresh(prefix: str, taken: set) -> str:
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    taken.add(f"{prefix}{i}")
    return f"{prefix}{i}"


def apply_move(d, move: MoveSpec, site: Site, return_info: bool = False):
    """Rewrite at ``site``; returns a new diagram of the same flavour.

    With ``return_info`` the result is a pair ``(diagram, info)`` where info
    maps the replacement side's interior edge and node names to the fresh
    identifiers used in the result."""
    od = d if isinstance(d, OrientedDiagram) else None
    base = d.base if od is not None else d
    pat = move.side(site.variant, site.direction)
    out = move.other_side(site.variant, site.direction)
    amap = site.node_image_map
    targets = {k + 1: t for k, t in enumerate(site.leg_targets)}

    # -- presence checks
    for n, (hid, r) in amap.items():
        if hid not in base.node_map:
            raise StaleSiteError(f"host node {hid} gone")
        pnd, hnd = pat.node_map[n], base.node(hid)
        if hnd.kind != pnd.kind:
            raise StaleSiteError("kind mismatch")
        if pnd.attr is not None and hnd.attr != (pnd.attr + r) % 2:
            raise StaleSiteError("attribute mismatch")
    edge_img: dict[str, str] = {}
    for n, (hid, r) in amap.items():
        for p in range(4):
            e = pat.node_map[n].ports[p]
            he = base.node(hid).ports[(p + r) % 4]
            if edge_img.setdefault(e, he) != he:
                raise StaleSiteError("edge image inconsistent")
    consumed_nodes = {hid for hid, _ in amap.values()}
    consumed_edges = {edge_img[e] for e in pat.interior_edges}
    for k, t in targets.items():
        if t[0] == "edge":
            if t[1] not in base.edge_ends or t[1] in consumed_edges:
                raise StaleSiteError(f"cut edge {t[1]} unavailable")
        elif t[1] not in base.loops:
            raise StaleSiteError(f"cut loop {t[1]} gone")

    # remember a face near the site so new loops can be anchored there
    faces = base.faces()
    site_face = None
    if targets:
        t = targets[1]
        if t[0] == "loop":
            site_face = faces.face_of_loop(t[1])
        else:
            far = base.edge_ends[t[1]][1 - t[2]]
            if far[0] not in consumed_nodes:
                site_face = faces.face_of_dart(far)

    # -- outer stubs per leg
    def is_through(k: int) -> bool:
        e = pat.legs[k - 1]
        return all(x[0] == HUB for x in pat.edge_ends[e])

    stub: dict[int, tuple] = {}
    claims: dict[tuple[str, str], list[int]] = {}
    for k, t in targets.items():
        claims.setdefault((t[0], t[1]), []).append(k)
    for (kind, ident), ks in claims.items():
        if kind == "loop":
            if len(ks) != 2:
                raise StaleSiteError("loop must be cut exactly twice")
            stub[ks[0]] = ("pair", ks[1])
            stub[ks[1]] = ("pair", ks[0])
        elif any(is_through(k) for k in ks):
            # a through-strand covers the middle; both host ends survive
            if len(ks) != 2 or not all(is_through(k) for k in ks):
                raise StaleSiteError("inconsistent through-strand cut")
            for k in ks:
                far = base.edge_ends[ident][targets[k][2]]
                if far[0] in consumed_nodes:
                    raise StaleSiteError("cut edge ends in consumed node")
                stub[k] = ("dart", far)
        elif len(ks) == 2:
            # two leg-edges cut near both ends; the middle survives outside
            stub[ks[0]] = ("pair", ks[1])
            stub[ks[1]] = ("pair", ks[0])
        else:
            k = ks[0]
            far = base.edge_ends[ident][1 - targets[k][2]]
            if far[0] in consumed_nodes:
                raise StaleSiteError("cut edge ends in consumed node")
            stub[k] = ("dart", far)

    taken = set(base.node_map) | set(base.edge_ends) | set(base.loops)

    # -- instantiate replacement interior
    node_ids = {nd.id: _fresh("q", taken) for nd in out.nodes}
    int_eids = {e: _fresh("t", taken) for e in out.interior_edges}

    # inner terminal of each replacement leg
    inner: dict[int, tuple] = {}
    for k, e in enumerate(out.legs, start=1):
        node_end = [x for x in out.edge_ends[e] if x[0] != HUB]
        if node_end:
            n, p = node_end[0]
            inner[k] = ("port", node_ids[n], p)
        else:
            other = [x for x in out.edge_ends[e] if x != out.hub_dart_of_leg(k)][0]
            inner[k] = ("chain", out.leg_of_hub_dart(other))

    # -- walk boundary strands: alternate inner and outer connectors
    def walk(k: int, go_inner: bool):
        """Follow the strand from leg k; returns (terminal or None, legs seen)."""
        seen_states = set()
        cur, inward = k, go_inner
        legs_seen = {k}
        while True:
            if (cur, inward) in seen_states:
                return None, legs_seen
            seen_states.add((cur, inward))
            conn = inner[cur] if inward else stub[cur]
            if conn[0] == "port":
                return ("port", conn[1], conn[2]), legs_seen
            if conn[0] == "dart":
                return ("dart", conn[1]), legs_seen
            cur = conn[1]
            legs_seen.add(cur)
            inward = not inward
            if (cur, inward) == (k, go_inner):
                return None, legs_seen

    new_edges: list[tuple[str, tuple, tuple]] = []
    new_loops: list[str] = []
    done_legs: set[int] = set()
    for k in sorted(inner):
        if k in done_legs:
            continue
        t1, seen1 = walk(k, True)
        if t1 is None:
            new_loops.append(_fresh("c", taken))
            done_legs |= seen1
            continue
        t2, seen2 = walk(k, False)
        if t2 is None:
            raise StaleSiteError("inconsistent boundary chain")
        done_legs |= seen1 | seen2
        new_edges.append((_fresh("t", taken), t1, t2))

    # -- assemble
    port_sub: dict[tuple, str] = {}
    for eid, t1, t2 in new_edges:
        for t in (t1, t2):
            if t[0] == "dart":
                port_sub[tuple(t[1])] = eid
    port_sub_new: dict[tuple[str, int], str] = {}
    for eid, t1, t2 in new_edges:
        for t in (t1, t2):
            if t[0] == "port":
                port_sub_new[(t[1], t[2])] = eid

    final_nodes: list[Node] = []
    for nd in base.nodes:
        if nd.id in consumed_nodes:
            continue
        ports = []
        for p in range(4):
            if (nd.id, p) in port_sub:
                ports.append(port_sub[(nd.id, p)])
            else:
                e = nd.ports[p]
                if e in consumed_edges or any(
                        t[0] == "edge" and t[1] == e for t in targets.values()):
                    raise StaleSiteError("survivor references consumed edge")
                ports.append(e)
        final_nodes.append(Node(nd.id, nd.kind, nd.attr, tuple(ports)))
    for nd in out.nodes:
        ports = []
        for p in range(4):
            e = nd.ports[p]
            if e in int_eids:
                ports.append(int_eids[e])
            else:
                nid = node_ids[nd.id]
                if (nid, p) not in port_sub_new:
                    raise StaleSiteError("unresolved replacement port")
                ports.append(port_sub_new[(nid, p)])
        final_nodes.append(Node(node_ids[nd.id], nd.kind, nd.attr, tuple(ports)))

    cut_loops = {t[1] for t in targets.values() if t[0] == "loop"}
    final_loops = tuple(l for l in base.loops if l not in cut_loops) + tuple(new_loops)

    anchors = []
    surviving_ids = {nd.id for nd in final_nodes}
    for pid, anchor in base.anchors:
        if pid in cut_loops:
            continue
        if pid not in surviving_ids and pid not in final_loops:
            continue
        if anchor is not None and anchor[0] not in surviving_ids:
            anchor = None
        anchors.append((pid, anchor))
    if new_loops and site_face is not None:
        re_anchor = None
        for nd in final_nodes:
            if nd.id not in base.node_map:
                continue
            for p in range(4):
                if faces.face_of_corner((nd.id, p)) == site_face:
                    re_anchor = (nd.id, p)
                    break
            if re_anchor:
                break
        if re_anchor is not None:
            for l in new_loops:
                anchors.append((l, re_anchor))

    result = Diagram(base.name, tuple(final_nodes), final_loops, tuple(anchors))
    report = result.validate()
    if not report.ok:
        raise StaleSiteError(f"rewrite produced invalid diagram: {report}")
    info = {"int_eids": dict(int_eids), "node_ids": dict(node_ids)}
    if od is None:
        return (result, info) if return_info else result

    # -- orientation transport
    fixed: dict[str, tuple] = {}
    banned: dict[str, tuple] = {}
    for eid, t1, t2 in new_edges:
        for t in (t1, t2):
            if t[0] != "dart":
                continue
            m, q = t[1]
            old_edge = base.node(m).ports[q]
            if od.head_map[old_edge] == (m, q):
                fixed[eid] = (m, q)
            else:
                banned[eid] = (m, q)
    for e in out.interior_edges:
        h = out.head_map.get(e)
        if h is not None and h[0] != "leg":
            fixed[int_eids[e]] = (node_ids[h[0]], h[1])
    if out.heads:
        # propagate the replacement side's declared flow along each chain
        leg_edge_for = {}
        for eid, t1, t2 in new_edges:
            for k in inner:
                if inner[k][0] == "port" and ("port", inner[k][1], inner[k][2]) in (t1, t2):
                    leg_edge_for.setdefault(eid, (k, t1, t2))
        for eid, (k, t1, t2) in leg_edge_for.items():
            e = out.legs[k - 1]
            h = out.head_map.get(e)
            if h is None:
                continue
            flows_out = h == ("leg", k)
            inner_term = ("port", inner[k][1], inner[k][2])
            head_term = None
            if flows_out:
                head_term = t2 if t1 == inner_term else t1
            else:
                head_term = inner_term
            if head_term[0] == "port":
                fixed.setdefault(eid, (head_term[1], head_term[2]))
            else:
                fixed.setdefault(eid, tuple(head_term[1]))

    from .diagram import enumerate_orientations

    for cand in enumerate_orientations(result):
        hm = cand.head_map
        if any(hm[e] != v for e, v in fixed.items()):
            continue
        if any(hm[e] == v for e, v in banned.items()):
            continue
        ok = True
        for e, h in od.heads:
            if e in result.edge_ends and hm[e] != h:
                ok = False
                break
        if ok:
            loop_dirs = dict(od.loop_dirs)
            dirs = tuple((l, loop_dirs.get(l, 0)) for l in result.loops)
            ores = OrientedDiagram(result, cand.heads, dirs, od.abstract)
            return (ores, info) if return_info else ores
    raise StaleSiteError("rewrite does not extend to a coherent orientation")


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class MoveStep:
    move_id: str
    variant: int
    direction: str
    fingerprint: str  # digest of the canonical code of this step's result


@dataclass(frozen=True)
class MoveSequence:
    steps: tuple[MoveStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def serialize(self) -> str:
        return "\n".join(f"{s.move_id} {s.variant} {s.direction} {s.fingerprint}"
                         for s in self.steps)

    @staticmethod
    def parse(text: str) -> "MoveSequence":
        steps = []
        for line in text.splitlines():
            if line.strip():
                mid, var, direction, fp = line.split()
                steps.append(MoveStep(mid, int(var), direction, fp))
        return MoveSequence(tuple(steps))


def code_digest(d) -> str:
    base = d.base if isinstance(d, OrientedDiagram) else d
    return hashlib.sha256(base.canonical_code()).hexdigest()[:16]


def verify_sequence(d, s: MoveSequence, catalog: dict[str, MoveSpec]):
    """Replay ``s`` from ``d``, failing fast on the first stale step."""
    cur = d
    for i, step in enumerate(s.steps):
        move = catalog[step.move_id]
        nxt = None
        for site in find_sites(cur, move, step.direction):
            if site.variant != step.variant:
                continue
            try:
                cand = apply_move(cur, move, site)
            except StaleSiteError:
                continue
            if code_digest(cand) == step.fingerprint:
                nxt = cand
                break
        if nxt is None:
            raise StaleSiteError(f"stale step {i}: {step.move_id} -> {step.fingerprint}")
        cur = nxt
    return cur


# ---------------------------------------------------------------------------
# bounded equivalence search


@dataclass
class SearchBudget:
    max_depth: int = 8
    max_states: int = 100_000


def search_equivalence(d1: Diagram, d2: Diagram, catalog: dict[str, MoveSpec],
                       allowed: Optional[Iterable[str]] = None,
                       budget: Optional[SearchBudget] = None) -> Optional[MoveSequence]:
    """Bidirectional breadth-first search over canonical codes.

    On success the returned sequence replays from ``d1`` to a diagram with
    ``d2``'s canonical code.  Failure within budget proves nothing.
    """
    budget = budget or SearchBudget()
    moves = [catalog[m] for m in (allowed if allowed is not None else catalog)]
    c1, c2 = d1.canonical_code(), d2.canonical_code()
    if c1 == c2:
        return MoveSequence(())

    fwd: dict[bytes, tuple[Diagram, list]] = {c1: (d1, [])}
    bwd: dict[bytes, tuple[Diagram, list]] = {c2: (d2, [])}
    frontier_f, frontier_b = [d1], [d2]
    states = 2
    total_depth = 0

    def digest(code: bytes) -> str:
        return hashlib.sha256(code).hexdigest()[:16]

    def join(code: bytes) -> MoveSequence:
        steps = [s for s, _ in fwd[code][1]]
        path_b = bwd[code][1]
        codes = [c2] + [c for _, c in path_b]
        for i in range(len(path_b) - 1, -1, -1):
            s, _ = path_b[i]
            inv = REVERSE if s.direction == FORWARD else FORWARD
            steps.append(MoveStep(s.move_id, s.variant, inv, digest(codes[i])))
        return MoveSequence(tuple(steps))

    def expand(frontier, this_side, other_side):
        nonlocal states
        new_frontier = []
        for d in frontier:
            path = this_side[d.canonical_code()][1]
            for move in moves:
                for direction in (FORWARD, REVERSE):
                    for site in find_sites(d, move, direction, validated=False):
                        try:
                            nxt = apply_move(d, move, site)
                        except StaleSiteError:
                            continue
                        code = nxt.canonical_code()
                        if code in this_side:
                            continue
                        step = MoveStep(move.id, site.variant, direction, digest(code))
                        this_side[code] = (nxt, path + [(step, code)])
                        new_frontier.append(nxt)
                        states += 1
                        if code in other_side:
                            return new_frontier, code
                        if states >= budget.max_states:
                            return new_frontier, StopIteration
        return new_frontier, None

    while total_depth < budget.max_depth:
        if not frontier_f and not frontier_b:
            return None
        total_depth += 1
        if frontier_f and (len(frontier_f) <= len(frontier_b) or not frontier_b):
            frontier_f, hit = expand(frontier_f, fwd, bwd)
        else:
            frontier_b, hit = expand(frontier_b, bwd, fwd)
        if hit is StopIteration:
            return None
        if hit is not None:
            return join(hit)
    return None
