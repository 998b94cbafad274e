"""Singular marked graph diagrams as combinatorial maps on the sphere.

A diagram is a 4-valent graph with a rotation system (counterclockwise port
order at every node), vertices decorated as classical crossings, markers or
singular points, plus a set of crossingless loop components.  Sphere embedding
is part of the data: each connected piece must satisfy Euler's formula for its
traced faces, and disconnected pieces carry face anchors saying where they sit
relative to the already placed pieces.

Port conventions
----------------
* crossing ``X``: the under-strand occupies ports 0 and 2, the over-strand
  ports 1 and 3;
* marker ``M`` with axis ``a``: the marker bar spans ports ``a`` and ``a+2``;
* singular ``S`` with side ``s``: the strand through ports ``(s, s+2)`` is the
  one passing over in the positive resolution.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

CROSSING = "X"
MARKER = "M"
SINGULAR = "S"
KINDS = (CROSSING, MARKER, SINGULAR)

#: Sentinel for "placed in the common outer face".
OUTER = "~outer"

Dart = tuple[str, int]


class SMGError(ValueError):
    """Base class for diagram format errors."""


class SMGSyntaxError(SMGError):
    def __init__(self, message: str, line: int, col: int = 0):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.col = col


class SMGSemanticError(SMGError):
    pass


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    attr: Optional[int]
    ports: tuple[str, str, str, str]


@dataclass(frozen=True)
class Issue:
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


class ValidationReport:
    def __init__(self, issues: Iterable[Issue]):
        self.issues = tuple(issues)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self) -> Iterator[Issue]:
        return iter(self.issues)

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(map(str, self.issues))


def _norm_entry_rotation(kind: str, q: int) -> int:
    # Crossings may only be rotated by 0 or 2 (under-strand stays at 0,2).
    if kind == CROSSING:
        return q - (q % 2)
    return q


@dataclass(frozen=True)
class Diagram:
    """An immutable singular marked graph diagram.

    ``anchors`` maps piece ids (smallest node id of a graph piece, or the loop
    id) to either ``None``/absent (outer face) or a corner ``(node_id, k)``
    naming the face of an already placed piece the component sits in.
    """

    name: str
    nodes: tuple[Node, ...]
    loops: tuple[str, ...] = ()
    anchors: tuple[tuple[str, Optional[tuple[str, int]]], ...] = ()

    # -- basic structure -------------------------------------------------

    @cached_property
    def node_map(self) -> dict[str, Node]:
        return {nd.id: nd for nd in self.nodes}

    def node(self, nid: str) -> Node:
        return self.node_map[nid]

    @cached_property
    def edge_ends(self) -> dict[str, tuple[Dart, ...]]:
        ends: dict[str, list[Dart]] = {}
        for nd in self.nodes:
            for p, e in enumerate(nd.ports):
                ends.setdefault(e, []).append((nd.id, p))
        return {e: tuple(v) for e, v in ends.items()}

    @cached_property
    def edges(self) -> tuple[str, ...]:
        return tuple(sorted(self.edge_ends))

    @cached_property
    def anchor_map(self) -> dict[str, Optional[tuple[str, int]]]:
        return dict(self.anchors)

    def alpha(self, dart: Dart) -> Dart:
        """The other end of the edge carrying ``dart``."""
        nid, p = dart
        e = self.node(nid).ports[p]
        a, b = self.edge_ends[e]
        return b if a == dart else a

    def darts(self) -> Iterator[Dart]:
        for nd in self.nodes:
            for p in range(4):
                yield (nd.id, p)

    def phi(self, dart: Dart) -> Dart:
        """Next dart along the face: cross the edge, then rotate one port."""
        n, p = self.alpha(dart)
        return (n, (p + 1) % 4)

    @property
    def counts(self) -> tuple[int, int, int]:
        """(crossings, markers, singular vertices)."""
        x = sum(1 for nd in self.nodes if nd.kind == CROSSING)
        m = sum(1 for nd in self.nodes if nd.kind == MARKER)
        s = sum(1 for nd in self.nodes if nd.kind == SINGULAR)
        return x, m, s

    def is_classical(self) -> bool:
        return all(nd.kind == CROSSING for nd in self.nodes)

    # -- components -------------------------------------------------------

    @cached_property
    def graph_pieces(self) -> tuple[frozenset[str], ...]:
        """Connected components of the node-bearing graph."""
        seen: set[str] = set()
        pieces = []
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
                    stack.append(self.alpha((cur, p))[0])
            seen |= comp
            pieces.append(frozenset(comp))
        return tuple(sorted(pieces, key=min))

    def piece_id(self, piece: frozenset[str]) -> str:
        return min(piece)

    @cached_property
    def piece_ids(self) -> tuple[str, ...]:
        return tuple(self.piece_id(p) for p in self.graph_pieces) + self.loops

    # -- validation -------------------------------------------------------

    def validate(self) -> ValidationReport:
        issues: list[Issue] = []
        ids = [nd.id for nd in self.nodes]
        if len(set(ids)) != len(ids):
            issues.append(Issue("duplicate id", "repeated node id"))
        if len(set(self.loops)) != len(self.loops):
            issues.append(Issue("duplicate id", "repeated loop id"))
        if set(ids) & set(self.loops):
            issues.append(Issue("duplicate id", "node id reused as loop id"))
        for nd in self.nodes:
            if nd.kind not in KINDS:
                issues.append(Issue("bad kind", f"node {nd.id} kind {nd.kind!r}"))
                continue
            if nd.kind == CROSSING and nd.attr is not None:
                issues.append(Issue("bad attribute", f"crossing {nd.id} carries an attribute"))
            if nd.kind in (MARKER, SINGULAR) and nd.attr not in (0, 1):
                issues.append(Issue("bad attribute", f"node {nd.id} needs axis/side 0 or 1"))
        for e, ends in self.edge_ends.items():
            if len(ends) == 1:
                issues.append(Issue("unpaired edge", f"edge {e} has a single endpoint"))
            elif len(ends) > 2:
                issues.append(Issue("port collision", f"edge {e} attached {len(ends)} times"))
        if issues:
            # face tracing is unsafe on malformed structure
            return ValidationReport(issues)

        # Euler check, per connected piece: V - E + F = 2.
        for piece in self.graph_pieces:
            v = len(piece)
            piece_edges = {self.node(n).ports[p] for n in piece for p in range(4)}
            e = len(piece_edges)
            f = len(self._orbits_of(piece))
            if v - e + f != 2:
                issues.append(
                    Issue("non-spherical embedding",
                          f"piece {min(piece)}: V-E+F = {v}-{e}+{f} = {v - e + f}"))

        known = set(self.piece_ids)
        for pid, anchor in self.anchors:
            if pid not in known:
                issues.append(Issue("bad placement", f"unknown piece {pid}"))
            if anchor is not None:
                nid, k = anchor
                if nid not in self.node_map or not 0 <= k <= 3:
                    issues.append(Issue("bad placement", f"bad corner {anchor}"))
                elif any(nid in piece and pid == min(piece) for piece in self.graph_pieces):
                    issues.append(Issue("bad placement", f"piece {pid} anchored to itself"))
        return ValidationReport(issues)

    def _orbits_of(self, piece: frozenset[str]) -> list[frozenset[Dart]]:
        darts = [(n, p) for n in sorted(piece) for p in range(4)]
        seen: set[Dart] = set()
        orbits = []
        for d in darts:
            if d in seen:
                continue
            orbit = []
            cur = d
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                cur = self.phi(cur)
            orbits.append(frozenset(orbit))
        return orbits

    # -- canonical form ---------------------------------------------------

    def _signature_from(self, root: Dart):
        labels: dict[str, int] = {}
        rots: dict[str, int] = {}
        order: list[str] = []

        def visit(nid: str, q: int) -> None:
            labels[nid] = len(order)
            rots[nid] = _norm_entry_rotation(self.node(nid).kind, q) % 4
            order.append(nid)

        visit(root[0], root[1])
        sig = []
        i = 0
        while i < len(order):
            nid = order[i]
            i += 1
            nd = self.node(nid)
            r = rots[nid]
            attr = None if nd.attr is None else (nd.attr - r) % 2
            row: list = [nd.kind, attr]
            for relp in range(4):
                m, q = self.alpha((nid, (relp + r) % 4))
                if m not in labels:
                    visit(m, q)
                row.append((labels[m], (q - rots[m]) % 4))
            sig.append(tuple(row))
        return tuple(sig), labels, rots

    @cached_property
    def _piece_canon(self) -> dict[str, tuple]:
        """piece id -> (signature, tuple of minimizing root darts)."""
        out = {}
        for piece in self.graph_pieces:
            best = None
            roots: list[Dart] = []
            for n in sorted(piece):
                for p in range(4):
                    sig, _, _ = self._signature_from((n, p))
                    if best is None or sig < best:
                        best, roots = sig, [(n, p)]
                    elif sig == best:
                        roots.append((n, p))
            out[min(piece)] = (best, tuple(roots))
        return out

    def _canonical_face_name(self, pid: str, orbit: frozenset[Dart]) -> tuple:
        """Automorphism-invariant name of a face orbit inside one piece."""
        _, roots = self._piece_canon[pid]
        best = None
        for root in roots:
            _, labels, rots = self._signature_from(root)
            name = tuple(sorted((labels[n], (p - rots[n]) % 4) for n, p in orbit))
            if best is None or name < best:
                best = name
        return best

    def canonical_code(self) -> bytes:
        """Byte string equal exactly for isomorphic decorated sphere maps."""
        return self._canonical_code

    @cached_property
    def _canonical_code(self) -> bytes:
        faces = self.faces()
        piece_sigs = sorted(
            (self._piece_canon[min(piece)][0], min(piece)) for piece in self.graph_pieces
        )
        # Anchors are resolved into piece-signature-relative face names.
        def resolve(pid: str):
            anchor = self.anchor_map.get(pid)
            if anchor is None:
                return "outer"
            host = faces.piece_of_corner(anchor)
            return (self._piece_canon[host][0],
                    self._canonical_face_name(host, faces.orbit_of_corner(anchor)))

        loop_part = sorted(resolve(l) for l in self.loops)
        piece_anchor_part = sorted(
            (sig, resolve(pid)) for sig, pid in piece_sigs
        )
        return repr((piece_anchor_part, loop_part)).encode()

    # -- faces --------------------------------------------------------------

    def faces(self) -> "Faces":
        return self._faces

    @cached_property
    def _faces(self) -> "Faces":
        return Faces(self)

    # -- rebuilding ---------------------------------------------------------

    def relabeled(self, node_map: dict[str, str], edge_map: dict[str, str],
                  loop_map: Optional[dict[str, str]] = None) -> "Diagram":
        loop_map = loop_map or {}
        nodes = tuple(
            Node(node_map.get(nd.id, nd.id), nd.kind, nd.attr,
                 tuple(edge_map.get(e, e) for e in nd.ports))
            for nd in self.nodes
        )
        loops = tuple(loop_map.get(l, l) for l in self.loops)
        anchors = []
        for pid, anchor in self.anchors:
            pid2 = loop_map.get(pid, node_map.get(pid, pid))
            if anchor is not None:
                anchor = (node_map.get(anchor[0], anchor[0]), anchor[1])
            anchors.append((pid2, anchor))
        return Diagram(self.name, nodes, loops, tuple(anchors))


class Faces:
    """Face structure of the assembled (placed) diagram.

    Faces of each graph piece are the orbits of the permutation
    ``dart -> rotate(cross(dart))``; placement merges one face per piece into
    the face it is anchored to (the common outer face by default).  Loops are
    treated as transparent markers sitting inside a face: they do not split
    it.
    """

    def __init__(self, d: Diagram):
        self.diagram = d
        self.orbits: list[frozenset[Dart]] = []
        self._orbit_of: dict[Dart, int] = {}
        self._piece_of: dict[int, str] = {}
        for piece in d.graph_pieces:
            pid = min(piece)
            for orbit in d._orbits_of(piece):
                idx = len(self.orbits)
                self.orbits.append(orbit)
                self._piece_of[idx] = pid
                for dart in orbit:
                    self._orbit_of[dart] = idx
        # Union-find over orbit ids plus the virtual outer face (-1).
        self._parent: dict[int, int] = {i: i for i in range(len(self.orbits))}
        self._parent[-1] = -1
        anchor_map = d.anchor_map
        for piece in d.graph_pieces:
            pid = min(piece)
            outward = self._outward_orbit(pid)
            target = self._anchor_face(anchor_map.get(pid))
            self._union(outward, target)
        self._loop_face: dict[str, int] = {}
        for l in d.loops:
            self._loop_face[l] = self._find(self._anchor_face(anchor_map.get(l)))

    def _outward_orbit(self, pid: str) -> int:
        _, roots = self.diagram._piece_canon[pid]
        return min(self._orbit_of[r] for r in roots)

    def _anchor_face(self, anchor: Optional[tuple[str, int]]) -> int:
        if anchor is None:
            return -1
        return self.orbit_of_corner_index(anchor)

    def _find(self, x: int) -> int:
        while self._parent[x] != x:
            self._parent[x] = self._parent[self._parent[x]]
            x = self._parent[x]
        return x

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[ra] = rb

    # corner (n, k) names the face between ports k and k+1 of node n
    def orbit_of_corner_index(self, corner: tuple[str, int]) -> int:
        n, k = corner
        return self._orbit_of[(n, (k + 1) % 4)]

    def orbit_of_corner(self, corner: tuple[str, int]) -> frozenset[Dart]:
        return self.orbits[self.orbit_of_corner_index(corner)]

    def piece_of_corner(self, corner: tuple[str, int]) -> str:
        return self._piece_of[self.orbit_of_corner_index(corner)]

    def face_of_corner(self, corner: tuple[str, int]) -> int:
        return self._find(self.orbit_of_corner_index(corner))

    def face_of_dart(self, dart: Dart) -> int:
        return self._find(self._orbit_of[dart])

    def face_of_loop(self, loop: str) -> int:
        return self._loop_face[loop]

    def edge_sides(self, e: str) -> tuple[int, int]:
        ends = self.diagram.edge_ends[e]
        return (self.face_of_dart(ends[0]), self.face_of_dart(ends[1]))

    def loops_in_face(self, face: int) -> list[str]:
        return [l for l, f in self._loop_face.items() if self._find(f) == self._find(face)]

    def orbit_degree(self, orbit_index: int) -> int:
        return len(self.orbits[orbit_index])

    def face_is_plain_orbit(self, orbit_index: int) -> bool:
        """True when nothing else lives in this orbit's face: no other
        piece's face was merged into it and no loop sits inside.  The outer
        sentinel alone is an empty alias and does not count."""
        root = self._find(orbit_index)
        same = [i for i in self._parent if i != -1 and self._find(i) == root]
        return len(same) == 1 and not self.loops_in_face(root)


# ---------------------------------------------------------------------------
# orientations


@dataclass(frozen=True)
class OrientedDiagram:
    """Diagram plus a direction on every edge and loop.

    ``heads`` lists, per edge, the endpoint the edge flows into.  In strict
    mode orientations pass straight through crossings and singular vertices
    and alternate in/out around markers.  ``abstract`` marks an orientation
    induced from the negative resolution, where the marker alternation rule
    is waived.
    """

    base: Diagram
    heads: tuple[tuple[str, Dart], ...]
    loop_dirs: tuple[tuple[str, int], ...] = ()
    abstract: bool = False

    @cached_property
    def head_map(self) -> dict[str, Dart]:
        return dict(self.heads)

    def flows_in(self, dart: Dart) -> bool:
        nid, p = dart
        e = self.base.node(nid).ports[p]
        return self.head_map[e] == dart

    def validate(self) -> ValidationReport:
        issues = list(self.base.validate().issues)
        if set(self.head_map) != set(self.base.edges):
            issues.append(Issue("bad orientation", "orientation misses edges"))
            return ValidationReport(issues)
        for e, head in self.heads:
            if head not in self.base.edge_ends[e]:
                issues.append(Issue("bad orientation", f"edge {e} head {head} not an endpoint"))
        if dict(self.loop_dirs).keys() != set(self.base.loops):
            issues.append(Issue("bad orientation", "orientation misses loops"))
        for nd in self.base.nodes:
            flags = [self.flows_in((nd.id, p)) for p in range(4)]
            if nd.kind in (CROSSING, SINGULAR):
                if flags[0] == flags[2] or flags[1] == flags[3]:
                    issues.append(Issue("bad orientation", f"no through-flow at {nd.id}"))
            elif not self.abstract:
                if any(flags[p] == flags[(p + 1) % 4] for p in range(4)):
                    issues.append(Issue("bad orientation", f"marker {nd.id} not alternating"))
        return ValidationReport(issues)

    def reversed(self) -> "OrientedDiagram":
        heads = []
        for e, h in self.heads:
            a, b = self.base.edge_ends[e]
            heads.append((e, b if h == a else a))
        return OrientedDiagram(self.base, tuple(heads),
                               tuple((l, 1 - b) for l, b in self.loop_dirs), self.abstract)


class _ParityUF:
    def __init__(self):
        self.parent: dict = {}
        self.parity: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0

    def find(self, x):
        if self.parent[x] == x:
            return x, 0
        root, par = self.find(self.parent[x])
        self.parent[x] = root
        self.parity[x] = (self.parity[x] + par) % 2
        return root, self.parity[x]

    def union(self, a, b, rel: int) -> bool:
        """Relate a and b with parity ``rel``; False on contradiction."""
        self.add(a)
        self.add(b)
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa + pb) % 2 == rel
        self.parent[ra] = rb
        self.parity[ra] = (pa + pb + rel) % 2
        return True


def enumerate_orientations(d: Diagram) -> list[OrientedDiagram]:
    """All strict orientations of ``d``, each exactly once.

    The inflow flags of the four darts at a node are tied together by parity
    constraints, so the answer is always empty or of size ``2**k``.
    """
    uf = _ParityUF()
    for dart in d.darts():
        uf.add(dart)
    ok = True
    for e, ends in d.edge_ends.items():
        ok &= uf.union(ends[0], ends[1], 1)
    for nd in d.nodes:
        if nd.kind in (CROSSING, SINGULAR):
            ok &= uf.union((nd.id, 0), (nd.id, 2), 1)
            ok &= uf.union((nd.id, 1), (nd.id, 3), 1)
        else:
            for p in range(3):
                ok &= uf.union((nd.id, p), (nd.id, p + 1), 1)
    if not ok:
        return []
    roots = sorted({uf.find(dart)[0] for dart in d.darts()})
    out: list[OrientedDiagram] = []
    n_loops = len(d.loops)
    for bits in range(1 << len(roots)):
        assign = {root: (bits >> i) & 1 for i, root in enumerate(roots)}
        heads = []
        for e in d.edges:
            ends = d.edge_ends[e]
            for dart in ends:
                root, par = uf.find(dart)
                if (assign[root] + par) % 2 == 1:  # inflow
                    heads.append((e, dart))
                    break
        for lbits in range(1 << n_loops):
            loop_dirs = tuple((l, (lbits >> i) & 1) for i, l in enumerate(d.loops))
            out.append(OrientedDiagram(d, tuple(heads), loop_dirs))
    return out


# ---------------------------------------------------------------------------
# SMG text format

_ID = re.compile(r"^[A-Za-z0-9_.\-]+$")


def _check_id(tok: str, lineno: int) -> str:
    if not _ID.match(tok):
        raise SMGSyntaxError(f"bad identifier {tok!r}", lineno)
    return tok


def parse_smg(text: str, *, allow_invalid: bool = False):
    """Parse the SMG format; returns a Diagram or, with an orient block,
    an OrientedDiagram."""
    name = None
    nodes: list[Node] = []
    loops: list[str] = []
    anchors: list[tuple[str, Optional[tuple[str, int]]]] = []
    orient_edges: dict[str, Dart] = {}
    orient_loops: dict[str, int] = {}
    saw_orient = False
    ended = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise SMGSyntaxError("content after 'end'", lineno)
        toks = line.split()
        kw = toks[0]
        if kw == "diagram":
            if name is not None or len(toks) != 2:
                raise SMGSyntaxError("bad 'diagram' line", lineno)
            name = _check_id(toks[1], lineno)
        elif kw == "node":
            if name is None:
                raise SMGSyntaxError("'node' before 'diagram'", lineno)
            if len(toks) < 3:
                raise SMGSyntaxError("truncated 'node' line", lineno)
            nid = _check_id(toks[1], lineno)
            kind = toks[2]
            if kind == "X":
                if len(toks) != 7:
                    raise SMGSyntaxError("crossing needs 4 edges", lineno)
                attr, ports = None, toks[3:7]
            elif kind in ("M", "S"):
                if len(toks) != 8:
                    raise SMGSyntaxError(f"{kind}-node needs attr and 4 edges", lineno)
                if toks[3] not in ("0", "1"):
                    raise SMGSemanticError(f"line {lineno}: bad axis/side {toks[3]!r}")
                attr, ports = int(toks[3]), toks[4:8]
            else:
                raise SMGSyntaxError(f"unknown node kind {kind!r}", lineno)
            ports = tuple(_check_id(t, lineno) for t in ports)
            nodes.append(Node(nid, kind, attr, ports))
        elif kw == "loop":
            if len(toks) != 2:
                raise SMGSyntaxError("bad 'loop' line", lineno)
            loops.append(_check_id(toks[1], lineno))
        elif kw == "place":
            if len(toks) != 4 or toks[2] != "in":
                raise SMGSyntaxError("bad 'place' line", lineno)
            pid = _check_id(toks[1], lineno)
            m = re.match(r"^([A-Za-z0-9_.\-]+)\.([0-3])$", toks[3])
            if not m:
                raise SMGSyntaxError("bad 'place' target", lineno)
            anchors.append((pid, (m.group(1), int(m.group(2)))))
        elif kw == "orient":
            saw_orient = True
            if len(toks) == 3 and toks[2] in ("+", "-"):
                orient_loops[_check_id(toks[1], lineno)] = 0 if toks[2] == "+" else 1
                continue
            if len(toks) != 5 or toks[3] != "->":
                raise SMGSyntaxError("bad 'orient' line", lineno)
            e = _check_id(toks[1], lineno)
            m = re.match(r"^([A-Za-z0-9_.\-]+)\.([0-3])$", toks[4])
            if not m:
                raise SMGSyntaxError("bad 'orient' head", lineno)
            orient_edges[e] = (m.group(1), int(m.group(2)))
        elif kw == "end":
            ended = True
        else:
            raise SMGSyntaxError(f"unknown keyword {kw!r}", lineno)

    if name is None:
        raise SMGSyntaxError("missing 'diagram' line", 1)
    if not ended:
        raise SMGSyntaxError("missing 'end'", len(text.splitlines()) or 1)

    d = Diagram(name, tuple(nodes), tuple(loops), tuple(anchors))
    if not allow_invalid:
        report = d.validate()
        if not report.ok:
            raise SMGSemanticError(str(report))
    if not saw_orient:
        return d
    for l in d.loops:
        orient_loops.setdefault(l, 0)
    od = OrientedDiagram(d, tuple(sorted(orient_edges.items())),
                         tuple(sorted(orient_loops.items())))
    if not allow_invalid:
        report = od.validate()
        if not report.ok:
            raise SMGSemanticError(str(report))
    return od


def serialize(d) -> str:
    """Inverse of :func:`parse_smg` up to isomorphism."""
    od = None
    if isinstance(d, OrientedDiagram):
        d, od = d.base, d
    lines = [f"diagram {d.name}"]
    for nd in sorted(d.nodes, key=lambda n: n.id):
        if nd.kind == "X":
            lines.append(f"node {nd.id} X " + " ".join(nd.ports))
        else:
            lines.append(f"node {nd.id} {nd.kind} {nd.attr} " + " ".join(nd.ports))
    for l in d.loops:
        lines.append(f"loop {l}")
    for pid, anchor in d.anchors:
        if anchor is not None:
            lines.append(f"place {pid} in {anchor[0]}.{anchor[1]}")
    if od is not None:
        for e, (n, p) in od.heads:
            tail = [x for x in d.edge_ends[e] if x != (n, p)]
            src = tail[0] if tail else d.edge_ends[e][0]
            lines.append(f"orient {e} {src[0]}.{src[1]} -> {n}.{p}")
        for l, b in od.loop_dirs:
            lines.append(f"orient {l} {'+' if b == 0 else '-'}")
    lines.append("end")
    return "\n".join(lines) + "\n"
