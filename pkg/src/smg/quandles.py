"""Finite quandles and the coloring-count invariant.

A quandle table is 1-indexed: ``q[i][j] = i * j``.  Colorings assign quandle
elements to the edges and loops of a diagram subject to the local conditions:
the over-strand passes through a crossing unchanged while the under-strand
acts by ``* y`` (or its column inverse against the orientation), all four
ends of a marker share one color, and the two strands of a singular vertex
keep their colors and must fix each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional

from .diagram import CROSSING, MARKER, SINGULAR, Diagram, OrientedDiagram


@dataclass(frozen=True)
class QuandleTable:
    table: tuple[tuple[int, ...], ...]   # 1-indexed values

    @property
    def n(self) -> int:
        return len(self.table)

    def op(self, x: int, y: int) -> int:
        return self.table[x - 1][y - 1]

    @cached_property
    def inv(self) -> tuple[tuple[int, ...], ...]:
        """Column inverses: ``inv[x][y] = z`` with ``z * y = x``."""
        n = self.n
        out = [[0] * n for _ in range(n)]
        for z in range(1, n + 1):
            for y in range(1, n + 1):
                out[self.op(z, y) - 1][y - 1] = z
        return tuple(tuple(r) for r in out)

    def op_inv(self, x: int, y: int) -> int:
        return self.inv[x - 1][y - 1]

    def is_involutory(self) -> bool:
        return all(self.op(self.op(x, y), y) == x
                   for x in range(1, self.n + 1) for y in range(1, self.n + 1))


def check_quandle(raw: Iterable[Iterable[int]]) -> list[str]:
    """Return a list of axiom violations, each with a witness; empty iff the
    table is a quandle."""
    table = [list(r) for r in raw]
    n = len(table)
    issues = []
    if any(len(r) != n for r in table):
        raise ValueError("table is not square")
    for r in table:
        for v in r:
            if not 1 <= v <= n:
                raise ValueError(f"entry {v} out of range 1..{n}")
    for a in range(1, n + 1):
        if table[a - 1][a - 1] != a:
            issues.append(f"idempotency fails at {a}")
    for y in range(n):
        col = [table[x][y] for x in range(n)]
        if len(set(col)) != n:
            issues.append(f"right invertibility fails in column {y + 1}")
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            for c in range(1, n + 1):
                lhs = table[table[a - 1][b - 1] - 1][c - 1]
                rhs = table[table[a - 1][c - 1] - 1][table[b - 1][c - 1] - 1]
                if lhs != rhs:
                    issues.append(f"self-distributivity fails at ({a},{b},{c})")
                    return issues
    return issues


def quandle_from_rows(rows: Iterable[Iterable[int]]) -> QuandleTable:
    issues = check_quandle(rows)
    if issues:
        raise ValueError("; ".join(issues))
    return QuandleTable(tuple(tuple(r) for r in rows))


def parse_quandle(text: str) -> QuandleTable:
    """Quandle file: first line n, then n rows of n 1-indexed entries."""
    toks = text.split()
    n = int(toks[0])
    vals = [int(t) for t in toks[1:]]
    if len(vals) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(vals)}")
    rows = [vals[i * n:(i + 1) * n] for i in range(n)]
    return quandle_from_rows(rows)


def serialize_quandle(q: QuandleTable) -> str:
    lines = [str(q.n)]
    for r in q.table:
        lines.append(" ".join(map(str, r)))
    return "\n".join(lines) + "\n"


def dihedral_quandle(n: int) -> QuandleTable:
    """x * y = 2y - x mod n (1-indexed table)."""
    rows = [[((2 * y - x) % n) + 1 for y in range(n)] for x in range(n)]
    return quandle_from_rows(rows)


def trivial_quandle(n: int) -> QuandleTable:
    return quandle_from_rows([[x + 1] * n for x in range(n)])


def conjugation_quandle(mult: list[list[int]]) -> QuandleTable:
    """Conjugation quandle of a group given by a 0-indexed multiplication
    table: x * y = y^-1 x y, returned 1-indexed."""
    n = len(mult)
    inv = [0] * n
    identity = next(e for e in range(n) if all(mult[e][x] == x for x in range(n)))
    for x in range(n):
        inv[x] = next(y for y in range(n) if mult[x][y] == identity)
    rows = [[mult[mult[inv[y]][x]][y] + 1 for y in range(n)] for x in range(n)]
    return quandle_from_rows(rows)


#: the four-element involutory quandle of the headline coloring count
FOUR_QUANDLE = QuandleTable((
    (1, 1, 2, 2),
    (2, 2, 1, 1),
    (4, 4, 3, 3),
    (3, 3, 4, 4),
))


@lru_cache(maxsize=None)
def small_quandles(max_order: int = 4) -> tuple[QuandleTable, ...]:
    """All quandles of order <= max_order up to isomorphism."""
    found: list[QuandleTable] = []
    for n in range(1, max_order + 1):
        perms = list(itertools.permutations(range(1, n + 1)))
        # each column is a permutation fixing its own index
        col_opts = []
        for y in range(n):
            col_opts.append([p for p in perms if p[y] == y + 1])
        seen: set = set()
        for cols in itertools.product(*col_opts):
            table = tuple(tuple(cols[y][x] for y in range(n)) for x in range(n))
            if table in seen:
                continue
            if check_quandle(table):
                continue
            # orbit under relabeling
            orbit = set()
            for p in perms:
                relab = tuple(
                    tuple(p[table[p.index(x + 1)][p.index(y + 1)] - 1]
                          for y in range(n))
                    for x in range(n))
                orbit.add(relab)
            if not orbit & seen:
                found.append(QuandleTable(table))
            seen |= orbit
    return tuple(found)


# ---------------------------------------------------------------------------
# colorings


class _UF:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def colorings(d: Diagram, q: QuandleTable,
              orientation: Optional[OrientedDiagram] = None) -> list[dict]:
    """All quandle colorings of the diagram's edges and loops.

    Orientation is required unless the quandle is involutory; with an
    involutory quandle the under-strand relation is direction-free.
    """
    involutory = q.is_involutory()
    if orientation is None and not involutory:
        raise ValueError("a non-involutory quandle needs an orientation")

    uf = _UF()
    for e in d.edges:
        uf.add(e)
    for l in d.loops:
        uf.add(l)
    # forced equalities
    for nd in d.nodes:
        if nd.kind == MARKER:
            for p in range(3):
                uf.union(nd.ports[p], nd.ports[p + 1])
        elif nd.kind == SINGULAR:
            uf.union(nd.ports[0], nd.ports[2])
            uf.union(nd.ports[1], nd.ports[3])
        else:
            uf.union(nd.ports[1], nd.ports[3])  # over-strand runs through

    constraints = []  # ("conj", out, inn, over, sign) | ("fix", x, y)
    for nd in d.nodes:
        if nd.kind == CROSSING:
            over = uf.find(nd.ports[1])
            if orientation is not None:
                pu = next(p for p in (0, 2) if orientation.flows_in((nd.id, p)))
                po = next(p for p in (1, 3) if orientation.flows_in((nd.id, p)))
                sign = 1 if po == (pu + 1) % 4 else -1
                inn = uf.find(nd.ports[pu])
                out = uf.find(nd.ports[(pu + 2) % 4])
            else:
                sign = 1
                inn = uf.find(nd.ports[0])
                out = uf.find(nd.ports[2])
            constraints.append(("conj", out, inn, over, sign))
        elif nd.kind == SINGULAR:
            x = uf.find(nd.ports[0])
            y = uf.find(nd.ports[1])
            constraints.append(("fix", x, y))

    classes = sorted({uf.find(v) for v in list(d.edges) + list(d.loops)})
    # index constraints by the last class they mention in assignment order
    order = {c: i for i, c in enumerate(classes)}
    ready_at: dict[int, list] = {i: [] for i in range(len(classes))}
    for con in constraints:
        vars_ = con[1:4] if con[0] == "conj" else con[1:3]
        last = max(order[v] for v in vars_)
        ready_at[last].append(con)

    out: list[dict] = []
    assign: dict[str, int] = {}

    def ok(con) -> bool:
        if con[0] == "conj":
            _, o, i_, y, sign = con
            if sign > 0:
                return assign[o] == q.op(assign[i_], assign[y])
            return assign[o] == q.op_inv(assign[i_], assign[y])
        _, x, y = con
        return q.op(assign[x], assign[y]) == assign[x] and \
            q.op(assign[y], assign[x]) == assign[y]

    def backtrack(i: int):
        if i == len(classes):
            color = {}
            for v in list(d.edges) + list(d.loops):
                color[v] = assign[uf.find(v)]
            out.append(color)
            return
        c = classes[i]
        for val in range(1, q.n + 1):
            assign[c] = val
            if all(ok(con) for con in ready_at[i]):
                backtrack(i + 1)
        del assign[c]

    backtrack(0)
    return out


def coloring_count(d: Diagram, q: QuandleTable,
                   orientation: Optional[OrientedDiagram] = None) -> int:
    return len(colorings(d, q, orientation))
