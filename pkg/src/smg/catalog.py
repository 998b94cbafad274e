"""The move catalogs.

Unoriented moves are read from ``data/moves_unoriented.smg``; each variant is
complemented by its mirror image (reflection of the disk), which is how the
printed pictures are usually read.  The oriented catalog is generated from
the unoriented fragments by enumerating coherent strand directions and
selecting boundary profiles, one move id per selected orientation class.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .diagram import CROSSING, MARKER, SINGULAR, Node
from .moves import MoveSpec, Pattern, parse_pattern

#: order of the 17 core unoriented moves plus the 3 flagged-derived ones
UNORIENTED_IDS = [
    "O1", "O2", "O3", "O4", "O4p", "O5", "O6", "O6p", "O7", "O8",
    "O9", "O9p", "O10", "O11", "O11p", "O12", "O12p",
    "D_O10p", "D_O9pp", "D_O9ppp",
]


def mirror_pattern(pat: Pattern) -> Pattern:
    """Reflect the fragment: port orders reverse, leg numbering reverses.

    Over/under is preserved (the reflection is of the diagram plane), and so
    is a singular side, but a marker's smoothing pairs trade places, so its
    axis flips.
    """
    rho = (0, 3, 2, 1)
    nodes = []
    for nd in pat.nodes:
        ports = tuple(nd.ports[rho[p]] for p in range(4))
        attr = nd.attr
        if nd.kind == MARKER:
            attr = (attr + 1) % 2
        nodes.append(Node(nd.id, nd.kind, attr, ports))
    legs = tuple(reversed(pat.legs))
    K = len(legs)
    heads = []
    for e, h in pat.heads:
        if h[0] == "leg":
            heads.append((e, ("leg", K + 1 - h[1])))
        else:
            heads.append((e, (h[0], rho[h[1]])))
    return Pattern(tuple(nodes), legs, tuple(heads))


def _parse_catalog(text: str):
    moves = []
    cur = None
    section = None
    buf: dict[str, list[str]] = {}
    variants: list[tuple[Pattern, Pattern]] = []

    def close_variant():
        if buf:
            lhs = parse_pattern("\n".join(buf.get("lhs", [])))
            rhs = parse_pattern("\n".join(buf.get("rhs", [])))
            variants.append((lhs, rhs))
            buf.clear()

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "move":
            cur = {"id": toks[1], "derived": "derived" in toks[2:],
                   "deltas": (0, 0, 0, 0)}
            variants = []
        elif toks[0] == "deltas":
            cur["deltas"] = tuple(int(t) for t in toks[1:5])
        elif toks[0] == "variant":
            close_variant()
            section = None
        elif toks[0] == "endvariant":
            close_variant()
        elif toks[0] == "endmove":
            close_variant()
            moves.append((cur, list(variants)))
            cur = None
        elif toks[0] in ("lhs", "rhs"):
            section = toks[0]
            buf.setdefault(section, [])
        else:
            buf[section].append(line)
    return moves


def _with_mirrors(variants):
    out = list(variants)
    seen = {(v[0].nodes, v[0].legs, v[1].nodes, v[1].legs) for v in out}
    for lhs, rhs in variants:
        ml, mr = mirror_pattern(lhs), mirror_pattern(rhs)
        key = (ml.nodes, ml.legs, mr.nodes, mr.legs)
        if key not in seen:
            seen.add(key)
            out.append((ml, mr))
    return tuple(out)


@lru_cache(maxsize=None)
def _unoriented() -> tuple[MoveSpec, ...]:
    text = resources.files("smg.data").joinpath("moves_unoriented.smg").read_text()
    specs = []
    for meta, variants in _parse_catalog(text):
        specs.append(MoveSpec(meta["id"], _with_mirrors(variants),
                              derived=meta["derived"], oriented=False,
                              deltas=meta["deltas"]))
    order = {mid: i for i, mid in enumerate(UNORIENTED_IDS)}
    specs.sort(key=lambda m: order[m.id])
    return tuple(specs)


# ---------------------------------------------------------------------------
# oriented catalog


def orient_pattern(pat: Pattern) -> list[Pattern]:
    """All coherent strand orientations of a fragment.

    Crossings and singular vertices carry flow straight through; markers
    alternate in/out around the rotation; boundary legs are free.
    """
    from .diagram import _ParityUF

    uf = _ParityUF()
    darts = [(nd.id, p) for nd in pat.nodes for p in range(4)]
    darts += [("#", t) for t in range(pat.K)]
    for d in darts:
        uf.add(d)
    ok = True
    for e, ends in pat.edge_ends.items():
        ok &= uf.union(ends[0], ends[1], 1)
    for nd in pat.nodes:
        if nd.kind in (CROSSING, SINGULAR):
            ok &= uf.union((nd.id, 0), (nd.id, 2), 1)
            ok &= uf.union((nd.id, 1), (nd.id, 3), 1)
        else:
            for p in range(3):
                ok &= uf.union((nd.id, p), (nd.id, p + 1), 1)
    if not ok:
        return []
    roots = sorted({uf.find(d)[0] for d in darts})
    out = []
    for bits in range(1 << len(roots)):
        assign = {root: (bits >> i) & 1 for i, root in enumerate(roots)}
        heads = []
        for e, ends in sorted(pat.edge_ends.items()):
            for dart in ends:
                root, par = uf.find(dart)
                if (assign[root] + par) % 2 == 1:  # this end takes the inflow
                    if dart[0] == "#":
                        heads.append((e, ("leg", pat.leg_of_hub_dart(dart))))
                    else:
                        heads.append((e, dart))
                    break
        out.append(Pattern(pat.nodes, pat.legs, tuple(heads)))
    return out


def _oriented_pairs(lhs: Pattern, rhs: Pattern):
    """All (oriented lhs, oriented rhs) pairs with equal boundary profiles."""
    pairs = []
    rhs_by_profile: dict[tuple, list[Pattern]] = {}
    for r in orient_pattern(rhs):
        rhs_by_profile.setdefault(r.boundary_profile(), []).append(r)
    for l in orient_pattern(lhs):
        for r in rhs_by_profile.get(l.boundary_profile(), []):
            pairs.append((l, r))
    return pairs


#: oriented move table: id -> (base unoriented id, variant index, pair index)
ORIENTED_TABLE = [
    ("G1", "O1", 0, 0),
    ("G1p", "O1", 1, 0),
    ("G2", "O2", 0, 0),
    ("G3", "O3", 0, 0),
    ("G4", "O4", 0, 0),
    ("G4p", "O4p", 0, 0),
    ("G5", "O5", 0, 0),
    ("G6", "O6", 0, 0),
    ("G6p", "O6p", 0, 0),
    ("G7", "O7", 0, 0),
    ("G8", "O8", 0, 0),
    ("G9", "O9", 0, 0),
    ("G9p", "O9p", 0, 0),
    ("G10", "O10", 0, 0),
    ("G11a", "O11", 0, 0),
    ("G11b", "O11", 0, 1),
    ("G11c", "O11p", 0, 0),
    ("G11d", "O11p", 0, 1),
    ("G12a", "O12", 0, 0),
    ("G12b", "O12", 0, 1),
    ("G12c", "O12p", 0, 0),
    ("G12d", "O12p", 0, 1),
]


@lru_cache(maxsize=None)
def _oriented() -> tuple[MoveSpec, ...]:
    base = {m.id: m for m in _unoriented()}
    specs = []
    for gid, mid, variant, pair_index in ORIENTED_TABLE:
        lhs, rhs = base[mid].variants[variant]
        pairs = _oriented_pairs(lhs, rhs)
        if pair_index >= len(pairs):
            raise RuntimeError(f"{gid}: only {len(pairs)} oriented pairs of {mid}")
        ol, orr = pairs[pair_index]
        # mirrors of the oriented pair widen matching exactly as for the
        # unoriented catalog
        variants = _with_mirrors([(ol, orr)])
        specs.append(MoveSpec(gid, variants, derived=False, oriented=True,
                              deltas=base[mid].deltas))
    return tuple(specs)


def move_catalog(mode: str = "unoriented") -> list[MoveSpec]:
    """The move catalog: 17 core + 3 derived unoriented moves, or the 22
    oriented moves."""
    mode = mode.lower()
    if mode in ("unoriented", "u"):
        return list(_unoriented())
    if mode in ("oriented", "o"):
        return list(_oriented())
    raise ValueError(f"unknown catalog mode {mode!r}")


def catalog_map(mode: str = "unoriented") -> dict[str, MoveSpec]:
    return {m.id: m for m in move_catalog(mode)}
