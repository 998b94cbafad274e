import pytest

from smg.catalog import catalog_map, move_catalog
from smg.diagram import enumerate_orientations
from smg.fixtures import fixture
from smg.moves import (
    FORWARD,
    REVERSE,
    MoveSequence,
    SearchBudget,
    StaleSiteError,
    apply_move,
    code_digest,
    find_sites,
    search_equivalence,
    verify_sequence,
)

CAT = catalog_map("unoriented")
NAMES = ["circle", "two_loops", "kink", "hopf", "trefoil", "saddle_sphere",
         "sing_sphere", "fr", "d2m5", "d2m6", "d1m5", "d1m6"]


def test_catalog_counts():
    unor = move_catalog("unoriented")
    assert sum(1 for m in unor if not m.derived) == 17
    assert sum(1 for m in unor if m.derived) == 3
    assert len(move_catalog("oriented")) == 22


def test_catalog_boundary_arities_match():
    for mode in ("unoriented", "oriented"):
        for m in move_catalog(mode):
            for lhs, rhs in m.variants:
                assert lhs.K == rhs.K, m.id
                if m.oriented:
                    assert lhs.boundary_profile() == rhs.boundary_profile(), m.id


def test_o1_sites_on_circle():
    sites = find_sites(fixture("circle"), CAT["O1"], FORWARD)
    assert len(sites) >= 2


def test_o1_reduce_no_sites_on_trefoil():
    assert find_sites(fixture("trefoil"), CAT["O1"], REVERSE) == []


def test_o11_site_on_marker_singular_fixture():
    assert len(find_sites(fixture("d2m5"), CAT["O11"], FORWARD)) >= 1


def test_o1_create_then_reduce_identity():
    d = fixture("circle")
    site = find_sites(d, CAT["O1"], FORWARD)[0]
    d2 = apply_move(d, CAT["O1"], site)
    assert any(
        apply_move(d2, CAT["O1"], s).canonical_code() == d.canonical_code()
        for s in find_sites(d2, CAT["O1"], REVERSE))


def test_o2_across_two_loops():
    d = fixture("two_loops")
    sites = find_sites(d, CAT["O2"], FORWARD)
    assert sites
    d2 = apply_move(d, CAT["O2"], sites[0])
    assert d2.counts == (d.counts[0] + 2, d.counts[1], d.counts[2])


def test_o11_preserves_marker_and_singular_counts():
    d = fixture("d2m5")
    site = find_sites(d, CAT["O11"], FORWARD)[0]
    d2 = apply_move(d, CAT["O11"], site)
    assert d2.counts[1] == d.counts[1]
    assert d2.counts[2] == d.counts[2]


def test_apply_inverse_identity_everywhere():
    for name in NAMES:
        d = fixture(name)
        code = d.canonical_code()
        for m in CAT.values():
            for direction in (FORWARD, REVERSE):
                inv = REVERSE if direction == FORWARD else FORWARD
                for s in find_sites(d, m, direction)[:3]:
                    d2 = apply_move(d, m, s)
                    assert any(
                        apply_move(d2, m, s2).canonical_code() == code
                        for s2 in find_sites(d2, m, inv)), (name, m.id)


def test_stale_site_rejected():
    d = fixture("circle")
    site = find_sites(d, CAT["O1"], FORWARD)[0]
    moved = apply_move(d, CAT["O1"], site)
    other = fixture("trefoil")
    with pytest.raises(StaleSiteError):
        apply_move(other, CAT["O1"], site)


def test_verify_sequence_empty():
    d = fixture("fr")
    assert verify_sequence(d, MoveSequence(()), CAT).canonical_code() == \
        d.canonical_code()


def test_verify_sequence_create_reduce():
    from smg.moves import MoveStep

    d = fixture("circle")
    site = find_sites(d, CAT["O1"], FORWARD)[0]
    d2 = apply_move(d, CAT["O1"], site)
    seq = MoveSequence((
        MoveStep("O1", site.variant, FORWARD, code_digest(d2)),
        MoveStep("O1", site.variant, REVERSE, code_digest(d)),
    ))
    out = verify_sequence(d, seq, CAT)
    assert out.canonical_code() == d.canonical_code()


def test_verify_sequence_stale_step_reports_index():
    from smg.moves import MoveStep

    d = fixture("circle")
    seq = MoveSequence((MoveStep("O1", 0, FORWARD, "0" * 16),))
    with pytest.raises(StaleSiteError, match="stale step 0"):
        verify_sequence(d, seq, CAT)


def test_sequence_serialization_round_trip():
    from smg.moves import MoveStep

    seq = MoveSequence((MoveStep("O1", 1, REVERSE, "ab" * 8),))
    assert MoveSequence.parse(seq.serialize()) == seq


def test_search_self_is_empty():
    d = fixture("fr")
    seq = search_equivalence(d, d, CAT)
    assert seq is not None and len(seq) == 0


def test_search_single_move():
    d = fixture("circle")
    d2 = apply_move(d, CAT["O1"], find_sites(d, CAT["O1"], FORWARD)[0])
    seq = search_equivalence(d, d2, CAT, ["O1"], SearchBudget(3, 10_000))
    assert seq is not None and len(seq) == 1
    assert verify_sequence(d, seq, CAT).canonical_code() == d2.canonical_code()


def test_search_budget_exhaustion_returns_none():
    seq = search_equivalence(fixture("circle"), fixture("trefoil"), CAT,
                             ["O1", "O2", "O3"], SearchBudget(max_depth=0))
    assert seq is None


def test_search_traces_replay():
    d = fixture("two_loops")
    site = find_sites(d, CAT["O2"], FORWARD)[0]
    d2 = apply_move(d, CAT["O2"], site)
    seq = search_equivalence(d, d2, CAT, ["O1", "O2"], SearchBudget(2, 20_000))
    assert seq is not None
    assert verify_sequence(d, seq, CAT).canonical_code() == d2.canonical_code()


def test_oriented_moves_need_oriented_diagram():
    ocat = catalog_map("oriented")
    with pytest.raises(ValueError):
        find_sites(fixture("circle"), ocat["G1"], FORWARD)


def test_oriented_sites_and_validity():
    ocat = catalog_map("oriented")
    d = fixture("hopf")
    od = enumerate_orientations(d)[0]
    found_any = False
    for m in ocat.values():
        for s in find_sites(od, m, FORWARD)[:2]:
            res = apply_move(od, m, s)
            assert res.validate().ok, m.id
            found_any = True
    assert found_any


def test_oriented_matching_respects_direction():
    ocat = catalog_map("oriented")
    d = fixture("circle")
    for od in enumerate_orientations(d):
        sites = find_sites(od, ocat["G1"], FORWARD)
        assert sites  # a kink can always be created on a loop
        out = apply_move(od, ocat["G1"], sites[0])
        assert out.validate().ok
