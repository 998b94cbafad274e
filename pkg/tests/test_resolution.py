from smg.diagram import enumerate_orientations, parse_smg
from smg.fixtures import fixture
from smg.moves import verify_sequence
from smg.catalog import catalog_map
from smg.resolution import (
    NEGATIVE,
    POSITIVE,
    Budget,
    is_admissible,
    is_trivial_unlink,
    linking_matrix,
    reidemeister_simplify,
    resolve,
)


def test_resolve_circle_both_signs():
    d = fixture("circle")
    for sign in (POSITIVE, NEGATIVE):
        r = resolve(d, sign)
        assert r.component_count() == 1
        assert r.diagram.counts == (0, 0, 0)


def test_resolve_one_marker_kinked_circle():
    r_pos = resolve(fixture("saddle_sphere"), POSITIVE)
    r_neg = resolve(fixture("saddle_sphere"), NEGATIVE)
    assert r_pos.component_count() == 1
    assert r_neg.component_count() == 2


def test_resolve_fr_both_trivial():
    d = fixture("fr")
    for sign in (POSITIVE, NEGATIVE):
        r = resolve(d, sign)
        assert r.diagram.is_classical()
        assert is_trivial_unlink(r.diagram).value == "yes"


def test_resolve_keeps_crossings_verbatim():
    d = fixture("trefoil")
    r = resolve(d, POSITIVE)
    assert r.diagram.canonical_code() == d.canonical_code()


def test_simplify_kink_single_step():
    simp, trace = reidemeister_simplify(fixture("kink"))
    assert simp.counts[0] == 0
    assert len(trace) == 1


def test_simplify_crossingless_identity():
    d = fixture("two_loops")
    simp, trace = reidemeister_simplify(d)
    assert simp.canonical_code() == d.canonical_code()
    assert len(trace) == 0


R2_UNKNOT = """\
diagram r2u
node u X mB a1 b1 mA
node v X mB mA b2 a2
end
"""


def test_simplify_r2_pair():
    d = parse_smg(R2_UNKNOT.replace("a1", "o1").replace("b1", "o1")
                  .replace("a2", "o2").replace("b2", "o2"))
    assert d.validate().ok
    simp, trace = reidemeister_simplify(d)
    assert simp.counts[0] == 0
    assert len(trace) >= 1


def test_simplify_trace_replays():
    d = fixture("kink")
    simp, trace = reidemeister_simplify(d)
    cat = catalog_map("unoriented")
    final = verify_sequence(d, trace, cat)
    assert final.canonical_code() == simp.canonical_code()


def test_trivial_three_loops():
    t = is_trivial_unlink(fixture("three_loops"))
    assert t.value == "yes" and t.components == 3


def test_trivial_hopf_no_by_linking():
    t = is_trivial_unlink(fixture("hopf"))
    assert t.value == "no"
    assert "linking" in t.obstruction


def test_trivial_trefoil_no_by_coloring():
    t = is_trivial_unlink(fixture("trefoil"))
    assert t.value == "no"
    assert "fox3" in t.obstruction


def test_trivial_kinked_unknot_yes():
    t = is_trivial_unlink(fixture("kink"), Budget(extra_crossings=1))
    assert t.value == "yes"
    assert t.trace is not None and len(t.trace) == 1


def test_trivial_never_contradicts_across_budgets():
    for name in ("kink", "hopf", "trefoil"):
        answers = set()
        for cap in (1, 100, 10000):
            t = is_trivial_unlink(fixture(name), Budget(max_states=cap))
            if t.value != "unknown":
                answers.add(t.value)
        assert len(answers) <= 1, name


def test_admissible_fixture_verdicts():
    for name in ("circle", "sing_sphere", "fr", "saddle_sphere",
                 "d2m5", "d2m6", "d1m5", "d1m6"):
        assert is_admissible(fixture(name))["verdict"] == "yes", name
    assert is_admissible(fixture("hopf"))["verdict"] == "no"


def test_linking_matrix_examples():
    unlink = fixture("two_loops")
    od = enumerate_orientations(unlink)[0]
    assert linking_matrix(od) == [[0, 0], [0, 0]]

    hopf = fixture("hopf")
    od = enumerate_orientations(hopf)[0]
    lk = linking_matrix(od)
    assert abs(lk[0][1]) == 1 and lk[0][0] == lk[1][1] == 0
    assert lk[0][1] == lk[1][0]


def test_linking_matrix_d2m5_transform():
    from smg.transforms import semi_transform

    t = semi_transform(fixture("d2m5"), "M5")
    od = enumerate_orientations(t)[0]
    lk = linking_matrix(od)
    entries = [abs(lk[i][j]) for i in range(len(lk)) for j in range(i + 1, len(lk))]
    assert 1 in entries


def test_certificate_serialization():
    t = is_trivial_unlink(fixture("kink"))
    text = t.serialize()
    assert "answer yes" in text and "trace" in text


def test_admissibility_certificates_replay():
    d = fixture("fr")
    res = is_admissible(d)
    cat = catalog_map("unoriented")
    for sign in (POSITIVE, NEGATIVE):
        cert = res[sign]
        assert cert.value == "yes"
        start = resolve(d, sign).diagram
        final = verify_sequence(start, cert.trace, cat)
        assert final.counts[0] == 0
