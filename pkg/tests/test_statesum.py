import itertools

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from tvkit.cyclotomic import QContext
from tvkit.statesum import (EDGES, FACE_EDGES, EnumerationBudgetExceeded, StateSumOptions, TriangulationError,
                            edge_classes, enumerate_colourings, even_filter, pachner_1_4, pachner_2_3,
                            parse_triangulation, read_triangulation, state_sum)
from tvkit.systems import build_tv, epsilon_system, gamma_system, global_flip, homologically_trivial, trivial_system

TOL = mpmath.mpf(10) ** -40
FIXTURE_NAMES = ["s3_1tet", "s3_2tet", "s3_3tet", "s3_4tet", "l41_1tet", "l41_4tet", "l41_5tet",
                 "l52_1tet", "l52_4tet", "l52_5tet"]
# fixtures of one manifold, each obtained from the previous ones by Pachner moves
MANIFOLDS = {
    "S3": ["s3_1tet", "s3_2tet", "s3_3tet", "s3_4tet"],
    "L(4,1)": ["l41_1tet", "l41_4tet", "l41_5tet"],
    "L(5,2)": ["l52_1tet", "l52_4tet", "l52_5tet"],
}


@pytest.fixture(scope="module")
def tris():
    from conftest import FIXTURES
    return {name: read_triangulation(FIXTURES / f"{name}.tri") for name in FIXTURE_NAMES}


@pytest.fixture(scope="module")
def tv7():
    return build_tv(QContext(7, 1))


def test_face_edges_match_6j_faces():
    # faces opposite vertices 3, 0, 2, 1 carry the triples (i,j,k), (k,l,m), (m,n,i), (j,l,n)
    names = "ijklmn"
    faces = {k: {names[e] for e in FACE_EDGES[k]} for k in range(4)}
    assert faces[3] == set("ijk") and faces[0] == set("klm")
    assert faces[1] == set("jln") and faces[2] == set("mni")
    assert EDGES[0] == (0, 1) and EDGES[3] == (2, 3)  # i and l are opposite


def test_s3_2tet_classes(tris):
    table = edge_classes(tris["s3_2tet"])
    assert (table.vertex_count, table.edge_count) == (4, 6)
    for name, tri in tris.items():
        table = edge_classes(tri)
        assert table.vertex_count - table.edge_count + 2 * tri.tets - tri.tets == 0


def test_text_round_trip(tris):
    for tri in tris.values():
        back = parse_triangulation(tri.to_text())
        assert back.gluings == tri.gluings


@pytest.mark.parametrize("text,message", [
    ("", "empty"),
    ("tet 0: 0/0123 0/0123 0/0123 0/0123", "expected 'tets"),
    ("tets 1\ntet 0: 0/0123 0/0123 0/0123", "4 face entries"),
    ("tets 1\ntet 0: 0/1023 0/1023 0/0132 0/01x2", "bad gluing"),
    ("tets 1\ntet 0: 0/1023 0/1023 0/0132 0/0112", "not a permutation"),
    ("tets 2\ntet 0: 1/0123 1/0123 1/0123 1/0123", "no gluing line"),
    ("tets 2\ntet 0: 1/0123 1/0123 1/0123 1/0123\ntet 1: 0/0123 0/0123 0/0123 0/1023", "involution"),
    ("tets 1\ntet 0: 0/0123 0/0123 0/0123 0/0123", "itself"),
    ("tets 1\ntet 0: 0/1023 0/1023 0/0132 0/0132\ntet 0: 0/1023 0/1023 0/0132 0/0132", "twice"),
])
def test_parse_errors(text, message):
    with pytest.raises(TriangulationError, match=message):
        parse_triangulation(text)


def test_syntax_error_reports_line():
    with pytest.raises(TriangulationError) as err:
        parse_triangulation("# c\ntets 1\n\ntet zero: 0/1023")
    assert err.value.line == 4 and "line 4" in str(err.value)


def test_singular_gluings_rejected():
    # a reversed edge identification and a non-manifold vertex link
    with pytest.raises(TriangulationError, match="reversed"):
        parse_triangulation("tets 1\ntet 0: 0/1023 0/1023 0/0231 0/0312")
    with pytest.raises(TriangulationError, match="Euler"):
        parse_triangulation("tets 1\ntet 0: 0/1203 0/2013 0/0231 0/0312")


def _brute_force_count(tri, sys, colours):
    table = edge_classes(tri)
    count = 0
    for col in itertools.product(colours, repeat=table.edge_count):
        ok = all(sys.triple_ok(*(col[table.edge_class[t][e]] for e in FACE_EDGES[f]))
                 for t in range(tri.tets) for f in range(4))
        count += ok
    return count


@pytest.mark.parametrize("name", ["s3_1tet", "s3_2tet", "l41_4tet", "l52_1tet"])
def test_colouring_count_matches_brute_force(tris, tv7, name):
    tri = tris[name]
    for sys in (epsilon_system(), gamma_system(), trivial_system()):
        assert len(list(enumerate_colourings(tri, sys))) == _brute_force_count(tri, sys, sys.colours)
    if edge_classes(tri).edge_count <= 6:
        assert len(list(enumerate_colourings(tri, tv7))) == _brute_force_count(tri, tv7, tv7.colours)
    even = list(enumerate_colourings(tri, tv7, colour_filter=even_filter()))
    assert len(even) == _brute_force_count(tri, tv7, [0, 2, 4])
    assert all(c % 2 == 0 for col in even for c in col)


def test_trivial_system_gives_one(tris):
    for tri in tris.values():
        assert len(list(enumerate_colourings(tri, trivial_system()))) == 1
        assert state_sum(tri, trivial_system()) == 1


SYSTEMS = {
    "epsilon": lambda: epsilon_system(1),
    "epsilon:-1": lambda: epsilon_system(-1),
    "gamma:1": lambda: gamma_system(1),
    "gamma:2": lambda: gamma_system(2),
    "gamma:3": lambda: gamma_system(3),
    "tv:5": lambda: build_tv(QContext(5, 2)),
}


@pytest.mark.parametrize("system", sorted(SYSTEMS))
def test_pachner_invariance(tris, system):
    sys = SYSTEMS[system]()
    for names in MANIFOLDS.values():
        values = [state_sum(tris[n], sys) for n in names]
        for v in values[1:]:
            assert abs(v - values[0]) < TOL


def test_pachner_invariance_tv7(tris, tv7):
    for names in MANIFOLDS.values():
        values = [state_sum(tris[n], tv7) for n in names]
        assert all(abs(v - values[0]) < TOL for v in values)


def test_s3_value_is_inverse_of_global_dimension(tris):
    for sys in (epsilon_system(), gamma_system(2)):
        n = sum(w ** 2 for w in sys.weights)
        for name in MANIFOLDS["S3"]:
            assert abs(state_sum(tris[name], sys) - 1 / n) < TOL


def test_even_filter_matches_th_system(tris, tv7):
    th = homologically_trivial(tv7)
    for tri in tris.values():
        even = state_sum(tri, tv7, StateSumOptions(colour_filter=even_filter()))
        assert abs(even - state_sum(tri, th)) < TOL
        assert abs(even - state_sum(tri, gamma_system(1))) < TOL


def test_sign_flip_changes_nothing(tris):
    flipped_tv = build_tv(QContext(7, 3), flip=True)
    plain_tv = build_tv(QContext(7, 3))
    for tri in (tris["s3_2tet"], tris["l41_4tet"], tris["l52_1tet"]):
        assert abs(state_sum(tri, flipped_tv) - state_sum(tri, plain_tv)) < TOL
        g = gamma_system(3)
        assert abs(state_sum(tri, global_flip(g)) - state_sum(tri, g)) < TOL


def test_alternative_conventions_fail_the_one_four_arbiter(tris):
    a, b = tris["s3_1tet"], tris["s3_4tet"]
    g = gamma_system(1)
    assert abs(state_sum(a, g) - state_sum(b, g)) < TOL
    for opts in (StateSumOptions(normalization="linear"), StateSumOptions(edge_exponent=2)):
        assert abs(state_sum(a, g, opts) - state_sum(b, g, opts)) > mpmath.mpf("0.01")


def test_threads_are_deterministic(tris):
    tri = tris["l52_4tet"]
    sys = gamma_system(2)
    one = state_sum(tri, sys, StateSumOptions(threads=1))
    assert state_sum(tri, sys, StateSumOptions(threads=2)) == one
    assert state_sum(tri, sys, StateSumOptions(threads=2)) == state_sum(tri, sys, StateSumOptions(threads=2))


def test_budget_is_enforced(tris, tv7):
    with pytest.raises(EnumerationBudgetExceeded):
        state_sum(tris["s3_3tet"], tv7, StateSumOptions(cap=100))
    with pytest.raises(EnumerationBudgetExceeded):
        list(enumerate_colourings(tris["s3_3tet"], tv7, cap=100))


def test_bad_options():
    tri = parse_triangulation("tets 1\ntet 0: 0/1023 0/1023 0/0132 0/0132")
    with pytest.raises(ValueError):
        state_sum(tri, gamma_system(), StateSumOptions(normalization="cubes"))
    with pytest.raises(ValueError):
        state_sum(tri, gamma_system(), StateSumOptions(edge_exponent=3))


def test_moves_change_counts_as_expected(tris):
    tri = tris["s3_2tet"]
    t3 = pachner_2_3(tri, 0, 0)
    t4 = pachner_1_4(tri, 1)
    base = edge_classes(tri)
    assert t3.tets == 3 and edge_classes(t3).edge_count == base.edge_count + 1
    assert t4.tets == 5 and edge_classes(t4).vertex_count == base.vertex_count + 1
    assert edge_classes(t4).edge_count == base.edge_count + 4
    with pytest.raises(TriangulationError):
        pachner_2_3(tris["s3_1tet"], 0, 0)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 50), st.integers(0, 3)), min_size=1, max_size=3),
       st.sampled_from(["s3_2tet", "l41_1tet", "l52_1tet"]))
def test_random_move_sequences_preserve_invariants(moves, start):
    from conftest import FIXTURES
    tri = read_triangulation(FIXTURES / f"{start}.tri")
    sys = epsilon_system(-1)
    ref = state_sum(tri, sys)
    for one_four, t, f in moves:
        t %= tri.tets
        if one_four:
            tri = pachner_1_4(tri, t)
        elif tri.gluings[t][f][0] != t:
            tri = pachner_2_3(tri, t, f)
        tri = parse_triangulation(tri.to_text())
    assert abs(state_sum(tri, sys) - ref) < TOL
