import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbwalk.errors import (
    DuplicateEdgeError,
    GenerationExhausted,
    InfeasibleProfile,
    MalformedLineError,
    MinDegreeViolation,
    SelfLoopError,
    TooFewVerticesError,
)
from nbwalk.graph import (
    FIXTURES,
    Biregular,
    GnpLike,
    Graph,
    Regular,
    adjacency_matrix,
    classify,
    degree_matrix,
    generate_test_graph,
    load_fixture,
    parse_edge_list,
    serialize_edge_list,
)


def test_diamond_fixture():
    g = load_fixture("diamond")
    assert (g.n, g.m) == (4, 5)
    assert list(g.degrees) == [2, 3, 3, 2]
    assert g.volume == 10
    assert g.edges() == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_load_and_have_min_degree_two(name):
    g = load_fixture(name)
    assert g.degrees.min() >= 2
    assert g.degrees.sum() == 2 * g.m
    A = adjacency_matrix(g)
    assert np.array_equal(A, A.T)
    assert np.array_equal(np.diag(degree_matrix(g)), A.sum(axis=1))


def test_labels_in_first_appearance_order_and_comments():
    g = parse_edge_list("# header\nb c\nc a  # trailing\n\na b\n")
    assert g.labels == ("b", "c", "a")
    assert g.m == 3
    assert g.index_of("a") == 2
    with pytest.raises(KeyError):
        g.index_of("zz")


def test_self_loop_reports_line():
    with pytest.raises(SelfLoopError) as info:
        parse_edge_list("a b\nb c\nc c\nc a\n")
    assert info.value.line == 3


def test_duplicate_edge_either_orientation():
    with pytest.raises(DuplicateEdgeError):
        parse_edge_list("a b\nb c\nc a\nb a\n")


@pytest.mark.parametrize("text", ["a b c\n", "a\n", "a b\nx\n"])
def test_malformed_lines(text):
    with pytest.raises(MalformedLineError):
        parse_edge_list(text)


def test_too_few_vertices():
    with pytest.raises(TooFewVerticesError):
        parse_edge_list("# nothing here\n")


def test_min_degree_violation_names_vertex():
    with pytest.raises(MinDegreeViolation) as info:
        parse_edge_list("a b\nb c\nc a\nc d\n")
    assert info.value.vertex == "d"


def test_graph_input_errors_are_value_errors():
    with pytest.raises(ValueError):
        parse_edge_list("a a\n")


@pytest.mark.parametrize("name", FIXTURES)
def test_round_trip_fixtures(name):
    g = load_fixture(name)
    assert parse_edge_list(serialize_edge_list(g)) == g


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(5, 14))
def test_round_trip_generated(seed, n):
    g = generate_test_graph(GnpLike(n, 0.5), seed)
    again = parse_edge_list(serialize_edge_list(g))
    assert again == g


def test_round_trip_preserves_unusual_label_order():
    # vertex 0 only appears in the last edge line
    g = Graph.from_edges([(1, 2), (2, 3), (3, 1), (0, 1), (0, 2)], 4)
    assert parse_edge_list(serialize_edge_list(g)) == g


@pytest.mark.parametrize(
    "name, text",
    [
        ("k4", "Regular(d=3)"),
        ("petersen", "Regular(d=3)"),
        ("c4", "Regular(d=2)"),
        ("triangle", "Regular(d=2)"),
        ("diamond", "General"),
        ("bowtie", "General"),
        ("k23", "Biregular(c=2, d=3, r=3, s=2)"),
        ("k34", "Biregular(c=3, d=4, r=4, s=3)"),
    ],
)
def test_classify_fixtures(name, text):
    assert str(classify(load_fixture(name))) == text


def test_regular_takes_precedence_over_biregular():
    p = classify(load_fixture("c4"))
    assert p.kind == "regular" and p.bipartite


def test_bipartite_with_two_degrees_inside_a_side_is_general():
    # path-like bipartite graph where both degrees occur on the same side
    g = Graph.from_edges(
        [(0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (2, 5), (1, 5)], 6
    )
    p = classify(g)
    assert p.bipartite and p.kind == "general"


@pytest.mark.parametrize(
    "profile", [Regular(3, 8), Regular(4, 9), Regular(5, 10), Biregular(2, 3, 6, 4), Biregular(3, 4, 8, 6)]
)
def test_generated_degrees_are_exact(profile):
    g = generate_test_graph(profile, 3)
    p = classify(g)
    if isinstance(profile, Regular):
        assert p.kind == "regular" and p.d == profile.d and g.n == profile.n
    else:
        assert (p.kind, p.c, p.d, p.r, p.s) == ("biregular", profile.c, profile.d, profile.r, profile.s)
        # degree-c vertices come first
        assert all(g.degrees[:profile.r] == profile.c)


def test_generation_is_deterministic():
    a = generate_test_graph(Regular(3, 12), 99)
    b = generate_test_graph(Regular(3, 12), 99)
    c = generate_test_graph(Regular(3, 12), 100)
    assert a == b
    assert a != c


def test_connected_flag():
    g = generate_test_graph(Regular(2, 9), 4, connected=True)
    assert g.is_connected() and g.m == 9


@pytest.mark.parametrize(
    "profile",
    [Regular(3, 7), Regular(1, 6), Regular(5, 5), Biregular(2, 3, 5, 4), Biregular(1, 2, 4, 2), GnpLike(2, 0.5), GnpLike(6, 0.0)],
)
def test_infeasible_profiles(profile):
    with pytest.raises(InfeasibleProfile):
        generate_test_graph(profile, 0)


def test_generation_exhausted():
    with pytest.raises(GenerationExhausted):
        generate_test_graph(GnpLike(12, 0.05), 0, max_attempts=5)


def test_two_coloring():
    assert load_fixture("k23").two_coloring() is not None
    assert load_fixture("diamond").two_coloring() is None
