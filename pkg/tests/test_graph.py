import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from containerlab import caps
from containerlab.errors import InvalidParameter, NotC4Free, TooLarge, UnsupportedFieldOrder
from containerlab.graph import (
    SUPPORTED_Q,
    Graph,
    bipartite_c4_free_bound,
    c4_free_edge_bound,
    cherry_count,
    complete_graph,
    cycle_graph,
    degree_square_audit,
    furedi_audit,
    greedy_c4_free_subgraph,
    has_c4_subgraph,
    host_c4s,
    is_c4_free,
    max_c4_free_subgraph_exact,
    min_degree_ordering,
    path_graph,
    petersen_graph,
    polarity_graph,
    proper_square,
    random_bipartite_graph,
    random_graph,
    split_by_prefix,
    star_graph,
)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])


def brute_max_c4_free(g):
    edges = g.edges()
    for k in range(len(edges), -1, -1):
        for sub in itertools.combinations(edges, k):
            if is_c4_free(Graph.from_edges(g.n, sub)):
                return k
    return 0


# ---------------------------------------------------------------- representation

def test_graph_rejects_loops_and_asymmetry():
    with pytest.raises(InvalidParameter):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(InvalidParameter):
        Graph(2, (0b10, 0))


def test_graph_cap(monkeypatch):
    monkeypatch.setenv(caps.ENV_VAR, "graph_n=10")
    with pytest.raises(TooLarge):
        Graph.empty(11)


def test_serialization_round_trip():
    g = petersen_graph()
    text = g.dumps()
    assert text.splitlines()[0] == "n=10"
    assert Graph.loads(text) == g
    assert g.digest() == Graph.loads(text).digest()


@given(graphs())
def test_edge_count_is_half_degree_sum(g):
    assert 2 * g.e == sum(g.degrees())
    assert g.edges() == sorted(g.edges())


# ---------------------------------------------------------------- proper square

def test_square_of_path_is_single_edge():
    assert proper_square(path_graph(3)).edges() == [(0, 2)]


def test_square_of_empty_graph():
    assert proper_square(Graph.empty(5)).e == 0


def test_square_of_c5_is_c5_on_distance_two_pairs():
    sq = proper_square(cycle_graph(5))
    assert sq.edges() == sorted(tuple(sorted((i, (i + 2) % 5))) for i in range(5))
    assert all(d == 2 for d in sq.degrees())


@given(graphs())
def test_square_matches_common_neighbour_definition(g):
    sq = proper_square(g)
    for x, y in itertools.combinations(range(g.n), 2):
        common = any(g.has_edge(x, z) and g.has_edge(z, y) for z in range(g.n))
        assert sq.has_edge(x, y) == common


@settings(max_examples=300)
@given(graphs(max_n=16))
def test_square_edge_inequality(g):
    lhs, rhs, ok = furedi_audit(g)
    assert ok and lhs >= rhs


# ---------------------------------------------------------------- min-degree ordering

def test_ordering_star():
    o = min_degree_ordering(star_graph(3))
    assert o.right_degrees == (1, 1, 1, 0)
    # after two leaves go, centre and last leaf tie at degree 1; lower index wins
    assert o.order == (1, 2, 0, 3)


def test_ordering_triangle():
    assert min_degree_ordering(complete_graph(3)).right_degrees == (2, 1, 0)


def test_ordering_four_cycle():
    o = min_degree_ordering(cycle_graph(4))
    assert o.order == (0, 1, 2, 3)
    assert o.right_degrees == (2, 1, 1, 0)


def test_ordering_respects_tiebreak():
    o = min_degree_ordering(cycle_graph(4), tiebreak=(3, 2, 1, 0))
    assert o.order[0] == 3


def test_ordering_rejects_bad_tiebreak():
    with pytest.raises(InvalidParameter):
        min_degree_ordering(cycle_graph(4), tiebreak=(0, 0, 1, 2))


@given(graphs(), st.randoms(use_true_random=False))
def test_ordering_is_greedy_and_sums_to_e(g, rnd):
    tb = list(range(g.n))
    rnd.shuffle(tb)
    o = min_degree_ordering(g, tb)
    assert sorted(o.order) == list(range(g.n))
    assert sum(o.right_degrees) == g.e
    for i, v in enumerate(o.order):
        rest = o.suffix_mask(i)
        assert o.right_degrees[i] == g.degree(v, rest) == min(g.degree(u, rest) for u in o.order[i:])


def test_split_partitions_edges():
    g = petersen_graph()
    s = split_by_prefix(g, min_degree_ordering(g), 4)
    assert s.X | s.Y == g.vertex_mask and s.X & s.Y == 0
    assert s.e_XY + s.e_X + s.e_Y == g.e
    assert s.delta == pytest.approx(0.4)


# ---------------------------------------------------------------- C4 checks

def test_c4_examples():
    assert not is_c4_free(complete_graph(4))
    assert is_c4_free(Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]))
    assert is_c4_free(polarity_graph(2))


def test_checkers_agree_exhaustively_small():
    for n in range(1, 6):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = Graph.from_edges(n, [e for i, e in enumerate(pairs) if mask >> i & 1])
            assert is_c4_free(g) == (not has_c4_subgraph(g))


@given(graphs(max_n=8))
def test_checkers_agree_random(g):
    assert is_c4_free(g) == (not has_c4_subgraph(g)) == (not host_c4s(g))


def test_cherry_counts():
    assert cherry_count(complete_graph(3)) == 3
    assert cherry_count(star_graph(4)) == 6
    assert cherry_count(cycle_graph(4)) == 4


def test_degree_square_audit_examples():
    total, bound, ok = degree_square_audit(cycle_graph(5))
    assert total == 20 and bound == pytest.approx(47.36, abs=0.01) and ok
    total, bound, ok = degree_square_audit(path_graph(2))
    assert total == 2 and bound == pytest.approx(9.657, abs=0.001) and ok
    # 4 absolute points of degree 3, the other 9 of degree 4
    total, _, ok = degree_square_audit(polarity_graph(3))
    assert total == 180 and ok
    with pytest.raises(NotC4Free):
        degree_square_audit(complete_graph(4))


# ---------------------------------------------------------------- random graphs

def test_random_graph_extremes():
    assert random_graph(5, 0.0, 1).e == 0
    assert random_graph(5, 1.0, 1) == complete_graph(5)


def test_random_graph_deterministic():
    assert random_graph(20, 0.5, 99) == random_graph(20, 0.5, 99)
    assert random_graph(20, 0.5, 99) != random_graph(20, 0.5, 100)


def test_random_bipartite_graph_has_no_inner_edges():
    g = random_bipartite_graph(4, 6, 0.7, 3)
    assert all((u < 4) != (v < 4) for u, v in g.edges())


# ---------------------------------------------------------------- exact maximum C4-free subgraph

@pytest.mark.parametrize("g,expected", [
    (complete_graph(4), 4),
    (cycle_graph(4), 3),
    (complete_graph(5), 6),
    (complete_graph(6), 7),
    (complete_graph(7), 9),
])
def test_exact_extremal_values(g, expected):
    edges, size = max_c4_free_subgraph_exact(g)
    assert size == expected == len(edges)
    sub = Graph.from_edges(g.n, edges)
    assert is_c4_free(sub) and sub.is_subgraph_of(g)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_exact_matches_brute_force(g):
    assert max_c4_free_subgraph_exact(g)[1] == brute_max_c4_free(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 10), st.floats(0.2, 0.9), st.integers(0, 2**32))
def test_exact_outputs_obey_extremal_bounds(n, p, seed):
    g = random_graph(n, p, seed)
    edges, size = max_c4_free_subgraph_exact(g)
    sub = Graph.from_edges(n, edges)
    assert size >= len(greedy_c4_free_subgraph(g))
    assert size <= c4_free_edge_bound(n)
    assert degree_square_audit(sub)[2]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.floats(0.3, 1.0), st.integers(0, 2**32))
def test_bipartite_bound_on_exact_outputs(a, b, p, seed):
    g = random_bipartite_graph(a, b, p, seed)
    size = max_c4_free_subgraph_exact(g)[1]
    assert size <= bipartite_c4_free_bound(a, b)


def test_exact_cap():
    with pytest.raises(TooLarge):
        max_c4_free_subgraph_exact(Graph.empty(30))


# ---------------------------------------------------------------- polarity graphs

@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_polarity_graphs(q):
    g = polarity_graph(q)
    assert g.n == q * q + q + 1
    assert g.e == q * (q + 1) ** 2 // 2
    assert is_c4_free(g)
    assert g.e <= c4_free_edge_bound(g.n)
    assert degree_square_audit(g)[2]


def test_polarity_q2_is_extremal_on_seven_vertices():
    assert polarity_graph(2).e == max_c4_free_subgraph_exact(complete_graph(7))[1] == 9


@pytest.mark.parametrize("q", [1, 6, 10, 11])
def test_polarity_unsupported(q):
    with pytest.raises(UnsupportedFieldOrder):
        polarity_graph(q)


def test_c4_free_edge_bound_value():
    assert c4_free_edge_bound(16) == pytest.approx(0.5 * 64 + 16)
    assert math.isclose(bipartite_c4_free_bound(4, 9), 4 * 3 + 18)
