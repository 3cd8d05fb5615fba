import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from containerlab.c4 import (
    Certificate,
    build_certificate,
    certificate_failures,
    binomial_upper_tail,
    c4_random_experiment,
    chernoff_upper_tail,
    count_c4_free_brute,
    count_c4_free_graphs,
    excess_degree_report,
    expected_overlap_curve,
    heuristic_c4_free_subgraph,
    kkfree_brute,
    kkfree_demo,
    kw_bound_value,
    manyedges_audit,
    morris_saxton_blowup,
    overlap_gain,
    regular_threshold,
    split_scan,
    turan_number,
    verify_certificate,
)
from containerlab.constants import C_HALF, binary_entropy, gamma_and_cstar, slope_sign_changes, kw_profile
from containerlab.errors import InvalidParameter, NotC4Free, NotSubgraph, TooLarge, TooSparse
from containerlab.graph import (
    Graph,
    complete_graph,
    cycle_graph,
    greedy_c4_free_subgraph,
    is_c4_free,
    max_c4_free_subgraph_exact,
    min_degree_ordering,
    path_graph,
    polarity_graph,
    random_graph,
)

C4_FREE_COUNTS = [1, 1, 2, 8, 54, 548, 7984, 163440]


def graphs_on(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [e for i, e in enumerate(pairs) if mask >> i & 1]


def has_four_cycle(n, edges):
    es = set(edges) | {(v, u) for u, v in edges}
    for a, b, c, d in itertools.permutations(range(n), 4):
        if a < min(b, c, d) and b < d and (a, b) in es and (b, c) in es and (c, d) in es and (d, a) in es:
            return True
    return False


def has_triangle(n, edges):
    es = set(edges)
    return any((a, b) in es and (a, c) in es and (b, c) in es for a, b, c in itertools.combinations(range(n), 3))


@st.composite
def c4_free_graphs(draw, max_n=10):
    n = draw(st.integers(2, max_n))
    g = random_graph(n, draw(st.floats(0.1, 0.9)), draw(st.integers(0, 2**32)))
    return Graph.from_edges(n, greedy_c4_free_subgraph(g))


# ---------------------------------------------------------------- constants

def test_gamma_and_cstar():
    rep = gamma_and_cstar()
    assert rep.gamma == pytest.approx(1.081919, abs=1e-5)
    assert rep.c_star == pytest.approx(0.49, abs=0.01)
    assert slope_sign_changes(kw_profile) == 1
    assert binary_entropy(0.5) == 1.0
    assert C_HALF == pytest.approx(0.0286, abs=1e-4)


# ---------------------------------------------------------------- counting

@pytest.mark.parametrize("n", range(8))
def test_c4_free_counts_frozen(n):
    assert count_c4_free_graphs(n) == C4_FREE_COUNTS[n]


@pytest.mark.parametrize("n", range(1, 6))
def test_c4_free_counts_against_cycle_enumeration(n):
    direct = sum(1 for edges in graphs_on(n) if not has_four_cycle(n, edges))
    assert direct == count_c4_free_graphs(n) == count_c4_free_brute(n)


def test_count_caps():
    with pytest.raises(TooLarge):
        count_c4_free_graphs(40)
    with pytest.raises(TooLarge):
        count_c4_free_brute(6)


def test_kw_bound_value():
    gamma = gamma_and_cstar().gamma
    assert kw_bound_value(1) == pytest.approx(gamma)
    assert kw_bound_value(4) == pytest.approx(gamma * 8)
    assert kw_bound_value(4) > math.log2(54)
    for n in range(1, 8):
        assert math.log2(C4_FREE_COUNTS[n]) <= kw_bound_value(n)
    with pytest.raises(InvalidParameter):
        kw_bound_value(4, gamma)


# ---------------------------------------------------------------- K_k-free demo

def test_turan_numbers():
    assert [turan_number(n, 3) for n in (5, 6, 7)] == [6, 9, 12]
    assert turan_number(7, 4) == 16


@pytest.mark.parametrize("n", [3, 4, 5])
def test_triangle_free_counts_against_direct_enumeration(n):
    direct = sum(1 for edges in graphs_on(n) if not has_triangle(n, edges))
    assert direct == kkfree_demo(n, 3).count == kkfree_brute(n, 3)


def test_kkfree_frozen_values():
    assert kkfree_demo(5, 3).count == 388
    assert kkfree_demo(6, 3).count == kkfree_brute(6, 3) == 5789
    assert kkfree_demo(7, 3).count == 133501
    assert kkfree_demo(4, 4).count == 63
    assert kkfree_demo(5, 4).count == 958
    assert kkfree_demo(5, 5).count == 1023


def test_kkfree_report_fields():
    rep = kkfree_demo(6, 3)
    assert rep.turan == 9
    assert rep.log2_ratio == pytest.approx(math.log2(5789) / 9)
    with pytest.raises(InvalidParameter):
        kkfree_demo(4, 5)


# ---------------------------------------------------------------- random experiment

def test_random_experiment_extremes():
    assert c4_random_experiment(7, 0.0, 2, 1)["max"] == 0
    assert c4_random_experiment(7, 1.0, 1, 1)["max"] == 9


def test_random_experiment_reproducible_and_dominated():
    a = c4_random_experiment(12, 0.5, 6, 42, mode="both")
    b = c4_random_experiment(12, 0.5, 6, 42, mode="both", workers=2)
    assert a["sizes"] == b["sizes"]
    assert all(c.holds for c in a["checks"] if c.asserted)
    assert all(r["heuristic"] <= r["exact"] for r in a["per_trial"])
    with pytest.raises(InvalidParameter):
        c4_random_experiment(5, 0.5, 0, 1)


def test_heuristic_mode_runs_large():
    res = c4_random_experiment(40, 0.5, 2, 3, mode="heuristic")
    assert res["mode"] == "heuristic" and len(res["sizes"]) == 2


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 9), st.floats(0.2, 0.8), st.integers(0, 2**32))
def test_heuristic_output_is_c4_free_and_below_optimum(n, p, seed):
    g = random_graph(n, p, seed)
    edges = heuristic_c4_free_subgraph(g, seed)
    sub = Graph.from_edges(n, edges)
    assert is_c4_free(sub) and sub.is_subgraph_of(g)
    assert len(edges) <= max_c4_free_subgraph_exact(g)[1]


# ---------------------------------------------------------------- certificates

def polarity_in_clique(q=3, **kw):
    h = polarity_graph(q)
    host = complete_graph(h.n)
    return host, h, build_certificate(host, h, **kw)


def test_certificate_polarity_in_clique():
    host, h, cert = polarity_in_clique(delta=0.3, t=2)
    assert verify_certificate(host, h, cert)
    xmask = h.vertex_mask
    for v in cert.Y:
        xmask &= ~(1 << v)
    for v, r in zip(cert.Y, cert.indices):
        nb = h.adj[v] & xmask
        assert nb & ~cert.containers[r].mask == 0


def test_certificate_of_empty_graph():
    host = complete_graph(8)
    h = Graph.empty(8)
    cert = build_certificate(host, h, 0.5)
    assert cert.F == () and set(cert.degrees) <= {0}
    assert not cert.split_found and len(cert.Y) == 4
    assert verify_certificate(host, h, cert)


def test_certificate_detects_wrong_container():
    host, h, cert = polarity_in_clique(delta=0.3, t=1)
    if len(cert.containers) < 2:
        bad = Certificate(**{**cert.__dict__, "indices": (len(cert.containers),) + cert.indices[1:]})
    else:
        # point the first vertex at a container that misses one of its neighbours
        v = cert.Y[0]
        xs = set(cert.X)
        nb = {u for u in range(h.n) if h.has_edge(v, u) and u in xs}
        wrong = next((i for i, c in enumerate(cert.containers) if not nb <= set(c.vertices)), len(cert.containers))
        bad = Certificate(**{**cert.__dict__, "indices": (wrong,) + cert.indices[1:]})
    assert not verify_certificate(host, h, bad)


def test_certificate_detects_deleted_edge_at_y():
    host, h, cert = polarity_in_clique(delta=0.3, t=2)
    v = cert.Y[0]
    u = next(u for u in range(h.n) if h.has_edge(v, u))
    h2 = Graph.from_edges(h.n, [e for e in h.edges() if e != tuple(sorted((u, v)))])
    reasons = certificate_failures(host, h2, cert)
    assert any(f"vertex {v}" in r or f"of {v}" in r for r in reasons)


def test_certificate_preconditions():
    with pytest.raises(NotSubgraph):
        build_certificate(path_graph(4), cycle_graph(4), 0.3)
    with pytest.raises(NotC4Free):
        build_certificate(complete_graph(4), complete_graph(4), 0.3)
    with pytest.raises(InvalidParameter):
        build_certificate(complete_graph(4), path_graph(4), 1.0)


def test_split_scan_fallback_and_hit():
    h = polarity_graph(3)
    o = min_degree_ordering(h)
    s, found = split_scan(h, o, 0.5, 0.1)
    assert 0 <= s <= math.floor(0.5 * h.n)
    if not found:
        assert s == math.floor(0.5 * h.n)
    assert split_scan(Graph.empty(10), min_degree_ordering(Graph.empty(10)), 0.4, 0.1) == (4, False)


@settings(max_examples=30, deadline=None)
@given(c4_free_graphs(max_n=11), st.floats(0.1, 0.9), st.integers(0, 2**16))
def test_certificates_verify_and_catch_y_changes(h, delta, seed):
    host = complete_graph(h.n)
    cert = build_certificate(host, h, delta, seed=seed)
    assert verify_certificate(host, h, cert)
    for y in cert.Y:
        for u in range(h.n):
            if u == y:
                continue
            e = tuple(sorted((u, y)))
            edges = set(h.edges()) ^ {e}
            h2 = Graph.from_edges(h.n, sorted(edges))
            assert not verify_certificate(host, h2, cert)


# ---------------------------------------------------------------- excess degrees and tails

def test_excess_report_examples():
    empty = Graph.empty(5)
    rep = excess_degree_report(empty, min_degree_ordering(empty), 0.5)
    assert rep.I == () and rep.D == 0
    edge = path_graph(2)
    rep = excess_degree_report(edge, min_degree_ordering(edge), 0.5)
    assert rep.I == (1,) and rep.D == pytest.approx(0.5)


def test_excess_report_polarity_cross_check():
    h = polarity_graph(3)
    o = min_degree_ordering(h)
    rep = excess_degree_report(h, o, 0.5)
    n = h.n
    terms = [(pos, d) for pos, d in enumerate(o.right_degrees, start=1) if d > 0 and d > (n - pos) * 0.5 / d]
    D = sum(Fraction(d) - Fraction(n - pos, 2 * d) for pos, d in reversed(terms))
    assert rep.I == tuple(pos for pos, _ in terms) == (1, 2, 4, 6, 7, 9, 11, 12)
    assert rep.D == pytest.approx(float(D)) == pytest.approx(7.41667, abs=1e-5)
    assert (rep.places, rep.k) == (22, 19)


def test_chernoff_examples():
    assert chernoff_upper_tail(50, 100, 0.5) == 1.0
    assert chernoff_upper_tail(10, 10, 0.5) == pytest.approx(2 ** -10)
    assert chernoff_upper_tail(60, 100, 0.5) == pytest.approx(0.133514, abs=1e-6)
    assert float(binomial_upper_tail(60, 100, 0.5)) == pytest.approx(0.028444, abs=1e-6)
    with pytest.raises(InvalidParameter):
        chernoff_upper_tail(5, 4, 0.5)


@settings(max_examples=300)
@given(st.integers(1, 80), st.data(), st.sampled_from([0.05, 0.1, 0.25, 0.5, 0.7, 0.9]))
def test_chernoff_dominates_exact_tail(m, data, p):
    k = data.draw(st.integers(0, m))
    assert float(binomial_upper_tail(k, m, p)) <= chernoff_upper_tail(k, m, p) * (1 + 1e-9)


# ---------------------------------------------------------------- blow-up and curves

def test_blowup_examples():
    b = morris_saxton_blowup(path_graph(2), 0, full_matchings=True)
    assert b.result.n == 4 and b.result.e == 2 and is_c4_free(b.result)
    c5 = morris_saxton_blowup(cycle_graph(5), 1, full_matchings=True)
    assert (c5.result.n, c5.result.e) == (10, 10) and is_c4_free(c5.result)
    with pytest.raises(NotC4Free):
        morris_saxton_blowup(complete_graph(4), 0)


def test_blowup_polarity_seeds():
    base = polarity_graph(3)
    for seed in range(100):
        assert is_c4_free(morris_saxton_blowup(base, seed).result)


@settings(max_examples=60, deadline=None)
@given(c4_free_graphs(max_n=12), st.integers(0, 2**32), st.booleans())
def test_blowup_is_always_c4_free(g, seed, full):
    b = morris_saxton_blowup(g, seed, full)
    assert is_c4_free(b.result)
    assert b.result.e == sum(len(m) for m in b.matchings)


def test_overlap_curve():
    grid = [i / 20 for i in range(21)]
    values, p0 = expected_overlap_curve(grid)
    assert 0.15 <= p0 <= 0.25
    assert p0 == pytest.approx(0.200913, abs=1e-5)
    assert abs(overlap_gain(p0)) < 1e-6
    assert overlap_gain(0.1) > 0 > overlap_gain(0.5)
    assert len(values) == 21


def test_regular_threshold():
    assert regular_threshold(100, 1)[0] == pytest.approx(10)
    thr, rows = regular_threshold(16, 0.5)
    assert thr == pytest.approx(math.sqrt(8))
    assert [r["fits"] for r in rows] == [True, True, False, False]


# ---------------------------------------------------------------- many edges

def test_manyedges_audit():
    res = manyedges_audit(polarity_graph(5), 0.2, 0.3)
    assert (res.e_xy, res.size_y) == (21, 6)
    assert res.threshold == pytest.approx(0.7 * 0.2 * 31 ** 1.5)
    assert manyedges_audit(polarity_graph(5), 0.0, 0.3).ok
    with pytest.raises(TooSparse):
        manyedges_audit(cycle_graph(9), 0.2, 0.3)
