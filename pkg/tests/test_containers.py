import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from containerlab.errors import FingerprintOverflow, InvalidParameter, NotC4Free, NotIndependent, NotReplayable, TooLarge
from containerlab.graph import (
    Graph,
    bits,
    complete_graph,
    cycle_graph,
    mask_of,
    min_degree_ordering,
    petersen_graph,
    polarity_graph,
    proper_square,
    random_graph,
    star_graph,
)
from containerlab.containers import (
    Fingerprint,
    audited_positions,
    bighole_audit,
    build_right_containers,
    classify_vertices,
    container_for_fingerprint,
    container_size_audit,
    coverage_failures,
    degree_hypothesis,
    enumerate_all_containers,
    hole_audit,
    independent_sets,
    kw_container,
    log_cubed_t,
    sparsify,
    stop_preset,
)
from containerlab.parallel import rng


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def brute_independent_sets(g):
    out = []
    for k in range(g.n + 1):
        for S in itertools.combinations(range(g.n), k):
            if all(not g.has_edge(u, v) for u, v in itertools.combinations(S, 2)):
                out.append(mask_of(S))
    return out


# ---------------------------------------------------------------- single container

def test_edgeless_square_keeps_everything():
    fp, c = kw_container(Graph.empty(4), [0, 1], stop_size=2)
    assert fp.vertices == (0, 1)
    assert c.vertices == (0, 1, 2, 3)


def test_star_square_trace():
    # the pivot is the centre first, then the leaves in index order
    square = star_graph(3)
    fp, c = kw_container(square, [2], stop_size=1)
    assert fp.vertices == (2,)
    assert set(c.vertices) >= {2}
    assert 0 not in c.vertices


def test_empty_independent_set_gives_pure_peel():
    square = proper_square(petersen_graph())
    fp, c = kw_container(square, [], stop_size=3)
    assert fp.vertices == ()
    assert len(c) == 3
    assert container_for_fingerprint(square, Fingerprint(()), stop_size=3) == c


def test_container_rejects_bad_input():
    square = cycle_graph(5)
    with pytest.raises(NotIndependent):
        kw_container(square, [0, 1])
    with pytest.raises(InvalidParameter):
        kw_container(square, [0], stop_size=5)
    with pytest.raises(NotReplayable):
        container_for_fingerprint(square, (4, 0))


@settings(max_examples=80, deadline=None)
@given(small_graphs(), st.data())
def test_container_holds_set_and_replays(g, data):
    square = proper_square(g)
    I = data.draw(st.sampled_from([list(bits(m)) for m in independent_sets(square)]))
    tb = data.draw(st.permutations(range(g.n)))
    stop = data.draw(st.integers(0, max(0, g.n - 1)))
    fp, c = kw_container(square, I, tiebreak=tb, stop_size=stop)
    assert set(I) <= set(c.vertices)
    assert set(fp.vertices) <= set(I)
    assert container_for_fingerprint(square, fp, tiebreak=tb, stop_size=stop) == c


def test_equal_fingerprints_give_equal_containers_on_c6():
    square = proper_square(cycle_graph(6))
    seen = {}
    for m in independent_sets(square):
        fp, c = kw_container(square, list(bits(m)), stop_size=1)
        assert seen.setdefault(fp, c) == c
    assert len(seen) < len(independent_sets(square))


# ---------------------------------------------------------------- families

def test_edgeless_family():
    fam = enumerate_all_containers(Graph.empty(3), stop_size=0, max_fingerprint=3)
    assert len(fam) <= 8
    assert not coverage_failures(fam)


def test_c5_family_covers_eleven_sets():
    square = proper_square(cycle_graph(5))
    sets = independent_sets(square)
    assert len(sets) == 11
    fam = enumerate_all_containers(square, stop_size=1)
    assert not coverage_failures(fam, sets)


def test_petersen_family_covers_everything():
    square = proper_square(petersen_graph())
    fam = enumerate_all_containers(square, stop_size=3)
    assert not coverage_failures(fam)
    assert fam.dumps().startswith("# graph=")


def test_family_limits():
    with pytest.raises(FingerprintOverflow):
        enumerate_all_containers(Graph.empty(4), max_fingerprint=1)
    with pytest.raises(TooLarge):
        enumerate_all_containers(Graph.empty(40))


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=8), st.integers(0, 3))
def test_family_covers_every_independent_set(g, stop):
    square = proper_square(g)
    stop = min(stop, max(0, g.n - 1))
    fam = enumerate_all_containers(square, stop_size=stop)
    sets = independent_sets(square)
    assert sorted(sets) == sorted(brute_independent_sets(square))
    assert not coverage_failures(fam, sets)
    for m in sets:
        fp, c = kw_container(square, list(bits(m)), stop_size=stop)
        assert fam.records[fp] == c


# ---------------------------------------------------------------- sparsifier

def test_sparsify_identity_and_determinism():
    g = petersen_graph()
    assert sparsify(g, 1, 5).F == g
    assert sparsify(g, 3, 5).F == sparsify(g, 3, 5).F
    with pytest.raises(InvalidParameter):
        sparsify(g, 0.5, 1)


def test_sparsify_mean_edges_on_k20():
    g = complete_graph(20)
    counts = np.array([sparsify(g, 4, s).F.e for s in range(10_000)])
    sigma = math.sqrt(190 * 0.25 * 0.75 / 10_000)
    assert abs(counts.mean() - 47.5) <= 3 * sigma


def test_presets():
    assert stop_preset("3sqrt", 100) == 30
    assert stop_preset("n3/5", 32) == 8
    assert stop_preset("kw", 100, b=0.1) == 13
    assert log_cubed_t(100) == pytest.approx(math.log(100) ** 3)
    with pytest.raises(InvalidParameter):
        log_cubed_t(2)
    with pytest.raises(InvalidParameter):
        stop_preset("nope", 9)


# ---------------------------------------------------------------- right containers

def test_right_containers_on_edgeless_graph():
    rc = build_right_containers(Graph.empty(6), 0.2)
    assert all(e.container == () and e.measure == 0 for e in rc.entries)


def test_right_containers_on_c6_hold_neighbourhoods():
    rc = build_right_containers(cycle_graph(6), 0.2)
    for e in rc.entries:
        assert len(e.neighbourhood) <= 2
        assert set(e.neighbourhood) <= set(e.container)


@pytest.mark.parametrize("q", [3, 4])
def test_right_container_overshoot_is_forced(q):
    # wherever the measure bound fails the container is already the bare neighbourhood
    rc = build_right_containers(polarity_graph(q), 0.2)
    for e in rc.entries:
        if not e.ok:
            assert e.container == e.neighbourhood


def test_right_containers_polarity_q5():
    rc = build_right_containers(polarity_graph(5), 0.2)
    assert rc.all_ok
    assert [e.position for e in rc.entries] == audited_positions(31, 0.2)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 16), st.floats(0.05, 0.5), st.integers(0, 2**32), st.floats(0.05, 0.6))
def test_right_container_invariants(n, p, seed, eps):
    g = random_graph(n, p, seed)
    try:
        rc = build_right_containers(g, eps)
    except NotC4Free:
        return
    order = rc.ordering
    for e in rc.entries:
        rest = set(order.order[e.position + 1:])
        assert set(e.neighbourhood) <= set(e.container) <= rest
        if not e.ok:
            assert e.container == e.neighbourhood


def test_right_containers_need_c4_free_input():
    with pytest.raises(NotC4Free):
        build_right_containers(complete_graph(4), 0.2)
    with pytest.raises(InvalidParameter):
        build_right_containers(cycle_graph(5), 1.0)


# ---------------------------------------------------------------- classification

def test_classification_edgeless():
    g = Graph.empty(9)
    o = min_degree_ordering(g)
    rep = classify_vertices(g, o, build_right_containers(g, 0.1), 0.1)
    assert sorted(rep.win) == list(range(9))


def test_classification_polarity_q5():
    g = polarity_graph(5)
    o = min_degree_ordering(g)
    rep = classify_vertices(g, o, build_right_containers(g, 0.01), 0.01)
    assert set(rep.alive_counts) == {e.position for e in build_right_containers(g, 0.01).entries}
    assert rep.huge_in_large == (set(rep.huge) <= set(rep.large))
    assert rep.alive_audit_ok == (not rep.fewlarge_violations and not rep.otherfewlarge_violations)


def test_nesting_at_small_epsilon():
    g = polarity_graph(5)
    o = min_degree_ordering(g)
    eps = 0.001
    rep = classify_vertices(g, o, build_right_containers(g, eps), eps)
    assert rep.nesting_applicable
    assert rep.huge_in_large and rep.large_in_alive1
    loose = classify_vertices(g, o, build_right_containers(g, 0.2), 0.2)
    assert not loose.nesting_applicable


def test_alive_sets_shrink_along_the_ordering():
    g = polarity_graph(5)
    o = min_degree_ordering(g)
    rep = classify_vertices(g, o, build_right_containers(g, 0.01), 0.01, positions=[0, 1])
    assert set(rep.alive[0]) <= set(o.order[1:])
    assert set(rep.alive[1]) <= set(o.order[2:])


# ---------------------------------------------------------------- size and hole audits

@pytest.mark.parametrize("q", [5, 7])
def test_hole_audits_on_polarity_graphs(q):
    g = polarity_graph(q)
    n, b = g.n, 0.1
    assert degree_hypothesis(g, g.vertex_mask, 0.5)
    size = math.ceil((1 + 3 * b) * math.sqrt(n))
    gen = rng(q)
    for _ in range(20):
        Z = mask_of(gen.choice(n, size, replace=False).tolist())
        assert hole_audit(g, Z, b)["ok"]
    big = mask_of(gen.choice(n, 3 * math.isqrt(n), replace=False).tolist())
    assert bighole_audit(g, big)["ok"]


def test_container_size_audit():
    square = proper_square(polarity_graph(3))
    fam = enumerate_all_containers(square, stop_size=stop_preset("kw", 13))
    sizes, bound, ok = container_size_audit(fam, 13, 0.1)
    assert bound == pytest.approx(1.4 * math.sqrt(13))
    assert ok == all(s <= bound for s in sizes)
