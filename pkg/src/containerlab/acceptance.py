"""The acceptance battery: twelve criteria, each with a runtime limit and a fast/full tier."""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field

from . import c4, containers, graph, hypergraph, metric
from .checks import Check
from .constants import C_HALF, gamma_and_cstar, kw_profile, slope_sign_changes
from .parallel import derive_seed, rng

log = logging.getLogger(__name__)

ROOT_SEED = 20240917


@dataclass
class CriterionResult:
    number: int
    title: str
    limit: float
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(c.holds for c in self.checks if c.asserted) and self.elapsed < self.limit

    def to_dict(self):
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "elapsed": self.elapsed,
            "limit": self.limit,
            "checks": [c.to_dict() for c in self.checks],
        }


def c01_constants():
    rep = gamma_and_cstar()
    return [
        Check("gamma", rep.gamma, 1.081919, "~=", tol=1e-5, tag="literature"),
        Check("c*", rep.c_star, 0.49, "~=", tol=0.01, tag="literature"),
        Check("gamma = (2/3)H(c*^2)/c*", kw_profile(rep.c_star), rep.gamma, "~=", tol=1e-8, tag="definition"),
        Check("(3 - 2 sqrt 2)/6", C_HALF, 0.02860, "~=", tol=1e-5, tag="literature"),
        Check("(3 - 2 sqrt 2)/6 >= 0.028", C_HALF, 0.028, ">=", tag="literature"),
        Check("profile slope sign changes", slope_sign_changes(kw_profile), 1, "==", tag="oracle"),
    ]


def c02_metric_counts():
    bad = []
    for n in range(3, 6):
        for r in range(1, 5):
            a, b = metric.brute_force_count(n, r), metric.count_via_hypergraph(n, r)
            if a != b:
                bad.append((n, r, a, b))
    return [
        Check("count mismatches, 3<=n<=5, 1<=r<=4", len(bad), 0, "==", note=str(bad[:3])),
        Check("count(3,2)", metric.count_via_hypergraph(3, 2), 8, "==", tag="oracle"),
        Check("count(3,3)", metric.count_via_hypergraph(3, 3), 24, "==", tag="oracle"),
    ]


def c03_metric_lower_bound():
    low = []
    for n in range(3, 6):
        for r in range(1, 5):
            if metric.brute_force_count(n, r) < metric.m_of_r(r) ** math.comb(n, 2):
                low.append((n, r))
    non_metric = []
    gen = rng(derive_seed(ROOT_SEED, 3))
    for n in range(3, 9):
        for r in range(1, 9):
            lo = (r + 1) // 2
            for _ in range(5):
                cols = tuple(int(x) for x in gen.integers(lo, r + 1, size=math.comb(n, 2)))
                if not metric.is_metric(metric.MetricColoring(n, r, cols)):
                    non_metric.append((n, r, cols))
    return [
        Check("(n,r) with count < m(r)^C(n,2)", len(low), 0, "==", note=str(low)),
        Check("interval colourings failing is_metric", len(non_metric), 0, "==", tag="definition"),
    ]


def c04_local_criterion():
    bad = {r: len(metric.local_criterion_scan(r)[1]) for r in range(1, 7)}
    return [Check("violation-free triples over the size bound, r<=6", sum(bad.values()), 0, "==", note=str(bad))]


def c05_furedi():
    failures = 0
    count = 0
    for i in range(10_000):
        n = 1 + i % 16
        p = round(0.1 * (1 + (i // 16) % 9), 1)
        g = graph.random_graph(n, p, derive_seed(ROOT_SEED, 5, i))
        failures += not graph.furedi_audit(g)[2]
        count += 1
    return [
        Check("graphs checked", count, 10_000, ">="),
        Check("e(G^2) < e(G) - floor(n/2) occurrences", failures, 0, "=="),
    ]


def _engine_failures(square, tiebreak, stop_size):
    """Soundness failures of the engine over every independent set of ``square``."""
    bad = 0
    for imask in containers.independent_sets(square):
        I = list(graph.bits(imask))
        fp, c = containers.kw_container(square, I, tiebreak, stop_size)
        T = set(fp.vertices)
        if not (T <= set(I) and imask & ~c.mask == 0):
            bad += 1
            continue
        again = containers.container_for_fingerprint(square, fp, tiebreak, stop_size)
        if again.vertices != c.vertices or again.fingerprint != fp:
            bad += 1
    return bad


def c06_container_engine():
    # all labelled graphs on n <= 6, each used directly as the square
    exhaustive = 0
    for n in range(1, 7):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = graph.Graph.from_edges(n, [e for j, e in enumerate(pairs) if mask >> j & 1])
            exhaustive += _engine_failures(g, None, 0)
    seeded = 0
    cover = 0
    gen = rng(derive_seed(ROOT_SEED, 6))
    for i in range(200):
        n = int(gen.integers(6, 13))
        p = float(gen.choice([0.15, 0.3, 0.5]))
        base = graph.random_graph(n, p, derive_seed(ROOT_SEED, 6, i))
        sq = graph.proper_square(base) if i % 2 else base
        tb = tuple(int(x) for x in gen.permutation(n))
        stop = int(gen.integers(0, 3))
        seeded += _engine_failures(sq, tb, stop)
        if n <= 8:
            fam = containers.enumerate_all_containers(sq, tb, stop)
            cover += len(containers.coverage_failures(fam))
    return [
        Check("engine failures, all graphs n<=6", exhaustive, 0, "=="),
        Check("engine failures, 200 seeded graphs n<=12", seeded, 0, "=="),
        Check("uncovered independent sets, enumerated families n<=8", cover, 0, "=="),
    ]


def c07_polytope():
    est = metric.polytope_volume_mc(3, 1_000_000, derive_seed(ROOT_SEED, 7))
    sigma = math.sqrt(0.25 / est.samples)
    return [
        Check("|rate - 1/2| / sigma", abs(est.rate - 0.5) / sigma, 4.0, "<=", tag="oracle"),
        Check("per-edge estimate", est.estimate, 0.5 ** (1 / 3), "~=", tol=0.003, tag="oracle"),
    ]


def c08_metric_stats():
    worst = {"delta1": 0.0, "delta2": 0.0, "delta3": 0.0}
    for n in range(3, 9):
        for r in range(1, 9):
            h, _ = metric.build_metric_hypergraph(n, r)
            st = hypergraph.degree_stats(h)
            worst["delta1"] = max(worst["delta1"], st.delta1 / (n * r * r))
            worst["delta2"] = max(worst["delta2"], st.delta2 / r)
            worst["delta3"] = max(worst["delta3"], st.delta3)
    return [
        Check("max Delta1 / (n r^2)", worst["delta1"], 1, "<=", tag="literature"),
        Check("max Delta2 / r", worst["delta2"], 1, "<=", tag="literature"),
        Check("max Delta3", worst["delta3"], 1, "<=", tag="literature"),
    ]


def c09_c4_counting():
    gamma = gamma_and_cstar().gamma
    over = [n for n in range(1, 8) if math.log2(c4.count_c4_free_graphs(n)) >= gamma * n ** 1.5]
    pg = graph.polarity_graph(2)
    return [
        Check("F_3", c4.count_c4_free_graphs(3), 8, "==", tag="definition"),
        Check("F_4", c4.count_c4_free_graphs(4), 54, "==", tag="oracle"),
        Check("n<=7 with log2 F_n >= gamma n^(3/2)", len(over), 0, "==", note=str(over)),
        Check("ex(4, C4)", graph.max_c4_free_subgraph_exact(graph.complete_graph(4))[1], 4, "=="),
        Check("ex(5, C4)", graph.max_c4_free_subgraph_exact(graph.complete_graph(5))[1], 6, "=="),
        Check("ex(7, C4)", graph.max_c4_free_subgraph_exact(graph.complete_graph(7))[1], 9, "=="),
        Check("polarity q=2 edges", pg.e, 9, "=="),
        Check("polarity q=2 vertices", pg.n, 7, "=="),
        Check("polarity q=2 is C4-free", graph.is_c4_free(pg), True, "=="),
    ]


def c10_blowup():
    bad = 0
    for base in (graph.cycle_graph(5), graph.polarity_graph(3)):
        for s in range(100):
            for full in (False, True):
                b = c4.morris_saxton_blowup(base, derive_seed(ROOT_SEED, 10, s), full)
                bad += not graph.is_c4_free(b.result)
    _, p0 = c4.expected_overlap_curve([])
    return [
        Check("blow-ups containing a C4", bad, 0, "=="),
        Check("p0 >= 0.15", p0, 0.15, ">=", tag="literature"),
        Check("p0 <= 0.25", p0, 0.25, "<=", tag="literature"),
    ]


def certificate_instance(i, root=ROOT_SEED):
    """Seeded host, C4-free subgraph and parameters for the round-trip battery."""
    gen = rng(derive_seed(root, 11, i))
    n = int(gen.integers(8, 17))
    host = graph.random_graph(n, float(gen.choice([0.3, 0.5, 0.8])), derive_seed(root, 11, i, 1))
    h = graph.Graph.from_edges(n, c4.heuristic_c4_free_subgraph(host, derive_seed(root, 11, i, 2)))
    delta = float(gen.uniform(0.2, 0.45))
    t = float(gen.choice([1.0, 2.0, 3.0]))
    return host, h, delta, t, derive_seed(root, 11, i, 3)


def certificate_battery(count=200, root=ROOT_SEED):
    """Round-trip failures and undetected single-edge mutations touching Y."""
    roundtrip, undetected, mutations = 0, 0, 0
    for i in range(count):
        host, h, delta, t, seed = certificate_instance(i, root)
        cert = c4.build_certificate(host, h, delta, t=t, seed=seed)
        roundtrip += not c4.verify_certificate(host, h, cert)
        ys = set(cert.Y)
        for u, v in host.edges():
            if u in ys or v in ys:
                mutations += 1
                undetected += c4.verify_certificate(host, h.with_edge_toggled(u, v), cert)
    return roundtrip, undetected, mutations


def chernoff_grid():
    """500 grid points ``(k, m, p)`` where the bound falls below the exact tail."""
    bad = []
    points = 0
    for m in range(10, 101, 10):
        for p in (0.1, 0.3, 0.5, 0.7, 0.9):
            for j in range(1, 11):
                k = m * j // 10
                points += 1
                exact = c4.binomial_upper_tail(k, m, p)
                if c4.chernoff_upper_tail(k, m, p) < float(exact) * (1 - 1e-12):
                    bad.append((k, m, p))
    return points, bad


def c11_certificates():
    roundtrip, undetected, mutations = certificate_battery()
    points, bad = chernoff_grid()
    return [
        Check("round-trip failures (200 instances)", roundtrip, 0, "=="),
        Check("mutations touching Y", mutations, 1, ">="),
        Check("undetected mutations touching Y", undetected, 0, "=="),
        Check("Chernoff grid points", points, 500, "=="),
        Check("grid points where the bound is below the exact tail", len(bad), 0, "==", tag="oracle"),
    ]


def c12_kkfree():
    rep = c4.kkfree_demo(5, 3)
    return [
        Check("turan(5, K3)", rep.turan, 6, "==", tag="oracle"),
        Check("count matches brute force", rep.count, c4.kkfree_brute(5, 3), "==", tag="oracle"),
        Check("log2 ratio > 1", rep.log2_ratio, 1, ">", asserted=False),
        Check("log2 ratio < 2.5", rep.log2_ratio, 2.5, "<", asserted=False),
    ]


CRITERIA = (
    (1, "constants", 1, c01_constants, "fast"),
    (2, "metric counting oracle equality", 60, c02_metric_counts, "fast"),
    (3, "metric lower bound and interval colourings", 10, c03_metric_lower_bound, "fast"),
    (4, "local criterion exhaustive scan", 300, c04_local_criterion, "full"),
    (5, "square edge inequality", 30, c05_furedi, "fast"),
    (6, "container engine soundness", 120, c06_container_engine, "fast"),
    (7, "polytope Monte Carlo", 30, c07_polytope, "fast"),
    (8, "metric hypergraph statistics", 60, c08_metric_stats, "fast"),
    (9, "C4 counting and extremal values", 300, c09_c4_counting, "fast"),
    (10, "blow-up and overlap root", 30, c10_blowup, "fast"),
    (11, "certificate round trip and Chernoff", 120, c11_certificates, "fast"),
    (12, "K_k-free demo", 30, c12_kkfree, "fast"),
)

SUITES = ("fast", "full")


def run_criterion(number):
    num, title, limit, fn, _ = CRITERIA[number - 1]
    start = time.perf_counter()
    checks = fn()
    res = CriterionResult(num, title, limit, checks, time.perf_counter() - start)
    log.info("criterion %d %s: %s (%.2fs)", num, title, "PASS" if res.passed else "FAIL", res.elapsed)
    return res


def run_suite(suite):
    from .errors import InvalidConfig

    if suite not in SUITES:
        raise InvalidConfig(f"unknown suite {suite!r}; choose from {SUITES}")
    chosen = [c[0] for c in CRITERIA if suite == "full" or c[4] == "fast"]
    return [run_criterion(i) for i in chosen]
