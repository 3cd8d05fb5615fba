"""Metric colourings of K_n, their hypergraph of non-metric triangles, and the polytope volume.

A colouring gives every pair of ``[n]`` a distance in ``1..r``.  Columns index
the pairs ``(u, v)``, ``u < v``, in lexicographic order; the hypergraph vertex
for colour ``a`` on column ``j`` has id ``(a - 1) * C(n, 2) + j``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import caps
from .checks import Check
from .errors import DeltaOutOfRange, EmptyColumn, EmptySet, InvalidParameter, TooLarge, TooSmallS
from .hypergraph import DegreeStats, Hypergraph3, degree_stats, edges_within, hypotheses_from_stats
from .parallel import derive_seed, pmap, rng


def m_of_r(r):
    if r < 1:
        raise InvalidParameter(f"r must be positive, got {r}")
    return (r + 2) // 2


def non_metric(a, b, c):
    """Some side is strictly longer than the other two together."""
    return 2 * max(a, b, c) > a + b + c


# ---------------------------------------------------------------- layout and hypergraph

@dataclass(frozen=True)
class ColumnLayout:
    n: int
    r: int
    pairs: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(itertools.combinations(range(self.n), 2)))

    @property
    def columns(self):
        return len(self.pairs)

    @property
    def vertex_count(self):
        return self.r * self.columns

    def column(self, u, v):
        u, v = min(u, v), max(u, v)
        # index of (u, v) among lexicographic pairs
        return u * (2 * self.n - u - 1) // 2 + (v - u - 1)

    def vertex(self, color, col):
        return (color - 1) * self.columns + col

    def decode(self, vid):
        color, col = divmod(vid, self.columns)
        return color + 1, col

    def vertices_of(self, colors):
        """Vertex set of a colouring given as one colour per column."""
        return [self.vertex(c, j) for j, c in enumerate(colors)]

    def triangles(self):
        """Column triples ``((a,b), (a,c), (b,c))`` for every triangle ``a < b < c``."""
        for a, b, c in itertools.combinations(range(self.n), 3):
            yield self.column(a, b), self.column(a, c), self.column(b, c)


def build_metric_hypergraph(n, r, cap=None):
    """Hypergraph whose edges are the non-metric colourings of single triangles."""
    if n < 3 or r < 1:
        raise InvalidParameter("need n >= 3 and r >= 1")
    layout = ColumnLayout(n, r)
    cap = caps.get("metric_hypergraph_vertices") if cap is None else cap
    if layout.vertex_count > cap:
        raise TooLarge(f"r*C(n,2) = {layout.vertex_count} exceeds the cap {cap}")
    bad = [t for t in itertools.product(range(1, r + 1), repeat=3) if non_metric(*t)]
    edges = []
    for ca, cb, cc in layout.triangles():
        for x, y, z in bad:
            edges.append((layout.vertex(x, ca), layout.vertex(y, cb), layout.vertex(z, cc)))
    return Hypergraph3(layout.vertex_count, tuple(edges)), layout


def metric_edge_count(n, r):
    """``C(n,3) * 3 C(r,3)``: at most one inequality can fail, and ``a + b < c`` has C(c-1, 2) solutions."""
    return math.comb(n, 3) * 3 * math.comb(r, 3)


# ---------------------------------------------------------------- colourings and counting

@dataclass(frozen=True)
class MetricColoring:
    n: int
    r: int
    colors: tuple

    def __post_init__(self):
        if len(self.colors) != math.comb(self.n, 2):
            raise InvalidParameter("need one colour per pair")
        if any(not 1 <= c <= self.r for c in self.colors):
            raise InvalidParameter(f"colours must lie in 1..{self.r}")

    def dumps(self):
        return f"{self.n} {self.r}\n" + " ".join(map(str, self.colors)) + "\n"

    @classmethod
    def loads(cls, text):
        tokens = text.split()
        n, r = int(tokens[0]), int(tokens[1])
        return cls(n, r, tuple(int(t) for t in tokens[2:]))


def is_metric(coloring):
    layout = ColumnLayout(coloring.n, coloring.r)
    col = coloring.colors
    return not any(non_metric(col[a], col[b], col[c]) for a, b, c in layout.triangles())


def interval_coloring(n, r, choose=None):
    """Colouring with every colour in ``[ceil(r/2), r]``; always metric."""
    lo = (r + 1) // 2
    k = math.comb(n, 2)
    if choose is None:
        cols = tuple(lo + (j % (r - lo + 1)) for j in range(k))
    else:
        cols = tuple(choose(j, lo, r) for j in range(k))
    return MetricColoring(n, r, cols)


def _vertex_order(n):
    """Columns ordered so each triangle is completed by its last column: (u, v) by v, then u."""
    layout = ColumnLayout(n, 1)
    return [layout.column(u, v) for v in range(1, n) for u in range(v)], layout


def _count_subtree(args):
    n, r, first = args
    order, layout = _vertex_order(n)
    checks = []
    for v in range(1, n):
        for u in range(v):
            # triangles (w, u, v) with w < u close when column (u, v) is assigned
            checks.append([(layout.column(w, v), layout.column(w, u)) for w in range(u)])
    col = [0] * layout.columns
    last = len(order) - 1

    def ok(k, c):
        for j1, j2 in checks[k]:
            if non_metric(c, col[j1], col[j2]):
                return False
        return True

    def rec(k):
        if k == last:
            return sum(1 for c in range(1, r + 1) if ok(k, c))
        total = 0
        j = order[k]
        for c in range(1, r + 1):
            if ok(k, c):
                col[j] = c
                total += rec(k + 1)
        col[j] = 0
        return total

    col[order[0]] = first
    return 1 if last == 0 else rec(1)


def brute_force_count(n, r, workers=1, cap=None):
    """Exact number of metric colourings of K_n with colours ``1..r``.

    Small spaces are enumerated outright; larger ones go through backtracking
    that closes each triangle on its last column, split over the colour of the
    first column.
    """
    if n < 2 or r < 1:
        raise InvalidParameter("need n >= 2 and r >= 1")
    k = math.comb(n, 2)
    cap = caps.get("metric_colorings") if cap is None else cap
    if r ** k > cap:
        raise TooLarge(f"r^C(n,2) = {r}^{k} exceeds the cap {cap}")
    if r ** k <= caps.get("metric_product_enum"):
        layout = ColumnLayout(n, r)
        tris = list(layout.triangles())
        return sum(
            1 for col in itertools.product(range(1, r + 1), repeat=k)
            if not any(non_metric(col[a], col[b], col[c]) for a, b, c in tris)
        )
    return sum(pmap(_count_subtree, [(n, r, c) for c in range(1, r + 1)], workers))


def count_via_hypergraph(n, r):
    """One-vertex-per-column independent sets of the metric hypergraph."""
    k = math.comb(n, 2)
    if r ** k > caps.get("metric_colorings"):
        raise TooLarge(f"r^C(n,2) = {r}^{k} exceeds the cap {caps.get('metric_colorings')}")
    h, layout = build_metric_hypergraph(n, r)
    order, _ = _vertex_order(n)
    rank = {col: i for i, col in enumerate(order)}

    def step(vid):
        return rank[layout.decode(vid)[1]]

    # partners[x]: pairs (y, z) completing a hyperedge with x, both placed before x
    partners = [[] for _ in range(h.N)]
    for e in h.edges:
        e = sorted(e, key=step)
        partners[e[2]].append((e[0], e[1]))
    chosen = bytearray(h.N)
    cols = [[layout.vertex(c, j) for c in range(1, r + 1)] for j in order]
    last = len(cols) - 1

    def free(x):
        return not any(chosen[y] and chosen[z] for y, z in partners[x])

    def rec(k):
        if k == last:
            return sum(1 for x in cols[k] if free(x))
        total = 0
        for x in cols[k]:
            if free(x):
                chosen[x] = 1
                total += rec(k + 1)
                chosen[x] = 0
        return total

    return rec(0)


# ---------------------------------------------------------------- local criterion

def local_criterion_check(A, B, C, r):
    """``(violation_free, bound_ok)`` for three non-empty colour sets.

    A non-metric triple exists iff some set's maximum beats the sum of the other
    two minima, so only extremes are inspected.  ``bound_ok`` is vacuously true
    when the triple is not violation-free.
    """
    if not A or not B or not C:
        raise EmptySet("A, B and C must be non-empty")
    for s in (A, B, C):
        if any(not 1 <= x <= r for x in s):
            raise InvalidParameter(f"colours must lie in 1..{r}")
    a0, a1, b0, b1, c0, c1 = min(A), max(A), min(B), max(B), min(C), max(C)
    free = a0 + b0 >= c1 and a0 + c0 >= b1 and b0 + c0 >= a1
    bound = 3 * m_of_r(r) + (r % 2)
    size = len(set(A)) + len(set(B)) + len(set(C))
    return free, (size <= bound) if free else True


def local_criterion_scan(r):
    """Every triple of non-empty subsets of ``[r]``; returns (violation-free count, counterexamples)."""
    subsets = []
    for mask in range(1, 1 << r):
        members = [i + 1 for i in range(r) if mask >> i & 1]
        subsets.append((members[0], members[-1], len(members), mask))
    bound = 3 * m_of_r(r) + (r % 2)
    free_count = 0
    bad = []
    for a0, a1, sa, ma in subsets:
        for b0, b1, sb, mb in subsets:
            ab = a0 + b0
            for c0, c1, sc, mc in subsets:
                if ab >= c1 and a0 + c0 >= b1 and b0 + c0 >= a1:
                    free_count += 1
                    if sa + sb + sc > bound:
                        bad.append((ma, mb, mc))
    return free_count, bad


# ---------------------------------------------------------------- maximum independent sets

@dataclass(frozen=True)
class MaxIndependentResult:
    n: int
    r: int
    max_size: int
    bound: int
    ok: bool
    exact: bool
    conjectured_odd_bound: float
    witness: tuple


def _triangle_closers(n):
    order, layout = _vertex_order(n)
    closers = []
    for v in range(1, n):
        for u in range(v):
            closers.append([(layout.column(w, v), layout.column(w, u)) for w in range(u)])
    return order, closers


def max_independent_audit(n, r, cap=None, mode="exact", seed=0, restarts=200):
    """Largest no-empty-column independent set of the metric hypergraph.

    Feasibility depends only on each column's smallest and largest colour, so
    an optimal set takes a full interval in every column; the exact search
    runs over intervals.  ``mode="sample"`` runs seeded local search instead
    and only certifies a lower bound.
    """
    k = math.comb(n, 2)
    cap = caps.get("max_independent_vertices") if cap is None else cap
    m = m_of_r(r)
    # r*C(n,2) is trivially valid and is the sharper of the two when r = 1
    bound = min(r * k, m * k + (r * n if r % 2 else 0))
    conj = m * k + (n / 2 if r % 2 else 0)
    intervals = [(lo, hi) for lo in range(1, r + 1) for hi in range(lo, r + 1)]
    intervals.sort(key=lambda iv: -(iv[1] - iv[0]))
    order, closers = _triangle_closers(n)

    def fits(pos, lo, hi, lows, highs):
        for j1, j2 in closers[pos]:
            if lo + lows[j1] < highs[j2] or lo + lows[j2] < highs[j1] or lows[j1] + lows[j2] < hi:
                return False
        return True

    if mode == "exact":
        if r * k > cap:
            raise TooLarge(f"r*C(n,2) = {r * k} exceeds the exact cap {cap}")
        lows, highs = [0] * k, [0] * k
        best = [0, None]

        def rec(pos, size):
            if pos == k:
                if size > best[0]:
                    best[0] = size
                    best[1] = (tuple(lows), tuple(highs))
                return
            if size + r * (k - pos) <= best[0]:
                return
            j = order[pos]
            for lo, hi in intervals:
                if fits(pos, lo, hi, lows, highs):
                    lows[j], highs[j] = lo, hi
                    rec(pos + 1, size + hi - lo + 1)
            lows[j], highs[j] = 0, 0

        rec(0, 0)
        size, (lows, highs) = best[0], best[1]
    elif mode == "sample":
        gen = rng(seed)
        best_size, best_w = -1, None
        for _ in range(restarts):
            lows, highs = [0] * k, [0] * k
            size = 0
            for pos, j in enumerate(order):
                shuffled = [intervals[i] for i in gen.permutation(len(intervals))]
                shuffled.sort(key=lambda iv: -(iv[1] - iv[0]))
                for lo, hi in shuffled:
                    if fits(pos, lo, hi, lows, highs):
                        lows[j], highs[j] = lo, hi
                        size += hi - lo + 1
                        break
            if size > best_size:
                best_size, best_w = size, (tuple(lows), tuple(highs))
        size, (lows, highs) = best_size, best_w
    else:
        raise InvalidParameter(f"mode must be 'exact' or 'sample', got {mode!r}")
    layout = ColumnLayout(n, r)
    witness = tuple(sorted(layout.vertex(c, j) for j in range(k) for c in range(lows[j], highs[j] + 1)))
    return MaxIndependentResult(n, r, size, bound, size <= bound, mode == "exact", conj, witness)


# ---------------------------------------------------------------- supersaturation

@dataclass(frozen=True)
class SupersaturationResult:
    edge_count: int
    required: float
    ok: bool
    asserted: bool
    size: int
    threshold: float


def supersaturation_audit(n, r, epsilon, S, assert_odd_from_n=None, hypergraph=None):
    """Hyperedges inside ``S`` against ``(eps/10) C(n,3)`` (even r) or ``(eps^4/40000) C(n,3)`` (odd r).

    For odd ``r`` the count is only asserted once ``n >= assert_odd_from_n``;
    below that (and by default) it is reported.
    """
    if epsilon <= 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon}")
    h, layout = hypergraph if hypergraph is not None else build_metric_hypergraph(n, r)
    S = set(S)
    seen = {layout.decode(v)[1] for v in S}
    if len(seen) != layout.columns:
        raise EmptyColumn(f"{layout.columns - len(seen)} columns have no vertex in S")
    threshold = (1 + epsilon) * layout.columns * m_of_r(r)
    if len(S) < threshold:
        raise TooSmallS(f"|S| = {len(S)} < (1+eps) C(n,2) m(r) = {threshold}")
    tri = math.comb(n, 3)
    required = epsilon / 10 * tri if r % 2 == 0 else epsilon ** 4 / 40000 * tri
    count = edges_within(h, S)
    asserted = r % 2 == 0 or (assert_odd_from_n is not None and n >= assert_odd_from_n)
    return SupersaturationResult(count, required, count >= required, asserted, len(S), threshold)


# ---------------------------------------------------------------- parameter chains

def _grid(max_log2=4096):
    """Scan points ``n = 2^(k/4)`` expressed by ``ln n``."""
    return [k / 4 * math.log(2) for k in range(8, 4 * max_log2 + 1)]


def _first_holding(pred):
    for ln_n in _grid():
        if pred(ln_n):
            return math.exp(ln_n) if ln_n < 700 else f"2^{ln_n / math.log(2):.2f}"
    return None


def metric_stats_bounds(n, r):
    """Co-degree statistics of the metric hypergraph at the bounds quoted for it."""
    return DegreeStats(delta1=n * r * r, delta2=r, delta3=1, dbar=None), r * r * n / 64


def _wojtek_logs(ln_n, r, delta, c):
    """Log-space quantities of the discrete counting chain at ``n = e^ln_n``."""
    L = ln_n  # ln n
    lL = math.log(L)
    log_p = -math.log(r) - (2 + delta) * lL
    log_alpha = math.log(1e10 * c) + (4 + 2 * delta) * lL - ln_n
    # Delta(H,p) using Delta2 <= r, Delta3 = 1, dbar >= r^2 n / 64
    log_dbar = 2 * math.log(r) + ln_n - math.log(64)
    t1 = math.log(4 * r) - log_dbar - log_p
    t2 = math.log(2) - log_dbar - 2 * log_p
    log_delta_stats = max(t1, t2) + math.log1p(math.exp(min(t1, t2) - max(t1, t2)))
    d1 = math.log(64) + (2 + delta) * lL - ln_n
    d2 = math.log(32) + (4 + 2 * delta) * lL - ln_n
    log_delta_display = math.log(4) + max(d1, d2) + math.log1p(math.exp(min(d1, d2) - max(d1, d2)))
    return {
        "log_p": log_p,
        "log_alpha": log_alpha,
        "log_delta_stats": log_delta_stats,
        "log_delta_display": log_delta_display,
        "log_delta_target": log_alpha - math.log(27 * c),
    }


@dataclass
class WojtekParameters:
    n: int
    r: int
    delta: float
    c: int
    p: float
    alpha: float
    exact_stats: bool
    stats: dict
    checks: list
    thresholds: dict


def wojtek_parameters(n, r, delta, c=1):
    """Evaluate every inequality of the discrete counting chain at ``(n, r, delta, c)``.

    Natural logarithms throughout.  Exact hypergraph statistics are used when
    the hypergraph fits under the cap; otherwise the quoted bounds stand in.
    Each check also reports the first point of a geometric grid in ``n`` where
    it holds.
    """
    if n < 3 or r < 1 or delta <= 0:
        raise InvalidParameter("need n >= 3, r >= 1, delta > 0")
    L = math.log(n)
    p = 1.0 / (r * L ** (2 + delta))
    alpha = 1e10 * c * L ** (4 + 2 * delta) / n
    k = math.comb(n, 2)
    N = r * k
    exact = N <= caps.get("metric_hypergraph_vertices")
    if exact:
        h, _ = build_metric_hypergraph(n, r)
        st = degree_stats(h)
        e_h = len(h.edges)
        stats = {"delta1": st.delta1, "delta2": st.delta2, "delta3": st.delta3, "dbar": float(st.dbar)}
    else:
        st = None
        e_h = metric_edge_count(n, r)
        stats = {"delta1": n * r * r, "delta2": r, "delta3": 1, "dbar": (n - 2) * (r - 1) * (r - 2) / 2}
    dbar = stats["dbar"]
    if dbar > 0 and p <= 1:
        delta_val = 4 * stats["delta2"] / (dbar * p) + 2 * stats["delta3"] / (dbar * p * p)
    else:
        delta_val = math.inf
    delta_display = 4 * (64 * L ** (2 + delta) / n + 64 * L ** (4 + 2 * delta) / (2 * n))
    edge_display = 1e4 * c * r ** 3 * n * n * L ** (4 + 2 * delta)
    log_count_thm = (3 ** 9 * c * (1 + math.log(1 / alpha)) * N * p * math.log(1 / p)) if alpha < 1 else math.nan
    loglog = math.log(L) if L > 1 else 0.0
    log_count_display = c * 3 ** 10 * r * n * n * L * math.log(r) * loglog / (r * L ** (2 + delta)) if r > 1 else 0.0

    checks = [
        Check("p*r*ln^(2+d) n = 1", p * r * L ** (2 + delta), 1.0, "~=", tol=1e-12, tag="definition"),
        Check("alpha*n/(1e10 c ln^(4+2d) n) = 1", alpha * n / (1e10 * c * L ** (4 + 2 * delta)), 1.0, "~=",
              tol=1e-12, tag="definition"),
        Check("p <= 1/(3^6 c)", p, 1 / (3 ** 6 * c), "<=", asserted=False),
        Check("alpha < 1", alpha, 1.0, "<", asserted=False),
        Check("dbar >= r^2 n / 64", dbar, r * r * n / 64, ">=", asserted=False),
        Check("Delta(H,p) <= displayed bound", delta_val, delta_display, "<=", asserted=False),
        Check("displayed bound <= alpha/(27c)", delta_display, alpha / (27 * c), "<=", asserted=False),
        Check("alpha*e(H) <= 1e4 c r^3 n^2 ln^(4+2d) n", alpha * e_h, edge_display, "<=", asserted=False),
        Check("log|C| (container theorem) <= displayed count bound", log_count_thm, log_count_display, "<=",
              asserted=False),
        Check("displayed count bound / n^2", log_count_display / (n * n), 1.0, "<", asserted=False),
    ]

    def grid_pred(name):
        def pred(ln_n):
            q = _wojtek_logs(ln_n, r, delta, c)
            if name == "p":
                return q["log_p"] <= -math.log(3 ** 6 * c)
            if name == "alpha":
                return q["log_alpha"] < 0
            if name == "delta_display":
                return q["log_delta_display"] <= q["log_delta_target"]
            if name == "hypotheses":
                return (q["log_p"] <= -math.log(3 ** 6 * c) and q["log_alpha"] < 0
                        and q["log_delta_stats"] <= q["log_delta_target"])
            raise KeyError(name)
        return pred

    thresholds = {name: _first_holding(grid_pred(name)) for name in ("p", "alpha", "delta_display", "hypotheses")}
    if exact and 0 < alpha < 1 and p <= 1:
        hyp = hypotheses_from_stats(st, N, p, alpha, c)
        stats["hypotheses_ok"] = hyp.ok
    return WojtekParameters(n, r, delta, c, p, alpha, exact, stats, checks, thresholds)


def even_closest(x):
    lo = 2 * math.floor(x / 2)
    hi = lo + 2
    r = lo if x - lo <= hi - x else hi
    return max(r, 2)


@dataclass
class ContinuousChain:
    n: float
    delta: float
    c: int
    r: int
    p: float
    alpha: float
    final_bound: float
    checks: list


def continuous_bound_chain(n, delta, c=1):
    """Numeric values of the discretisation argument for the polytope volume bound."""
    if not 0 < delta < 0.25:
        raise DeltaOutOfRange(f"delta must lie in (0, 1/4), got {delta}")
    if n < 3:
        raise InvalidParameter("n must be at least 3")
    n = float(n)
    r = even_closest(n ** (1 / 6 - delta / 2))
    p = n ** -(1 / 3 - delta / 4)
    alpha = 300 * c * n ** (delta - 2 / 3)
    L = math.log(n)
    k = n * (n - 1) / 2
    m = m_of_r(r)
    delta_stats = 256 / (r * n * p) + 128 / (r * r * n * p * p)
    mid = 300 * (1 / (r * n * p) + 1 / (p * p * r * r * n))
    display = 300 * (n ** (1 / 3 - delta / 4) / n ** (7 / 6 - delta / 2) + n ** (2 / 3 - delta / 2) / n ** (4 / 3 - delta))
    edge = alpha * n ** 3 * r ** 3
    count = n * n * r * p * L ** 3
    vertex_factor = 1 + n ** (-1 / 6 - delta / 6)
    log_per_edge = math.log((m + 1) / r) + n ** (2 - 1 / 6 - delta / 8) / k
    final = 0.5 + n ** -(1 / 6 - delta)
    checks = [
        Check("r is even", r % 2, 0, "==", tag="definition"),
        Check("Delta(H,p) < 300(1/(rnp) + 1/(p^2 r^2 n))", delta_stats, mid, "<", asserted=False),
        Check("300(...) <= displayed power form", mid, display, "<=", asserted=False),
        Check("displayed power form <= alpha", display, alpha, "<=", asserted=False),
        Check("alpha n^3 r^3 <= n^(3-1/6-d/4)", edge, n ** (3 - 1 / 6 - delta / 4), "<=", asserted=False),
        Check("n^2 r p ln^3 n <= n^(2-1/6-d/5)", count, n ** (2 - 1 / 6 - delta / 5), "<=", asserted=False),
        Check("per-edge discretised volume <= 1/2 + n^-(1/6-d)", math.exp(log_per_edge), final, "<=",
              asserted=False),
    ]
    chain = ContinuousChain(n, delta, c, r, p, alpha, final, checks)
    chain.vertex_factor = vertex_factor
    return chain


# ---------------------------------------------------------------- polytope Monte Carlo

@dataclass(frozen=True)
class PolytopeEstimate:
    n: int
    samples: int
    hits: int
    rate: float
    estimate: float
    interval: tuple
    seed: int
    bound: float
    limit: float = 0.5


def _triangle_index(n):
    layout = ColumnLayout(n, 1)
    return np.array(list(layout.triangles()), dtype=np.intp)


def _mc_block(args):
    n, count, seed, low = args
    tri = _triangle_index(n)
    k = math.comb(n, 2)
    x = rng(seed).random((count, k))
    if low:
        x = low + (1 - low) * x
    a, b, c = x[:, tri[:, 0]], x[:, tri[:, 1]], x[:, tri[:, 2]]
    good = (a <= b + c) & (b <= a + c) & (c <= a + b)
    return int(np.count_nonzero(good.all(axis=1)))


def polytope_volume_mc(n, samples, seed, workers=1, block=1 << 16, low=0.0, delta=0.05):
    """Fraction of uniform points of the cube satisfying every triangle inequality.

    ``low > 0`` samples each coordinate from ``[low, 1]`` instead.  The per-edge
    estimate is ``rate^(1/C(n,2))``; the interval maps a 95% normal interval
    of the rate through the same power.
    """
    if n < 3:
        raise InvalidParameter("n must be at least 3")
    if samples < 10_000:
        raise InvalidParameter("use at least 10^4 samples")
    sizes = [block] * (samples // block) + ([samples % block] if samples % block else [])
    tasks = [(n, s, derive_seed(seed, i), low) for i, s in enumerate(sizes)]
    hits = sum(pmap(_mc_block, tasks, workers))
    rate = hits / samples
    k = math.comb(n, 2)
    half = 1.96 * math.sqrt(rate * (1 - rate) / samples)
    lo, hi = max(rate - half, 0.0), min(rate + half, 1.0)
    return PolytopeEstimate(
        n=n, samples=samples, hits=hits, rate=rate, estimate=rate ** (1 / k),
        interval=(lo ** (1 / k), hi ** (1 / k)), seed=seed, bound=0.5 + n ** -(1 / 6 - delta),
    )


# ---------------------------------------------------------------- ceiling superadditivity

@dataclass(frozen=True)
class CeilResult:
    applicable: bool
    holds: bool


def ceil_superadditivity(a, b, c):
    """If ``a + b >= c`` then ``ceil(a) + ceil(b) >= ceil(c)``; vacuous otherwise."""
    if a + b < c:
        return CeilResult(False, True)
    return CeilResult(True, math.ceil(a) + math.ceil(b) >= math.ceil(c))
