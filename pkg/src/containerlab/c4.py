"""C4-free graphs: exact counts, random-host experiments, certificates and the small numeric curves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import caps
from .checks import Check
from .constants import C_CERTIFICATE, C_HALF, gamma_and_cstar
from .containers import Container, Fingerprint, container_for_fingerprint, kw_container, sparsify, stop_preset
from .errors import InvalidParameter, NotC4Free, NotReplayable, NotSubgraph, TooLarge, TooSparse
from .graph import (
    Graph,
    bits,
    greedy_c4_free_subgraph,
    is_c4_free,
    mask_of,
    max_c4_free_subgraph_exact,
    min_degree_ordering,
    proper_square,
    random_graph,
    _addable,
)
from .parallel import derive_seed, pmap, rng


# ---------------------------------------------------------------- exact counts

def _independent_count(adj, cand):
    """Independent subsets (empty included) of the graph ``adj`` restricted to ``cand``."""
    if not cand:
        return 1
    v = cand.bit_length() - 1
    rest = cand & ~(1 << v)
    return _independent_count(adj, rest) + _independent_count(adj, rest & ~adj[v])


def _extend(rows, allowed):
    """Graphs on one more vertex whose new neighbourhood passes ``allowed``."""
    k = len(rows)
    for s in range(1 << k):
        if allowed(rows, s):
            new = [r | ((s >> i & 1) << k) for i, r in enumerate(rows)]
            new.append(s)
            yield new


def _square_rows(rows):
    sq = [0] * len(rows)
    for z, nz in enumerate(rows):
        for x in bits(nz):
            sq[x] |= nz
    return [r & ~(1 << v) for v, r in enumerate(sq)]


def _c4_allowed(rows, s):
    # the new vertex closes a C4 iff two of its neighbours already share a neighbour
    seen = 0
    for a in bits(s):
        if rows[a] & seen:
            return False
        seen |= rows[a]
    return True


def count_c4_free_graphs(n):
    """Labelled C4-free graphs on ``n`` vertices.

    Grows graphs one vertex at a time; at the last level the admissible
    neighbourhoods are exactly the independent sets of the proper square.
    """
    limit = caps.get("c4_count_n")
    if n > limit:
        raise TooLarge(f"exact C4-free counting is capped at n = {limit}")
    if n < 0:
        raise InvalidParameter("n must be non-negative")
    if n <= 1:
        return 1
    level = [[0]]
    for _ in range(n - 2):
        level = [g for rows in level for g in _extend(rows, _c4_allowed)]
    full = (1 << (n - 1)) - 1
    return sum(_independent_count(_square_rows(rows), full) for rows in level)


def count_c4_free_brute(n):
    """Reference count over every labelled graph; only for ``n <= 5``."""
    if n > 5:
        raise TooLarge("brute-force reference count is limited to n <= 5")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    total = 0
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(n, [e for i, e in enumerate(pairs) if mask >> i & 1])
        total += is_c4_free(g)
    return total


def kw_bound_value(n, delta=0.0):
    """``(gamma - delta) n^(3/2)``, the leading term of the log2 count bound."""
    gamma = gamma_and_cstar().gamma
    if n < 1:
        raise InvalidParameter("n must be at least 1")
    if not 0 <= delta < gamma:
        raise InvalidParameter(f"delta must lie in [0, {gamma:.6f})")
    return (gamma - delta) * n ** 1.5


def _clique_free_allowed(size):
    def allowed(rows, s):
        return not _has_clique(rows, s, size)
    return allowed


def _has_clique(rows, cand, size):
    if size == 0:
        return True
    if cand.bit_count() < size:
        return False
    for v in bits(cand):
        cand &= ~(1 << v)
        if _has_clique(rows, cand & rows[v], size - 1):
            return True
    return False


def turan_number(n, k):
    """Edges of the balanced complete (k-1)-partite graph on ``n`` vertices."""
    parts = k - 1
    q, r = divmod(n, parts)
    sizes = [q + 1] * r + [q] * (parts - r)
    return (n * n - sum(s * s for s in sizes)) // 2


@dataclass(frozen=True)
class KkFreeReport:
    n: int
    k: int
    count: int
    turan: int
    log2_ratio: float


def kkfree_demo(n, k):
    """Exact count of labelled K_k-free graphs against ``2^ex(n, K_k)``."""
    limit = caps.get("kkfree_n")
    if n > limit:
        raise TooLarge(f"K_k-free counting is capped at n = {limit}")
    if not 3 <= k <= n:
        raise InvalidParameter("need 3 <= k <= n")
    level = [[]]
    allowed = _clique_free_allowed(k - 1)
    for _ in range(n):
        level = [g for rows in level for g in _extend(rows, allowed)]
    count = len(level)
    turan = turan_number(n, k)
    return KkFreeReport(n, k, count, turan, math.log2(count) / turan)


def kkfree_brute(n, k):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    total = 0
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for i, (u, v) in enumerate(pairs):
            if mask >> i & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        total += not _has_clique(rows, (1 << n) - 1, k)
    return total


# ---------------------------------------------------------------- random host experiment

def local_search(g, kept, seed, rounds=3):
    """Drop one kept edge and greedily refill; keep the move when it gains an edge."""
    gen = rng(seed)
    kept = list(kept)
    host = g.edges()
    for _ in range(rounds):
        improved = False
        for idx in gen.permutation(len(kept)):
            if idx >= len(kept):
                continue
            trial = kept[:idx] + kept[idx + 1:]
            rows = [0] * g.n
            for u, v in trial:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            present = set(trial)
            added = []
            for j in gen.permutation(len(host)):
                e = host[j]
                if e not in present and _addable(rows, *e):
                    rows[e[0]] |= 1 << e[1]
                    rows[e[1]] |= 1 << e[0]
                    present.add(e)
                    added.append(e)
            if len(added) >= 2:
                kept = trial + added
                improved = True
        if not improved:
            break
    return sorted(kept)


def heuristic_c4_free_subgraph(g, seed):
    """Random-order greedy insertion followed by the swap search; a lower-bound witness."""
    gen = rng(seed)
    edges = g.edges()
    order = [edges[i] for i in gen.permutation(len(edges))]
    return local_search(g, greedy_c4_free_subgraph(g, order), derive_seed(seed, 1))


def _trial(args):
    n, p, seed, mode = args
    g = random_graph(n, p, seed)
    out = {"seed": seed, "host_edges": g.e}
    if mode in ("heuristic", "both"):
        out["heuristic"] = len(heuristic_c4_free_subgraph(g, derive_seed(seed, 7)))
    if mode in ("exact", "both"):
        out["exact"] = max_c4_free_subgraph_exact(g)[1]
    return out


def c4_random_experiment(n, p, trials, seed, mode="exact", workers=1):
    """Largest C4-free subgraph of seeded ``G(n, p)`` samples against the two asymptotic thresholds.

    The thresholds are reported, never asserted: they are asymptotic.  In
    ``both`` mode the asserted check is that the heuristic never beats the
    exact optimum.
    """
    if trials < 1:
        raise InvalidParameter("trials must be at least 1")
    if not 0 <= p <= 1:
        raise InvalidParameter("p must lie in [0, 1]")
    if mode not in ("exact", "heuristic", "both"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    if mode != "heuristic" and n > caps.get("exact_c4_n"):
        raise TooLarge(f"exact mode is capped at n = {caps.get('exact_c4_n')}; use mode='heuristic'")
    tasks = [(n, p, derive_seed(seed, i), mode) for i in range(trials)]
    rows = pmap(_trial, tasks, workers)
    key = "exact" if mode != "heuristic" else "heuristic"
    sizes = [r[key] for r in rows]
    additive = (0.5 - 0.028) * n ** 1.5
    sqrt_form = 2 / 3 * math.sqrt(p) * n ** 1.5
    checks = [
        Check("max size <= (1/2 - 0.028) n^(3/2)", max(sizes), additive, "<=", asserted=False, tag="literature"),
        Check("max size <= (2/3) sqrt(p) n^(3/2)", max(sizes), sqrt_form, "<=", asserted=False, tag="literature"),
    ]
    if mode == "both":
        worst = max(r["heuristic"] - r["exact"] for r in rows)
        checks.append(Check("heuristic - exact <= 0 on every trial", worst, 0, "<="))
    return {
        "n": n,
        "p": p,
        "trials": trials,
        "seed": seed,
        "mode": mode,
        "sizes": sizes,
        "per_trial": rows,
        "max": max(sizes),
        "mean": sum(sizes) / len(sizes),
        "thresholds": {"additive": additive, "sqrt_p": sqrt_form, "c_half": C_HALF, "c_certificate": C_CERTIFICATE},
        "checks": checks,
    }


# ---------------------------------------------------------------- certificates

@dataclass
class Certificate:
    n: int
    Y: tuple
    F: tuple
    degrees: tuple
    full_degrees: tuple
    containers: tuple
    indices: tuple
    tiebreak: tuple
    stop_size: int
    split_found: bool
    threshold: float
    seed: int = 0
    t: float = 1.0

    @property
    def X(self):
        ys = set(self.Y)
        return tuple(v for v in range(self.n) if v not in ys)

    def to_dict(self):
        return {
            "n": self.n,
            "Y": list(self.Y),
            "F": [list(e) for e in self.F],
            "degrees": list(self.degrees),
            "full_degrees": list(self.full_degrees),
            "containers": [{"T": list(c.fingerprint.vertices), "C": list(c.vertices)} for c in self.containers],
            "indices": list(self.indices),
            "stop_size": self.stop_size,
            "split_found": self.split_found,
            "threshold": self.threshold,
            "seed": self.seed,
            "t": self.t,
        }


def split_scan(h, ordering, delta, epsilon):
    """Size of Y: scan ``delta n / 2 < i < delta n`` for a vertex with at least
    ``(1 - 2 eps) sqrt(n)`` neighbours beyond position ``delta n``.

    Returns ``(s, found)`` with ``Y = order[:s]``; falls back to ``floor(delta n)``.
    """
    n = h.n
    cut = math.floor(delta * n)
    beyond = mask_of(ordering.order[cut:])
    threshold = (1 - 2 * epsilon) * math.sqrt(n)
    lo = math.floor(delta * n / 2) + 1
    for i in range(lo, math.ceil(delta * n)):
        if i < 1:
            continue
        v = ordering.order[i - 1]
        if (h.adj[v] & beyond).bit_count() >= threshold:
            # X starts at v_i (1-based), so Y keeps the first i - 1 vertices
            return i - 1, True
    return cut, False


def build_certificate(host, h, delta, epsilon=0.1, t=2.0, seed=0, tiebreak=None, stop_size=None):
    """Certificate ``[Y, F, {d_j}, {r_j}]`` of a C4-free subgraph ``h`` of ``host``."""
    if h.n != host.n or not h.is_subgraph_of(host):
        raise NotSubgraph("H is not a subgraph of the host")
    if not is_c4_free(h):
        raise NotC4Free("H contains a C4")
    if not 0 < delta < 1:
        raise InvalidParameter("delta must lie in (0, 1)")
    ordering = min_degree_ordering(h, tiebreak)
    s, found = split_scan(h, ordering, delta, epsilon)
    Y = ordering.order[:s]
    xmask = h.vertex_mask & ~mask_of(Y)
    F = sparsify(h.induced(xmask), t, seed).F
    square = proper_square(F)
    size_x = xmask.bit_count()
    if stop_size is None:
        stop_size = stop_preset("kw", size_x)
    stop_size = max(0, min(stop_size, size_x - 1))
    family = {}
    indices = []
    for v in Y:
        fp, c = kw_container(square, bits(h.adj[v] & xmask), tiebreak, stop_size, xmask)
        if fp not in family:
            family[fp] = c
        indices.append(list(family).index(fp))
    tb = tuple(range(h.n)) if tiebreak is None else tuple(tiebreak)
    return Certificate(
        n=h.n,
        Y=tuple(Y),
        F=tuple(F.edges()),
        degrees=tuple((h.adj[v] & xmask).bit_count() for v in Y),
        full_degrees=tuple(h.degree(v) for v in Y),
        containers=tuple(family.values()),
        indices=tuple(indices),
        tiebreak=tb,
        stop_size=stop_size,
        split_found=found,
        threshold=(1 - 2 * epsilon) * math.sqrt(h.n),
        seed=seed,
        t=t,
    )


def certificate_failures(host, h, cert):
    """Reasons the certificate does not describe ``h``; empty when it does."""
    out = []
    if h.n != cert.n or host.n != cert.n:
        return ["vertex counts differ"]
    if not h.is_subgraph_of(host):
        out.append("H is not inside the host")
    xmask = h.vertex_mask & ~mask_of(cert.Y)
    try:
        F = Graph.from_edges(cert.n, cert.F)
    except InvalidParameter as exc:
        return [f"F is malformed: {exc}"]
    for u, v in cert.F:
        if not (h.has_edge(u, v) and xmask >> u & 1 and xmask >> v & 1):
            out.append(f"F edge {(u, v)} is not an edge of H[X]")
    square = proper_square(F)
    for c in cert.containers:
        try:
            rebuilt = container_for_fingerprint(square, c.fingerprint, cert.tiebreak, cert.stop_size, xmask)
        except NotReplayable as exc:
            out.append(f"container {c.fingerprint.vertices} does not replay: {exc}")
            continue
        if rebuilt.vertices != c.vertices:
            out.append(f"container {c.fingerprint.vertices} differs from its replay")
    if not (len(cert.Y) == len(cert.degrees) == len(cert.full_degrees) == len(cert.indices)):
        return out + ["per-vertex fields have different lengths"]
    for v, d, full, r in zip(cert.Y, cert.degrees, cert.full_degrees, cert.indices):
        nb = h.adj[v] & xmask
        if nb.bit_count() != d:
            out.append(f"d for vertex {v} is {d}, H gives {nb.bit_count()}")
        if h.degree(v) != full:
            out.append(f"degree of {v} is {full}, H gives {h.degree(v)}")
        if any(square.adj[x] & nb for x in bits(nb)):
            out.append(f"N({v}) & X is not independent in F^2")
        if not 0 <= r < len(cert.containers):
            out.append(f"container index {r} out of range")
        elif nb & ~cert.containers[r].mask:
            out.append(f"N({v}) & X is not inside container {r}")
    return out


def verify_certificate(host, h, cert):
    return not certificate_failures(host, h, cert)


# ---------------------------------------------------------------- excess degree and Chernoff

def _kl(a, b):
    out = 0.0
    if a > 0:
        out += a * math.log(a / b)
    if a < 1:
        out += (1 - a) * math.log((1 - a) / (1 - b))
    return out


def chernoff_upper_tail(k, m, p):
    """``exp(-m KL(k/m || p))`` when ``k/m > p``, else 1; bounds ``P(Bin(m, p) >= k)``."""
    if not 0 < p < 1:
        raise InvalidParameter("p must lie in (0, 1)")
    if not 0 <= k <= m:
        raise InvalidParameter("need 0 <= k <= m")
    if m == 0 or k / m <= p:
        return 1.0
    return math.exp(-m * _kl(k / m, p))


def binomial_upper_tail(k, m, p):
    """Exact ``P(Bin(m, p) >= k)`` with rational arithmetic; ``p`` is taken as an exact fraction."""
    p = Fraction(p)
    return sum(math.comb(m, j) * p ** j * (1 - p) ** (m - j) for j in range(k, m + 1))


@dataclass(frozen=True)
class ExcessReport:
    I: tuple
    D: float
    places: int
    mean: float
    k: int
    tail_bound: float


def excess_degree_report(h, ordering, p):
    """Positions whose right-degree exceeds ``p`` times their container size ``(n - i)/d*``.

    Positions are 1-based here.  The tail bound is for ``Bin(m', p)`` reaching
    ``ceil(p m' + D)`` where ``m' = ceil(sum_I (n - i)/d*)`` counts the places.
    """
    if not 0 < p < 1:
        raise InvalidParameter("p must lie in (0, 1)")
    n = h.n
    I, D, places = [], 0.0, 0.0
    for pos, d in enumerate(ordering.right_degrees, start=1):
        if d > 0 and d > (n - pos) * p / d:
            I.append(pos)
            D += d - (n - pos) * p / d
            places += (n - pos) / d
    m = math.ceil(places - 1e-12) if I else 0
    mean = p * m
    k = min(m, math.ceil(mean + D - 1e-12))
    return ExcessReport(tuple(I), D, m, mean, k, chernoff_upper_tail(k, m, p) if m else 1.0)


# ---------------------------------------------------------------- blow-up

@dataclass(frozen=True)
class BlowupGraph:
    base: Graph
    result: Graph
    matchings: tuple
    seed: int


# every matching between {2u, 2u+1} and {2v, 2v+1}, as (i, j) offsets
_MATCHINGS = ((), ((0, 0),), ((0, 1),), ((1, 0),), ((1, 1),), ((0, 0), (1, 1)), ((0, 1), (1, 0)))


def morris_saxton_blowup(g0, seed, full_matchings=False):
    """Double every vertex (``v -> 2v, 2v+1``) and put a random matching on each edge."""
    if not is_c4_free(g0):
        raise NotC4Free("blow-up needs a C4-free base graph")
    gen = rng(seed)
    choices = _MATCHINGS[5:] if full_matchings else _MATCHINGS
    picks, edges = [], []
    for u, v in g0.edges():
        m = choices[int(gen.integers(len(choices)))]
        picks.append(m)
        edges.extend((2 * u + i, 2 * v + j) for i, j in m)
    result = Graph.from_edges(2 * g0.n, edges)
    if not is_c4_free(result):
        raise NotC4Free("blow-up produced a C4")
    return BlowupGraph(g0, result, tuple(picks), seed)


# ---------------------------------------------------------------- curves

def overlap_gain(p):
    """Expected kept edges of the blow-up minus ``p n^(3/2) / 2``, per unit ``n^(3/2)``."""
    q = 1 - p
    return 2 ** -2.5 * (4 * p * q ** 3 + 2 * (2 * p * p * q * q + 4 * p ** 3 * q + p ** 4)) - p / 2


def expected_overlap_curve(p_grid, tol=1e-8):
    """Gain values on ``p_grid`` and the positive root ``p0`` found by bisection."""
    for p in p_grid:
        if not 0 <= p <= 1:
            raise InvalidParameter("p values must lie in [0, 1]")
    lo, hi = 1e-6, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if overlap_gain(mid) > 0:
            lo = mid
        else:
            hi = mid
    return [(p, overlap_gain(p)) for p in p_grid], (lo + hi) / 2


def regular_threshold(n, p):
    """``sqrt(p n)`` and, for ``d = 1..floor(sqrt n)``, the edges to place ``dn`` against the slots ``p n^2 / d``."""
    if n < 1 or not 0 < p <= 1:
        raise InvalidParameter("need n >= 1 and 0 < p <= 1")
    rows = []
    for d in range(1, math.isqrt(n) + 1):
        need, slots = d * n, p * n * n / d
        rows.append({"d": d, "dn": need, "pn2_over_d": slots, "fits": need <= slots})
    return math.sqrt(p * n), rows


# ---------------------------------------------------------------- many edges between Y and X

@dataclass(frozen=True)
class ManyEdgesAudit:
    e_xy: int
    threshold: float
    ok: bool
    size_y: int


def manyedges_audit(h, delta, gamma, c=0.0, tiebreak=None):
    """``e(X, Y)`` against ``(1 - gamma) delta n^(3/2)`` with ``Y`` the first ``delta n`` vertices."""
    n = h.n
    if not is_c4_free(h):
        raise NotC4Free("audit needs a C4-free graph")
    if not (0 <= delta < 0.5 and 0 < gamma < 0.5):
        raise InvalidParameter("need 0 <= delta < 1/2 and 0 < gamma < 1/2")
    need = 0.5 * (1 - c) * n ** 1.5
    if h.e <= need:
        raise TooSparse(f"e(H) = {h.e} does not exceed (1 - c) n^(3/2) / 2 = {need:.3f}")
    ordering = min_degree_ordering(h, tiebreak)
    s = math.floor(delta * n)
    ymask = mask_of(ordering.order[:s])
    e_xy = h.edges_between(ymask, h.vertex_mask & ~ymask)
    threshold = (1 - gamma) * delta * n ** 1.5
    return ManyEdgesAudit(e_xy, threshold, e_xy > threshold or s == 0, s)
